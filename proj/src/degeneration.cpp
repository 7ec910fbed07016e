#include "gwsurgery/degeneration.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace gwsurgery {

namespace {

long long apply_vec(const IntVec& f, const IntVec& v) {
    if (f.size() != v.size()) throw Error("functional/vector size mismatch");
    long long s = 0;
    for (size_t i = 0; i < f.size(); ++i) s += f[i] * v[i];
    return s;
}

bool is_zero(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

const IntVec& divisor_functional(const LatticePtr& lat, const std::string& label) {
    auto it = lat->divisor_pairings.find(label);
    if (it == lat->divisor_pairings.end())
        throw Error("no divisor pairing registered on " + lat->name + ": " + label);
    return it->second;
}

}  // namespace

AdmissibleGraph AdmissibleGraph::create(LatticePtr lattice, std::vector<GraphVertex> vertices,
                                        std::vector<int> legs, std::vector<GraphRoot> roots) {
    if (!lattice) throw Error("admissible graph: null lattice");
    const int nv = static_cast<int>(vertices.size());
    for (const auto& v : vertices) {
        if (v.genus < 0) throw Error("admissible graph: negative genus");
        if (v.cls.lattice != lattice) throw Error("admissible graph: vertex class lattice mismatch");
        if (!is_effective(v.cls)) throw Error("admissible graph: non-effective vertex class");
    }
    for (int leg : legs)
        if (leg < 0 || leg >= nv) throw Error("admissible graph: leg attached to missing vertex");
    for (const auto& r : roots) {
        if (r.vertex < 0 || r.vertex >= nv) throw Error("admissible graph: root attached to missing vertex");
        if (r.weight < 1) throw Error("admissible graph: root weight must be positive");
    }
    if (nv > 1) {
        std::vector<char> has_root(nv, 0);
        for (const auto& r : roots) has_root[r.vertex] = 1;
        for (int v = 0; v < nv; ++v)
            if (!has_root[v]) throw Error("admissible graph: not relatively connected");
    }
    // stability of unweighted vertices
    std::vector<int> special(nv, 0);
    for (int leg : legs) special[leg]++;
    for (const auto& r : roots) special[r.vertex]++;
    for (int v = 0; v < nv; ++v) {
        if (is_zero(vertices[v].cls.coords) && 2 * vertices[v].genus - 2 + special[v] <= 0)
            throw Error("admissible graph: unstable vertex with zero class");
    }
    AdmissibleGraph g;
    g.lattice = std::move(lattice);
    g.vertices = std::move(vertices);
    g.legs = std::move(legs);
    g.roots = std::move(roots);
    return g;
}

AdmissibleGraph AdmissibleGraph::empty(LatticePtr lattice) {
    AdmissibleGraph g;
    g.lattice = std::move(lattice);
    return g;
}

CurveClass AdmissibleGraph::total_class() const {
    IntVec sum(lattice->rank, 0);
    for (const auto& v : vertices)
        for (int i = 0; i < lattice->rank; ++i) sum[i] += v.cls.coords[i];
    return CurveClass{lattice, sum};
}

int AdmissibleGraph::total_genus() const {
    int g = 0;
    for (const auto& v : vertices) g += v.genus;
    return g;
}

AdmissibleTriple AdmissibleTriple::create(AdmissibleGraph gamma1, AdmissibleGraph gamma2,
                                          std::vector<int> marks1) {
    if (gamma1.roots.size() != gamma2.roots.size())
        throw Error("admissible triple: root counts differ");
    const int r = static_cast<int>(gamma1.roots.size());
    for (int i = 0; i < r; ++i)
        if (gamma1.roots[i].weight != gamma2.roots[i].weight)
            throw Error("admissible triple: root weights do not match");
    if (marks1.size() != gamma1.legs.size())
        throw Error("admissible triple: mark set size differs from leg count");
    for (size_t i = 0; i < marks1.size(); ++i) {
        if (marks1[i] < 1) throw Error("admissible triple: marks are 1-based");
        if (i > 0 && marks1[i] <= marks1[i - 1])
            throw Error("admissible triple: marks must be strictly increasing");
    }
    // connectivity of the joined graph
    const int n1 = static_cast<int>(gamma1.vertices.size());
    const int n2 = static_cast<int>(gamma2.vertices.size());
    const int total = n1 + n2;
    if (total > 0) {
        std::vector<int> parent(total);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int i = 0; i < r; ++i)
            parent[find(gamma1.roots[i].vertex)] = find(n1 + gamma2.roots[i].vertex);
        std::set<int> comps;
        for (int v = 0; v < total; ++v) comps.insert(find(v));
        if (comps.size() != 1) throw Error("admissible triple: joined graph not connected");
    }
    AdmissibleTriple eta;
    eta.gamma1 = std::move(gamma1);
    eta.gamma2 = std::move(gamma2);
    eta.marks1 = std::move(marks1);
    return eta;
}

int genus(const AdmissibleTriple& eta) {
    const int r = eta.root_count();
    const int nv = static_cast<int>(eta.gamma1.vertices.size() + eta.gamma2.vertices.size());
    return r + 1 - nv + eta.gamma1.total_genus() + eta.gamma2.total_genus();
}

long long degree(const AdmissibleTriple& eta, const IntVec& h1, const IntVec& h2) {
    long long d = 0;
    for (const auto& v : eta.gamma1.vertices) d += apply_vec(h1, v.cls.coords);
    for (const auto& v : eta.gamma2.vertices) d += apply_vec(h2, v.cls.coords);
    return d;
}

long long root_multiplicity(const AdmissibleTriple& eta) {
    long long m = 1;
    for (const auto& r : eta.gamma1.roots) m *= r.weight;
    return m;
}

std::string graph_key(const AdmissibleGraph& g) {
    const int nv = static_cast<int>(g.vertices.size());
    // vertex records: (genus, class, incident legs, incident (root index, weight))
    std::vector<std::string> record(nv);
    for (int v = 0; v < nv; ++v) {
        std::ostringstream os;
        os << g.vertices[v].genus << '|';
        for (long long c : g.vertices[v].cls.coords) os << c << ',';
        os << "|L";
        for (size_t j = 0; j < g.legs.size(); ++j)
            if (g.legs[j] == v) os << j << ',';
        os << "|R";
        for (size_t j = 0; j < g.roots.size(); ++j)
            if (g.roots[j].vertex == v) os << j << ':' << g.roots[j].weight << ',';
        record[v] = os.str();
    }
    std::vector<int> order(nv);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return record[a] < record[b]; });
    std::vector<int> newidx(nv);
    for (int i = 0; i < nv; ++i) newidx[order[i]] = i;

    std::ostringstream os;
    os << "V" << nv << '[';
    for (int i = 0; i < nv; ++i) {
        const auto& vx = g.vertices[order[i]];
        os << '(' << vx.genus << ';';
        for (long long c : vx.cls.coords) os << c << ',';
        os << ')';
    }
    os << "]L[";
    for (int leg : g.legs) os << newidx[leg] << ',';
    os << "]R[";
    for (const auto& r : g.roots) os << newidx[r.vertex] << ':' << r.weight << ',';
    os << ']';
    return os.str();
}

std::string triple_key(const AdmissibleTriple& eta) {
    std::ostringstream os;
    os << "G1{" << graph_key(eta.gamma1) << "}G2{" << graph_key(eta.gamma2) << "}I{";
    for (int m : eta.marks1) os << m << ',';
    os << '}';
    return os.str();
}

namespace {

AdmissibleTriple permute_roots(const AdmissibleTriple& eta, const std::vector<int>& perm) {
    AdmissibleTriple out = eta;
    for (size_t i = 0; i < perm.size(); ++i) {
        out.gamma1.roots[i] = eta.gamma1.roots[perm[i]];
        out.gamma2.roots[i] = eta.gamma2.roots[perm[i]];
    }
    return out;
}

}  // namespace

int eq_count(const AdmissibleTriple& eta) {
    const int r = eta.root_count();
    if (r > 8) throw Error("eq_count: more than 8 roots");
    if (r == 0) return 1;
    std::vector<int> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    const std::string base = triple_key(eta);
    int count = 0;
    do {
        if (triple_key(permute_roots(eta, perm)) == base) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

void EnumerationCaps::validate() const {
    if (max_vertices < 1 || max_genus < 0 || max_weight < 1)
        throw Error("enumeration caps must be positive");
    if (max_vertices > 6 || max_weight > 8) throw Error("enumeration caps too large");
}

void BlowupGeometry::validate() const {
    if (!down || !y1 || !y2) throw Error("blow-up geometry: missing lattice");
    if (p1.source != y1 || p1.target != down || p2.source != y2 || p2.target != down)
        throw Error("blow-up geometry: projection lattices inconsistent");
    if (gamma1.lattice != y1 || gamma2.lattice != y2)
        throw Error("blow-up geometry: fiber class lattices inconsistent");
    if (!is_zero(p1.apply(gamma1).coords) || !is_zero(p2.apply(gamma2).coords))
        throw Error("blow-up geometry: fiber classes not contracted");
    auto positive_on_gens = [](const LatticePtr& lat, const IntVec& amp) {
        for (const auto& g : lat->effective_generators)
            if (apply_vec(amp, g) <= 0) throw Error("ample functional not positive on a generator");
    };
    positive_on_gens(down, ample_down);
    positive_on_gens(y1, ample1);
    positive_on_gens(y2, ample2);
    divisor_functional(y1, exc1);
    divisor_functional(y2, exc2);
}

void ConifoldGeometry::validate() const {
    if (!down || !ytilde || !quadric) throw Error("conifold geometry: missing lattice");
    if (p1.source != ytilde || p1.target != down)
        throw Error("conifold geometry: projection lattices inconsistent");
    if (gamma21.lattice != ytilde || gamma22.lattice != ytilde || quadric_gen.lattice != quadric)
        throw Error("conifold geometry: class lattices inconsistent");
    if (!is_zero(p1.apply(gamma21).coords) || !is_zero(p1.apply(gamma22).coords))
        throw Error("conifold geometry: ruling classes not contracted");
    const IntVec e1 = divisor_functional(ytilde, exc1);
    if (apply_vec(e1, gamma21.coords) != -1 || apply_vec(e1, gamma22.coords) != -1)
        throw Error("conifold geometry: rulings must pair to -1 with E");
    const IntVec e2 = divisor_functional(quadric, exc2);
    if (apply_vec(e2, quadric_gen.coords) != 1)
        throw Error("conifold geometry: quadric generator must pair to +1 with E");
    auto positive_on_gens = [](const LatticePtr& lat, const IntVec& amp) {
        for (const auto& g : lat->effective_generators)
            if (apply_vec(amp, g) <= 0) throw Error("ample functional not positive on a generator");
    };
    positive_on_gens(down, ample_down);
    positive_on_gens(ytilde, ample1);
    positive_on_gens(quadric, ample2);
}

namespace {

// all effective classes with ample degree <= maxdeg, including 0
std::vector<IntVec> effective_up_to(const LatticePtr& lat, const IntVec& ample, long long maxdeg) {
    std::set<IntVec> seen;
    std::vector<IntVec> queue;
    IntVec zero(lat->rank, 0);
    seen.insert(zero);
    queue.push_back(zero);
    for (size_t head = 0; head < queue.size(); ++head) {
        IntVec cur = queue[head];
        for (const auto& g : lat->effective_generators) {
            IntVec next = cur;
            for (int i = 0; i < lat->rank; ++i) next[i] += g[i];
            if (apply_vec(ample, next) > maxdeg) continue;
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return {seen.begin(), seen.end()};
}

struct SideStructure {
    std::vector<IntVec> classes;  // per vertex
    std::vector<int> legs;        // vertex per leg
    std::vector<int> roots;       // vertex per root
};

// ordered effective partitions of `total` into exactly k parts (zero allowed)
void partitions_rec(const std::vector<IntVec>& candidates, const IntVec& total,
                    const IntVec& ample, int k, std::vector<IntVec>& cur,
                    std::vector<std::vector<IntVec>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        IntVec sum(total.size(), 0);
        for (const auto& c : cur)
            for (size_t i = 0; i < sum.size(); ++i) sum[i] += c[i];
        if (sum == total) out.push_back(cur);
        return;
    }
    long long used = 0;
    for (const auto& c : cur) used += apply_vec(ample, c);
    for (const auto& cand : candidates) {
        if (used + apply_vec(ample, cand) > apply_vec(ample, total)) continue;
        cur.push_back(cand);
        partitions_rec(candidates, total, ample, k, cur, out);
        cur.pop_back();
    }
}

std::vector<SideStructure> enumerate_structures(const LatticePtr& lat, const IntVec& ample,
                                                const IntVec& total, int n_legs, int r,
                                                const EnumerationCaps& caps) {
    std::vector<SideStructure> out;
    const long long deg = apply_vec(ample, total);
    if (deg < 0) return out;
    const auto candidates = effective_up_to(lat, ample, deg);
    for (int k = 1; k <= caps.max_vertices; ++k) {
        std::vector<std::vector<IntVec>> parts;
        std::vector<IntVec> cur;
        partitions_rec(candidates, total, ample, k, cur, parts);
        for (const auto& classes : parts) {
            // assignments of legs and roots to vertices
            std::vector<int> legassign(n_legs, 0);
            while (true) {
                std::vector<int> rcur(r, 0);
                while (true) {
                    bool ok = true;
                    if (k > 1) {
                        std::vector<char> hasroot(k, 0);
                        for (int x : rcur) hasroot[x] = 1;
                        for (int v = 0; v < k && ok; ++v)
                            if (!hasroot[v]) ok = false;
                    }
                    if (ok) out.push_back(SideStructure{classes, legassign, rcur});
                    int pos = r - 1;
                    while (pos >= 0 && rcur[pos] == k - 1) rcur[pos--] = 0;
                    if (pos < 0) break;
                    rcur[pos]++;
                }
                int pos = n_legs - 1;
                while (pos >= 0 && legassign[pos] == k - 1) legassign[pos--] = 0;
                if (pos < 0) break;
                legassign[pos]++;
            }
        }
    }
    return out;
}

bool joined_connected(int k1, const std::vector<int>& roots1, int k2,
                      const std::vector<int>& roots2) {
    const int total = k1 + k2;
    if (total == 0) return false;
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < roots1.size(); ++i) parent[find(roots1[i])] = find(k1 + roots2[i]);
    int root0 = find(0);
    for (int v = 1; v < total; ++v)
        if (find(v) != root0) return false;
    return true;
}

bool stable_assignment(const std::vector<IntVec>& classes, const std::vector<int>& genera,
                       const std::vector<int>& legs, const std::vector<int>& roots) {
    std::vector<int> special(classes.size(), 0);
    for (int v : legs) special[v]++;
    for (int v : roots) special[v]++;
    for (size_t v = 0; v < classes.size(); ++v)
        if (is_zero(classes[v]) && 2 * genera[v] - 2 + special[v] <= 0) return false;
    return true;
}

// compositions of total into `slots` parts each in [0, cap]
void genus_compositions(int slots, int total, int cap, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
    if (slots == 0) {
        if (total == 0) out.push_back(cur);
        return;
    }
    for (int g = 0; g <= std::min(total, cap); ++g) {
        cur.push_back(g);
        genus_compositions(slots - 1, total - g, cap, cur, out);
        cur.pop_back();
    }
}

// weight sequences (mu_1..mu_r), each in [1, cap], summing to l2, for all r
std::vector<std::vector<int>> weight_sequences(int l2, int cap) {
    std::vector<std::vector<int>> out;
    if (l2 == 0) {
        out.push_back({});
        return out;
    }
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int rem) {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int w = 1; w <= std::min(rem, cap); ++w) {
            cur.push_back(w);
            rec(rem - w);
            cur.pop_back();
        }
    };
    rec(l2);
    return out;
}

class TripleCollector {
public:
    void add(AdmissibleTriple eta) {
        const int r = eta.root_count();
        std::vector<int> perm(r);
        std::iota(perm.begin(), perm.end(), 0);
        std::string best = triple_key(eta);
        AdmissibleTriple rep = eta;
        if (r > 1) {
            do {
                AdmissibleTriple p = permute_roots(eta, perm);
                std::string k = triple_key(p);
                if (k < best) {
                    best = std::move(k);
                    rep = std::move(p);
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        if (seen_.count(best)) return;
        seen_.insert(best);
        TripleRecord rec;
        rec.key = best;
        rec.key1 = graph_key(rep.gamma1);
        rec.key2 = graph_key(rep.gamma2);
        rec.genus = genus(rep);
        rec.multiplicity = root_multiplicity(rep);
        rec.eq = eq_count(rep);
        rec.triple = std::move(rep);
        records_.push_back(std::move(rec));
    }

    std::vector<TripleRecord> take() {
        std::sort(records_.begin(), records_.end(),
                  [](const TripleRecord& a, const TripleRecord& b) { return a.key < b.key; });
        return std::move(records_);
    }

private:
    std::set<std::string> seen_;
    std::vector<TripleRecord> records_;
};

// all triples with given side totals and matching weights; empty sides allowed
void emit_two_sided(const LatticePtr& lat1, const IntVec& amp1, const IntVec& b1,
                    const LatticePtr& lat2, const IntVec& amp2, const IntVec& b2, int l2,
                    int g, int n, const EnumerationCaps& caps, TripleCollector& sink) {
    for (const auto& weights : weight_sequences(l2, caps.max_weight)) {
        const int r = static_cast<int>(weights.size());
        for (int n1 = 0; n1 <= n; ++n1) {
            const int n2 = n - n1;
            auto sides1 = enumerate_structures(lat1, amp1, b1, n1, r, caps);
            auto sides2 = enumerate_structures(lat2, amp2, b2, n2, r, caps);
            // subsets I of {1..n} with |I| = n1
            std::vector<std::vector<int>> marksets;
            {
                std::vector<int> comb;
                std::function<void(int)> rec = [&](int start) {
                    if (static_cast<int>(comb.size()) == n1) {
                        marksets.push_back(comb);
                        return;
                    }
                    for (int m = start; m <= n; ++m) {
                        comb.push_back(m);
                        rec(m + 1);
                        comb.pop_back();
                    }
                };
                rec(1);
            }
            for (const auto& s1 : sides1) {
                const int k1 = static_cast<int>(s1.classes.size());
                for (const auto& s2 : sides2) {
                    const int k2 = static_cast<int>(s2.classes.size());
                    if (!joined_connected(k1, s1.roots, k2, s2.roots)) continue;
                    const int gsum = g + k1 + k2 - r - 1;
                    if (gsum < 0) continue;
                    std::vector<std::vector<int>> gens;
                    std::vector<int> gcur;
                    genus_compositions(k1 + k2, gsum, caps.max_genus, gcur, gens);
                    for (const auto& gvec : gens) {
                        std::vector<int> g1v(gvec.begin(), gvec.begin() + k1);
                        std::vector<int> g2v(gvec.begin() + k1, gvec.end());
                        if (!stable_assignment(s1.classes, g1v, s1.legs, s1.roots)) continue;
                        if (!stable_assignment(s2.classes, g2v, s2.legs, s2.roots)) continue;
                        std::vector<GraphVertex> v1(k1), v2(k2);
                        bool eff_ok = true;
                        try {
                            for (int i = 0; i < k1; ++i)
                                v1[i] = GraphVertex{g1v[i], CurveClass{lat1, s1.classes[i]}};
                            for (int i = 0; i < k2; ++i)
                                v2[i] = GraphVertex{g2v[i], CurveClass{lat2, s2.classes[i]}};
                            std::vector<GraphRoot> r1(r), r2(r);
                            for (int i = 0; i < r; ++i) {
                                r1[i] = GraphRoot{s1.roots[i], weights[i]};
                                r2[i] = GraphRoot{s2.roots[i], weights[i]};
                            }
                            auto gr1 = AdmissibleGraph::create(lat1, v1, s1.legs, r1);
                            auto gr2 = AdmissibleGraph::create(lat2, v2, s2.legs, r2);
                            for (const auto& marks : marksets)
                                sink.add(AdmissibleTriple::create(gr1, gr2, marks));
                        } catch (const Error&) {
                            eff_ok = false;
                        }
                        (void)eff_ok;
                    }
                }
            }
        }
    }
}

// single-graph block: one admissible graph carrying everything, no roots
void emit_one_sided(const LatticePtr& lat, const IntVec& amp, const IntVec& b, bool on_side1,
                    const LatticePtr& other, int g, int n, const EnumerationCaps& caps,
                    TripleCollector& sink) {
    auto sides = enumerate_structures(lat, amp, b, n, 0, caps);
    std::vector<int> all_marks(n);
    std::iota(all_marks.begin(), all_marks.end(), 1);
    for (const auto& s : sides) {
        const int k = static_cast<int>(s.classes.size());
        const int gsum = g + k - 1;  // r=0: g = 1 - k + sum g(v)
        if (gsum < 0) continue;
        if (k > 1) continue;  // no roots: relative connectivity forces one vertex
        std::vector<std::vector<int>> gens;
        std::vector<int> gcur;
        genus_compositions(k, gsum, caps.max_genus, gcur, gens);
        for (const auto& gvec : gens) {
            if (!stable_assignment(s.classes, gvec, s.legs, {})) continue;
            try {
                std::vector<GraphVertex> vs(k);
                for (int i = 0; i < k; ++i) vs[i] = GraphVertex{gvec[i], CurveClass{lat, s.classes[i]}};
                auto gr = AdmissibleGraph::create(lat, vs, s.legs, {});
                if (on_side1)
                    sink.add(AdmissibleTriple::create(gr, AdmissibleGraph::empty(other), all_marks));
                else
                    sink.add(AdmissibleTriple::create(AdmissibleGraph::empty(other), gr, {}));
            } catch (const Error&) {
            }
        }
    }
}

}  // namespace

std::vector<TripleRecord> enumerate_blowup_triples(int g, int n, const CurveClass& beta,
                                                   const BlowupGeometry& geom,
                                                   const EnumerationCaps& caps) {
    caps.validate();
    geom.validate();
    if (beta.lattice != geom.down) throw Error("enumerate: class not on downstairs lattice");
    if (g < 0 || n < 0) throw Error("enumerate: negative genus or mark count");
    if (!is_effective(beta)) throw Error("enumerate: class not effective");

    TripleCollector sink;
    const IntVec e1 = divisor_functional(geom.y1, geom.exc1);

    // two-sided block: downstairs splittings with both parts nonzero
    const long long degb = apply_vec(geom.ample_down, beta.coords);
    for (const auto& part2 : effective_up_to(geom.down, geom.ample_down, degb)) {
        if (is_zero(part2)) continue;
        IntVec part1(beta.coords.size());
        for (size_t i = 0; i < part1.size(); ++i) part1[i] = beta.coords[i] - part2[i];
        if (is_zero(part1)) continue;
        CurveClass beta1{geom.down, part1}, beta2{geom.down, part2};
        if (!is_effective(beta1)) continue;
        CurveClass lift1, lift2;
        try {
            lift1 = minimal_lift(geom.p1, {geom.gamma1}, beta1);
        } catch (const Error&) {
            continue;  // no lift on this side
        }
        try {
            lift2 = minimal_lift(geom.p2, {geom.gamma2}, beta2);
        } catch (const Error&) {
            continue;
        }
        const long long l_total = apply_vec(e1, lift1.coords);
        if (l_total < 0) continue;
        for (long long l1 = 0; l1 <= l_total; ++l1) {
            const long long l2 = l_total - l1;
            CurveClass b1 = lift1 + geom.gamma1 * l1;
            CurveClass b2 = lift2 + geom.gamma2 * l2;
            if (!is_effective(b1) || !is_effective(b2)) continue;
            emit_two_sided(geom.y1, geom.ample1, b1.coords, geom.y2, geom.ample2, b2.coords,
                           static_cast<int>(l2), g, n, caps, sink);
        }
    }

    // gamma1-only block
    try {
        CurveClass lift = minimal_lift(geom.p1, {geom.gamma1}, beta);
        const long long le = apply_vec(e1, lift.coords);
        if (le >= 0) {
            CurveClass b1 = lift + geom.gamma1 * le;
            if (is_effective(b1))
                emit_one_sided(geom.y1, geom.ample1, b1.coords, true, geom.y2, g, n, caps, sink);
        }
    } catch (const Error&) {
    }

    // gamma2-only block
    try {
        CurveClass lift = minimal_lift(geom.p2, {geom.gamma2}, beta);
        if (is_effective(lift))
            emit_one_sided(geom.y2, geom.ample2, lift.coords, false, geom.y1, g, n, caps, sink);
    } catch (const Error&) {
    }

    return sink.take();
}

std::vector<TripleRecord> enumerate_conifold_triples(int g, int n, const CurveClass& beta,
                                                     const ConifoldGeometry& geom,
                                                     const EnumerationCaps& caps) {
    caps.validate();
    geom.validate();
    if (beta.lattice != geom.down) throw Error("enumerate: class not on downstairs lattice");
    if (g < 0 || n < 0) throw Error("enumerate: negative genus or mark count");
    if (!is_effective(beta)) throw Error("enumerate: class not effective");

    TripleCollector sink;
    CurveClass lift;
    try {
        lift = minimal_lift(geom.p1, {geom.gamma21, geom.gamma22}, beta);
    } catch (const Error&) {
        return {};
    }
    const IntVec e1 = divisor_functional(geom.ytilde, geom.exc1);
    const long long d = apply_vec(e1, lift.coords);
    if (d < 0) return {};
    for (long long l11 = 0; l11 <= d; ++l11) {
        for (long long l12 = 0; l11 + l12 <= d; ++l12) {
            const long long l2 = d - l11 - l12;
            CurveClass b1 = lift + geom.gamma21 * l11 + geom.gamma22 * l12;
            if (!is_effective(b1)) continue;
            CurveClass b2 = geom.quadric_gen * l2;
            if (l2 == 0) {
                // quadric side empty: single graph on Ytilde, no roots
                emit_one_sided(geom.ytilde, geom.ample1, b1.coords, true, geom.quadric, g, n,
                               caps, sink);
                if (is_zero(b1.coords))
                    emit_one_sided(geom.quadric, geom.ample2, IntVec(geom.quadric->rank, 0),
                                   false, geom.ytilde, g, n, caps, sink);
            } else {
                emit_two_sided(geom.ytilde, geom.ample1, b1.coords, geom.quadric, geom.ample2,
                               b2.coords, static_cast<int>(l2), g, n, caps, sink);
            }
        }
    }
    return sink.take();
}

CohomologyBasis CohomologyBasis::create(std::vector<std::string> labels,
                                        std::vector<std::vector<Rational>> pairing) {
    const size_t k = labels.size();
    if (k == 0) throw Error("cohomology basis: empty");
    if (pairing.size() != k) throw Error("cohomology basis: pairing size mismatch");
    for (const auto& row : pairing)
        if (row.size() != k) throw Error("cohomology basis: pairing not square");
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < i; ++j)
            if (pairing[i][j] != pairing[j][i]) throw Error("cohomology basis: pairing not symmetric");
    // non-degeneracy by Gaussian elimination
    auto m = pairing;
    for (size_t col = 0; col < k; ++col) {
        size_t piv = col;
        while (piv < k && m[piv][col] == 0) ++piv;
        if (piv == k) throw Error("cohomology basis: degenerate pairing");
        std::swap(m[piv], m[col]);
        for (size_t row = col + 1; row < k; ++row) {
            Rational f = m[row][col] / m[col][col];
            for (size_t j = col; j < k; ++j) m[row][j] -= f * m[col][j];
        }
    }
    CohomologyBasis b;
    b.labels = std::move(labels);
    b.pairing = std::move(pairing);
    return b;
}

int CohomologyBasis::index(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    throw Error("cohomology basis: unknown label " + label);
}

void RelativeGWTable::set(const std::string& gk, std::vector<std::string> labels, Rational value) {
    entries[{gk, std::move(labels)}] = std::move(value);
}

DegenerationResult evaluate_degeneration(const std::vector<TripleRecord>& triples,
                                         const RelativeGWTable& table1,
                                         const RelativeGWTable& table2,
                                         const CohomologyBasis& basis) {
    DegenerationResult result;
    result.value = 0;
    const size_t k = basis.labels.size();
    for (const auto& rec : triples) {
        const int r = rec.triple.root_count();
        auto side_entries = [&](const RelativeGWTable& table, const std::string& key,
                                bool empty_graph) {
            std::vector<std::pair<std::vector<int>, Rational>> out;
            if (empty_graph) {
                out.push_back({{}, Rational(1)});
                return out;
            }
            for (const auto& [ek, val] : table.entries) {
                if (ek.first != key) continue;
                if (static_cast<int>(ek.second.size()) != r)
                    throw Error("relative table entry arity differs from root count");
                std::vector<int> idx;
                idx.reserve(ek.second.size());
                for (const auto& lab : ek.second) idx.push_back(basis.index(lab));
                out.push_back({std::move(idx), val});
            }
            return out;
        };
        auto e1 = side_entries(table1, rec.key1, rec.triple.gamma1.is_empty());
        auto e2 = side_entries(table2, rec.key2, rec.triple.gamma2.is_empty());
        if (e1.empty() || e2.empty()) {
            result.warnings.push_back(rec.key);
            continue;
        }
        Rational bracket = 0;
        for (const auto& [idx1, v1] : e1) {
            for (const auto& [idx2, v2] : e2) {
                Rational pair_product = 1;
                for (int i = 0; i < r; ++i) {
                    if (idx1[i] >= static_cast<int>(k) || idx2[i] >= static_cast<int>(k))
                        throw Error("basis index out of range");
                    pair_product *= basis.pairing[idx1[i]][idx2[i]];
                }
                bracket += v1 * v2 * pair_product;
            }
        }
        result.value += Rational(rec.multiplicity) / Rational(rec.eq) * bracket;
    }
    return result;
}

VdimReport vdim_additivity_check(const AdmissibleTriple& eta, int dim_total, int dim_divisor,
                                 const IntVec& canonical_down, const LatticeMap& p1,
                                 const LatticeMap& p2, const std::string& exc1,
                                 const std::string& exc2) {
    const int r = eta.root_count();
    const int n1 = static_cast<int>(eta.gamma1.legs.size());
    const int n2 = static_cast<int>(eta.gamma2.legs.size());
    const int g = genus(eta);
    const int n = n1 + n2;

    IntVec beta_down(canonical_down.size(), 0);
    auto accumulate = [&](const AdmissibleGraph& gr, const LatticeMap& p) {
        if (gr.is_empty()) return;
        IntVec img = p.apply(gr.total_class()).coords;
        for (size_t i = 0; i < beta_down.size(); ++i) beta_down[i] += img[i];
    };
    accumulate(eta.gamma1, p1);
    accumulate(eta.gamma2, p2);

    VdimReport rep;
    rep.lhs = (1 - g) * static_cast<long long>(dim_total - 3) - apply_vec(canonical_down, beta_down) + n;

    auto side_bracket = [&](const AdmissibleGraph& gr, const std::string& exc, int nlegs) {
        if (gr.is_empty()) return 0LL;
        const IntVec& k_side = gr.lattice->canonical_pairing;
        if (k_side.empty()) throw Error("vdim: no canonical pairing registered on " + gr.lattice->name);
        const IntVec& e_side = divisor_functional(gr.lattice, exc);
        const IntVec b = gr.total_class().coords;
        const long long gi = gr.total_genus();
        return (1 - gi) * static_cast<long long>(dim_total - 3) - apply_vec(k_side, b) + nlegs +
               (r - apply_vec(e_side, b));
    };
    rep.bracket1 = side_bracket(eta.gamma1, exc1, n1);
    rep.bracket2 = side_bracket(eta.gamma2, exc2, n2);
    rep.rhs = rep.bracket1 + rep.bracket2 - static_cast<long long>(r) * dim_divisor;
    return rep;
}

}  // namespace gwsurgery
