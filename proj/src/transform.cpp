#include "gwsurgery/transform.hpp"

#include <algorithm>

namespace gwsurgery {

namespace {

std::array<std::string, 3> sorted_triple(std::string a, std::string b, std::string c) {
    std::array<std::string, 3> key{std::move(a), std::move(b), std::move(c)};
    std::sort(key.begin(), key.end());
    return key;
}

}  // namespace

void TripleProductTable::set(std::string a, std::string b, std::string c, Rational value) {
    products[sorted_triple(std::move(a), std::move(b), std::move(c))] = std::move(value);
}

Rational TripleProductTable::get(const std::string& a, const std::string& b,
                                 const std::string& c) const {
    auto it = products.find(sorted_triple(a, b, c));
    if (it == products.end())
        throw Error("no classical triple product registered for (" + a + "," + b + "," + c + ")");
    return it->second;
}

bool TripleProductTable::has(const std::string& a, const std::string& b,
                             const std::string& c) const {
    return products.count(sorted_triple(a, b, c)) > 0;
}

bool GWKey::operator<(const GWKey& o) const {
    if (g != o.g) return g < o.g;
    if (n != o.n) return n < o.n;
    if (beta.coords != o.beta.coords) return beta.coords < o.beta.coords;
    return insertions < o.insertions;
}

bool GWKey::operator==(const GWKey& o) const {
    return g == o.g && n == o.n && beta.coords == o.beta.coords && insertions == o.insertions;
}

GWTable GWTable::create(LatticePtr lattice) {
    if (!lattice) throw Error("GW table: null lattice");
    GWTable t;
    t.lattice = std::move(lattice);
    return t;
}

void GWTable::set(int g, int n, const CurveClass& beta, std::vector<std::string> insertions,
                  Rational value) {
    if (g < 0 || n < 0) throw Error("GW table: negative genus or mark count");
    if (beta.lattice != lattice) throw Error("GW table: class on wrong lattice");
    if (static_cast<int>(insertions.size()) != n)
        throw Error("GW table: insertion count differs from n");
    if (!is_effective(beta)) throw Error("GW table: non-effective class");
    std::sort(insertions.begin(), insertions.end());
    entries[GWKey{g, n, beta, std::move(insertions)}] = std::move(value);
}

std::optional<Rational> GWTable::lookup(int g, int n, const CurveClass& beta,
                                        std::vector<std::string> insertions) const {
    std::sort(insertions.begin(), insertions.end());
    auto it = entries.find(GWKey{g, n, beta, std::move(insertions)});
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

bool GWTable::operator==(const GWTable& o) const {
    if (lattice != o.lattice || multiple_cover_rule != o.multiple_cover_rule) return false;
    if (entries.size() != o.entries.size()) return false;
    auto it2 = o.entries.begin();
    for (auto it1 = entries.begin(); it1 != entries.end(); ++it1, ++it2)
        if (!(it1->first == it2->first) || it1->second != it2->second) return false;
    return true;
}

void FlopGeometry::validate() const {
    if (!x || !xprime) throw Error("flop geometry: missing lattice");
    if (phi.source != x || phi.target != xprime || phi_inverse.source != xprime ||
        phi_inverse.target != x)
        throw Error("flop geometry: correspondence lattices inconsistent");
    if (c.lattice != x || cprime.lattice != xprime)
        throw Error("flop geometry: exceptional classes on wrong lattices");
    if (c.is_zero() || cprime.is_zero())
        throw Error("flop geometry: exceptional classes must be nonzero");
    if (!(phi.apply(c) == -cprime))
        throw Error("flop geometry: phi must send [C] to -[C']");
    if (!(phi_inverse.apply(cprime) == -c))
        throw Error("flop geometry: phi inverse must send [C'] to -[C]");
    // mutually inverse
    for (int i = 0; i < x->rank; ++i) {
        IntVec e(x->rank, 0);
        e[i] = 1;
        if (phi_inverse.apply(phi.apply(x->cls(e))).coords != e)
            throw Error("flop geometry: phi and its inverse do not compose to identity");
    }
    for (const auto& [label, ins] : insertions) {
        if (label != ins.label) throw Error("flop geometry: insertion label mismatch");
        if (ins.codimension < 0 || ins.codimension > 3)
            throw Error("flop geometry: insertion codimension out of range");
        if (ins.codimension == 0 && ins.c_pairing != 0)
            throw Error("flop geometry: fundamental class must pair to zero");
    }
}

FlopGeometry FlopGeometry::reversed() const {
    FlopGeometry r;
    r.x = xprime;
    r.xprime = x;
    r.phi = phi_inverse;
    r.phi_inverse = phi;
    r.c = cprime;
    r.cprime = c;
    for (const auto& [label, ins] : insertions)
        r.insertions[label] = InsertionClass{ins.label, ins.codimension, -ins.c_pairing};
    // classical products on X' = corrected products; filled on demand
    for (const auto& [key, value] : classical.products) {
        Rational excess = 0;
        bool all_known = true;
        Rational prod = 1;
        for (const auto& lab : key) {
            auto it = insertions.find(lab);
            if (it == insertions.end()) {
                all_known = false;
                break;
            }
            prod *= it->second.c_pairing;
        }
        if (all_known) {
            bool degree_ok = true;
            for (const auto& lab : key) {
                int cd = insertions.at(lab).codimension;
                if (cd == 0 || cd == 3) degree_ok = false;  // third term vanishes
            }
            if (degree_ok) excess = prod;
        }
        r.classical.products[key] = value - excess;
    }
    return r;
}

std::optional<long long> FlopGeometry::multiple_of_c(const CurveClass& beta) const {
    if (beta.lattice != x) throw Error("flop geometry: class on wrong lattice");
    if (beta.is_zero()) return 0;
    // beta = m c with integer m
    long long m = 0;
    for (int i = 0; i < x->rank; ++i) {
        if (c.coords[i] != 0) {
            if (beta.coords[i] % c.coords[i] != 0) return std::nullopt;
            m = beta.coords[i] / c.coords[i];
            break;
        }
    }
    if (m == 0) return std::nullopt;
    if (c * m == beta) return m;
    return std::nullopt;
}

const InsertionClass& FlopGeometry::insertion(const std::string& label) const {
    auto it = insertions.find(label);
    if (it == insertions.end()) throw Error("unregistered insertion class: " + label);
    return it->second;
}

GWTable flop_transform(const GWTable& table, const FlopGeometry& geom) {
    geom.validate();
    if (table.lattice != geom.x) throw Error("flop transform: table not on the source lattice");
    GWTable out = GWTable::create(geom.xprime);
    out.multiple_cover_rule = table.multiple_cover_rule;
    for (const auto& [key, value] : table.entries) {
        auto m = geom.multiple_of_c(key.beta);
        if (m) {
            if (key.n > 0)
                throw Error("flop transform: entry on a multiple of [C] with marked points");
            out.set(key.g, 0, geom.cprime * *m, {}, value);
        } else {
            out.set(key.g, key.n, geom.phi.apply(key.beta), key.insertions, value);
        }
    }
    return out;
}

bool flop_involution_check(const GWTable& table, const FlopGeometry& geom) {
    return flop_transform(flop_transform(table, geom), geom.reversed()) == table;
}

NovikovElement multiple_cover_tail(long long a1, long long a2, long long a3,
                                   const CurveClass& c) {
    const Rational coeff = Rational(a1) * a2 * a3;
    if (coeff == 0) return NovikovElement::zero(c.lattice);
    return nov_tail(c, c, coeff);
}

TripleCorrection triple_product_correction(const std::string& a1, const std::string& a2,
                                           const std::string& a3, const FlopGeometry& geom,
                                           TripleProductTable& xprime_products) {
    const InsertionClass &i1 = geom.insertion(a1), &i2 = geom.insertion(a2),
                         &i3 = geom.insertion(a3);
    TripleCorrection corr;
    corr.original = geom.classical.get(a1, a2, a3);
    corr.excess = 0;
    const bool middle_degrees = i1.codimension != 0 && i1.codimension != 3 &&
                                i2.codimension != 0 && i2.codimension != 3 &&
                                i3.codimension != 0 && i3.codimension != 3;
    if (middle_degrees)
        corr.excess = Rational(i1.c_pairing) * i2.c_pairing * i3.c_pairing;
    corr.corrected = corr.original - corr.excess;
    xprime_products.set(a1, a2, a3, corr.corrected);
    return corr;
}

namespace {

// the beta != 0, m[C] part of the genus-0 3-point series
NovikovElement middle_term(const GWTable& table, const FlopGeometry& geom,
                           std::vector<std::string> labels) {
    NovikovElement sum = NovikovElement::zero(table.lattice);
    std::sort(labels.begin(), labels.end());
    for (const auto& [key, value] : table.entries) {
        if (key.g != 0 || key.n != 3 || key.insertions != labels) continue;
        if (key.beta.is_zero()) continue;
        if (geom.multiple_of_c(key.beta)) continue;
        sum = nov_add(sum, nov_term(key.beta, value));
    }
    return sum;
}

}  // namespace

NovikovElement three_point_function(const GWTable& table, const FlopGeometry& geom,
                                    const std::string& a1, const std::string& a2,
                                    const std::string& a3) {
    geom.validate();
    if (table.lattice != geom.x) throw Error("3-point function: table not on the source lattice");
    const InsertionClass &i1 = geom.insertion(a1), &i2 = geom.insertion(a2),
                         &i3 = geom.insertion(a3);
    NovikovElement f = nov_constant(geom.x, geom.classical.get(a1, a2, a3));
    f = nov_add(f, middle_term(table, geom, {a1, a2, a3}));
    if (table.multiple_cover_rule)
        f = nov_add(f, multiple_cover_tail(i1.c_pairing, i2.c_pairing, i3.c_pairing, geom.c));
    return f;
}

WallCrossingReport wallcrossing_check(const GWTable& table_x, const GWTable& table_xprime,
                                      const FlopGeometry& geom, const std::string& a1,
                                      const std::string& a2, const std::string& a3) {
    geom.validate();
    WallCrossingReport rep;
    NovikovElement psi_x = three_point_function(table_x, geom, a1, a2, a3);
    rep.pushed = analytic_continue(substitute(psi_x, geom.phi));

    const FlopGeometry rev = geom.reversed();
    NovikovElement psi_xp = three_point_function(table_xprime, rev, a1, a2, a3);
    rep.side_xprime = analytic_continue(psi_xp);

    rep.isomorphic = isomorphic(rep.pushed, rep.side_xprime);
    const InsertionClass &i1 = geom.insertion(a1), &i2 = geom.insertion(a2),
                         &i3 = geom.insertion(a3);
    rep.classical_discrepancy = -(Rational(i1.c_pairing) * i2.c_pairing * i3.c_pairing);
    return rep;
}

void TransitionGeometry::validate() const {
    if (!x || !xsecond || !ytilde) throw Error("transition geometry: missing lattice");
    if (phi_star.source != xsecond || phi_star.target != x)
        throw Error("transition geometry: phi* lattices inconsistent");
    if (phi_e.source != x || phi_e.target != xsecond)
        throw Error("transition geometry: phi_e lattices inconsistent");
    if (proj.source != ytilde || proj.target != xsecond)
        throw Error("transition geometry: projection lattices inconsistent");
    if (c.lattice != x || c.is_zero())
        throw Error("transition geometry: bad exceptional class");
    if (!phi_e.apply(c).is_zero())
        throw Error("transition geometry: [C] must be killed by phi_e");
    for (int i = 0; i < xsecond->rank; ++i) {
        IntVec e(xsecond->rank, 0);
        e[i] = 1;
        if (phi_e.apply(phi_star.apply(xsecond->cls(e))).coords != e)
            throw Error("transition geometry: phi_e after phi* is not the identity");
    }
    if (fiber1.lattice != ytilde || fiber2.lattice != ytilde)
        throw Error("transition geometry: ruling classes on wrong lattice");
    auto it = ytilde->divisor_pairings.find(exc);
    if (it == ytilde->divisor_pairings.end())
        throw Error("transition geometry: exceptional divisor pairing missing");
    if (apply_functional(it->second, fiber1.coords) != -1 ||
        apply_functional(it->second, fiber2.coords) != -1)
        throw Error("transition geometry: rulings must pair to -1 with E");
}

std::vector<long long> transition_index_set(const CurveClass& beta_second,
                                            const TransitionGeometry& geom) {
    geom.validate();
    if (beta_second.lattice != geom.xsecond)
        throw Error("transition: class not on the target lattice");
    if (beta_second.is_zero()) throw Error("transition: class must be nonzero");
    if (!is_effective(beta_second)) throw Error("transition: class not effective");
    CurveClass lift = minimal_lift(geom.proj, {geom.fiber1, geom.fiber2}, beta_second);
    const long long d =
        apply_functional(geom.ytilde->divisor_pairings.at(geom.exc), lift.coords);
    if (d < 0) throw Error("transition: minimal lift pairs negatively with E");
    std::vector<long long> idx(d + 1);
    for (long long i = 0; i <= d; ++i) idx[i] = i;
    return idx;
}

namespace {

std::vector<std::string> transported_labels(const std::vector<std::string>& labels,
                                            const TransitionGeometry& geom) {
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (const auto& lab : labels) {
        auto it = geom.label_map.find(lab);
        if (it == geom.label_map.end())
            throw Error("transition: insertion class without a transported image: " + lab);
        out.push_back(it->second);
    }
    return out;
}

}  // namespace

Rational transition_transform(const GWTable& table_x, int g, int n,
                              const CurveClass& beta_second,
                              const std::vector<std::string>& labels,
                              const TransitionGeometry& geom) {
    if (table_x.lattice != geom.x) throw Error("transition: table not on the source lattice");
    if (static_cast<int>(labels.size()) != n)
        throw Error("transition: insertion count differs from n");
    const auto idx = transition_index_set(beta_second, geom);
    const auto xlabels = transported_labels(labels, geom);
    const CurveClass base = geom.phi_star.apply(beta_second);
    Rational sum = 0;
    for (long long l : idx) {
        auto v = table_x.lookup(g, n, base + geom.c * l, xlabels);
        if (v) sum += *v;
    }
    return sum;
}

Rational transition_transform_fiber_sum(const GWTable& table_x, int g, int n,
                                        const CurveClass& beta_second,
                                        const std::vector<std::string>& labels,
                                        const TransitionGeometry& geom, long long cutoff) {
    if (table_x.lattice != geom.x) throw Error("transition: table not on the source lattice");
    if (static_cast<int>(labels.size()) != n)
        throw Error("transition: insertion count differs from n");
    if (cutoff < 0) throw Error("transition: negative cutoff");
    const auto idx = transition_index_set(beta_second, geom);
    if (cutoff < idx.back())
        throw Error("transition: cutoff below the index range");
    const auto xlabels = transported_labels(labels, geom);
    const CurveClass base = geom.phi_star.apply(beta_second);
    Rational sum = 0;
    for (long long k = -cutoff; k <= cutoff; ++k) {
        auto v = table_x.lookup(g, n, base + geom.c * k, xlabels);
        if (!v) continue;
        if ((k < 0 || k > idx.back()) && *v != 0)
            throw Error("transition: nonzero value on a class that must vanish (offset " +
                        std::to_string(k) + ")");
        sum += *v;
    }
    return sum;
}

TransitionThreePointReport transition_threepoint_check(const GWTable& table_x,
                                                       const GWTable& table_xsecond,
                                                       const TransitionGeometry& geom,
                                                       const std::string& a1,
                                                       const std::string& a2,
                                                       const std::string& a3) {
    geom.validate();
    if (table_x.lattice != geom.x || table_xsecond.lattice != geom.xsecond)
        throw Error("transition 3-point: tables on wrong lattices");
    for (const auto& lab : {a1, a2, a3}) {
        auto it = geom.insertions.find(lab);
        if (it == geom.insertions.end()) throw Error("unregistered insertion class: " + lab);
        if (it->second.c_pairing != 0)
            throw Error("transition 3-point: insertion meets the exceptional curve: " + lab);
    }
    const auto xlabels = transported_labels({a1, a2, a3}, geom);
    std::vector<std::string> sorted_x = xlabels;
    std::sort(sorted_x.begin(), sorted_x.end());
    std::vector<std::string> sorted_second{a1, a2, a3};
    std::sort(sorted_second.begin(), sorted_second.end());

    TransitionThreePointReport rep;
    NovikovElement side_x = nov_constant(geom.x, geom.classical_x.get(xlabels[0], xlabels[1], xlabels[2]));
    for (const auto& [key, value] : table_x.entries) {
        if (key.g != 0 || key.n != 3 || key.insertions != sorted_x) continue;
        if (key.beta.is_zero()) continue;
        side_x = nov_add(side_x, nov_term(key.beta, value));
    }
    rep.side_x = substitute(side_x, geom.phi_e);

    rep.side_xsecond = nov_constant(geom.xsecond, geom.classical_xsecond.get(a1, a2, a3));
    for (const auto& [key, value] : table_xsecond.entries) {
        if (key.g != 0 || key.n != 3 || key.insertions != sorted_second) continue;
        if (key.beta.is_zero()) continue;
        rep.side_xsecond = nov_add(rep.side_xsecond, nov_term(key.beta, value));
    }
    rep.equal = rep.side_x == rep.side_xsecond;
    return rep;
}

}  // namespace gwsurgery
