#include "gwsurgery/curve_lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace gwsurgery {

namespace {

void check_same_lattice(const CurveClass& a, const CurveClass& b, const char* op) {
    if (a.lattice != b.lattice)
        throw Error(std::string("lattice mismatch in ") + op);
}

IntVec add_vec(const IntVec& a, const IntVec& b, long long bscale = 1) {
    IntVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + bscale * b[i];
    return out;
}

}  // namespace

std::string format_coords(const IntVec& v) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << "]";
    return os.str();
}

bool CurveClass::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](long long c) { return c == 0; });
}

bool CurveClass::operator==(const CurveClass& other) const {
    return lattice == other.lattice && coords == other.coords;
}

bool CurveClass::operator<(const CurveClass& other) const {
    check_same_lattice(*this, other, "compare");
    return coords < other.coords;
}

CurveClass CurveClass::operator+(const CurveClass& other) const {
    check_same_lattice(*this, other, "add");
    return {lattice, add_vec(coords, other.coords)};
}

CurveClass CurveClass::operator-(const CurveClass& other) const {
    check_same_lattice(*this, other, "subtract");
    return {lattice, add_vec(coords, other.coords, -1)};
}

CurveClass CurveClass::operator-() const { return *this * -1; }

CurveClass CurveClass::operator*(long long scalar) const {
    IntVec out(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) out[i] = scalar * coords[i];
    return {lattice, out};
}

long long apply_functional(const IntVec& functional, const IntVec& coords) {
    if (functional.size() != coords.size())
        throw Error("functional length does not match class rank");
    long long acc = 0;
    for (size_t i = 0; i < coords.size(); ++i) acc += functional[i] * coords[i];
    return acc;
}

LatticePtr lattice_handle(const CurveClassLattice& lat) {
    auto p = lat.self_.lock();
    if (!p) throw Error("lattice '" + lat.name + "' not created via CurveClassLattice::create");
    return p;
}

CurveClass CurveClassLattice::cls(IntVec coords) const {
    if (static_cast<int>(coords.size()) != rank)
        throw Error("class coords length " + std::to_string(coords.size()) +
                    " does not match rank of lattice '" + name + "'");
    return {lattice_handle(*this), std::move(coords)};
}

CurveClass CurveClassLattice::named(const std::string& label) const {
    auto it = named_classes.find(label);
    if (it == named_classes.end())
        throw Error("unknown class '" + label + "' in lattice '" + name + "'");
    return {lattice_handle(*this), it->second};
}

bool CurveClassLattice::has_divisor(const std::string& label) const {
    return divisor_pairings.count(label) > 0;
}

long long pair(const CurveClassLattice& lat, const std::string& divisor_label,
               const CurveClass& cls) {
    auto it = lat.divisor_pairings.find(divisor_label);
    if (it == lat.divisor_pairings.end())
        throw Error("unknown divisor '" + divisor_label + "' in lattice '" + lat.name + "'");
    return apply_functional(it->second, cls.coords);
}

long long pair_canonical(const CurveClassLattice& lat, const CurveClass& cls) {
    if (lat.canonical_pairing.empty())
        throw Error("canonical pairing not registered in lattice '" + lat.name + "'");
    return apply_functional(lat.canonical_pairing, cls.coords);
}

namespace {

// DFS over coefficient vectors. Tracks whether the bound truncated a branch
// that was not otherwise excluded.
struct EffectivitySearch {
    const std::vector<IntVec>& gens;
    int rank;
    int bound;
    bool hit_bound = false;

    bool infeasible(size_t from, const IntVec& rem) const {
        for (int j = 0; j < rank; ++j) {
            bool all_nonneg = true, all_nonpos = true;
            for (size_t i = from; i < gens.size(); ++i) {
                if (gens[i][j] < 0) all_nonneg = false;
                if (gens[i][j] > 0) all_nonpos = false;
            }
            if (all_nonneg && rem[j] < 0) return true;
            if (all_nonpos && rem[j] > 0) return true;
        }
        return false;
    }

    bool search(size_t i, IntVec rem) {
        if (std::all_of(rem.begin(), rem.end(), [](long long c) { return c == 0; }))
            return true;
        if (i == gens.size()) return false;
        if (infeasible(i, rem)) return false;
        for (int c = 0; c <= bound; ++c) {
            if (c > 0)
                for (int j = 0; j < rank; ++j) rem[j] -= gens[i][j];
            if (search(i + 1, rem)) return true;
            if (c == bound && !infeasible(i, rem)) hit_bound = true;
        }
        return false;
    }
};

// Exact feasibility of target = sum c_i * gens[i] with rational c_i >= 0,
// by Fourier-Motzkin elimination. Infeasibility over Q certifies that the
// class lies outside the cone, so the integer search can be skipped.
bool cone_feasible_rational(const std::vector<IntVec>& gens, const IntVec& target, int rank) {
    const size_t k = gens.size();
    std::vector<std::vector<Rational>> ineqs;  // row means: sum row[i]*c_i + row[k] >= 0
    for (size_t i = 0; i < k; ++i) {
        std::vector<Rational> row(k + 1, Rational(0));
        row[i] = 1;
        ineqs.push_back(std::move(row));
    }
    for (int j = 0; j < rank; ++j) {
        std::vector<Rational> row(k + 1, Rational(0));
        for (size_t i = 0; i < k; ++i) row[i] = gens[i][j];
        row[k] = -Rational(target[j]);
        std::vector<Rational> neg(k + 1);
        for (size_t i = 0; i <= k; ++i) neg[i] = -row[i];
        ineqs.push_back(std::move(row));
        ineqs.push_back(std::move(neg));
    }
    for (size_t var = 0; var < k; ++var) {
        std::vector<std::vector<Rational>> pos, neg, next;
        for (auto& r : ineqs) {
            if (r[var] > 0) pos.push_back(std::move(r));
            else if (r[var] < 0) neg.push_back(std::move(r));
            else next.push_back(std::move(r));
        }
        for (const auto& p : pos)
            for (const auto& n : neg) {
                std::vector<Rational> comb(k + 1);
                for (size_t i = 0; i <= k; ++i) comb[i] = p[i] * (-n[var]) + n[i] * p[var];
                next.push_back(std::move(comb));
            }
        ineqs = std::move(next);
    }
    for (const auto& r : ineqs)
        if (r[k] < 0) return false;
    return true;
}

}  // namespace

bool is_effective(const CurveClass& cls, int bound) {
    const auto& lat = *cls.lattice;
    // memoized: the answer is a pure function of the lattice and the class
    static std::map<std::tuple<const CurveClassLattice*, IntVec, int>, bool> cache;
    const auto key = std::make_tuple(&lat, cls.coords, bound);
    auto hit = cache.find(key);
    if (hit != cache.end()) return hit->second;
    if (!cone_feasible_rational(lat.effective_generators, cls.coords, lat.rank)) {
        cache.emplace(key, false);
        return false;
    }
    EffectivitySearch s{lat.effective_generators, lat.rank, bound};
    if (s.search(0, cls.coords)) {
        cache.emplace(key, true);
        return true;
    }
    if (s.hit_bound)
        throw UndecidedError("effectivity of " + format_coords(cls.coords) +
                             " in lattice '" + lat.name + "' undecided at bound " +
                             std::to_string(bound));
    cache.emplace(key, false);
    return false;
}

LatticePtr CurveClassLattice::create(CurveClassLattice data) {
    if (data.rank <= 0) throw Error("lattice rank must be positive");
    auto check_len = [&](const IntVec& v, const std::string& what) {
        if (static_cast<int>(v.size()) != data.rank)
            throw Error(what + " has length " + std::to_string(v.size()) +
                        ", expected rank " + std::to_string(data.rank) +
                        " in lattice '" + data.name + "'");
    };
    for (const auto& g : data.effective_generators) {
        check_len(g, "effective generator");
        if (std::all_of(g.begin(), g.end(), [](long long c) { return c == 0; }))
            throw Error("zero effective generator in lattice '" + data.name + "'");
    }
    for (const auto& [label, f] : data.divisor_pairings) check_len(f, "divisor functional '" + label + "'");
    if (!data.canonical_pairing.empty()) check_len(data.canonical_pairing, "canonical functional");
    for (const auto& [label, c] : data.named_classes) check_len(c, "named class '" + label + "'");

    auto lat = std::make_shared<CurveClassLattice>(std::move(data));
    lat->self_ = lat;

    // Strict convexity: no nonzero v with v and -v effective, checked over
    // small combinations of the generators.
    const auto& gens = lat->effective_generators;
    std::vector<int> coeff(gens.size(), 0);
    std::function<void(size_t)> walk = [&](size_t i) {
        if (i == gens.size()) {
            IntVec v(lat->rank, 0);
            for (size_t k = 0; k < gens.size(); ++k)
                for (int j = 0; j < lat->rank; ++j) v[j] += coeff[k] * gens[k][j];
            if (std::all_of(v.begin(), v.end(), [](long long c) { return c == 0; })) return;
            IntVec neg(v.size());
            for (size_t j = 0; j < v.size(); ++j) neg[j] = -v[j];
            bool neg_eff = false;
            try {
                neg_eff = is_effective({lat, neg}, 8);
            } catch (const UndecidedError&) {
                neg_eff = false;  // bounded check only
            }
            if (neg_eff)
                throw Error("effective cone of lattice '" + lat->name +
                            "' is not strictly convex: " + format_coords(v) +
                            " and its negative are both effective");
            return;
        }
        for (coeff[i] = 0; coeff[i] <= 2; ++coeff[i]) walk(i + 1);
        coeff[i] = 0;
    };
    walk(0);
    return lat;
}

LatticeMap LatticeMap::create(LatticePtr source, LatticePtr target,
                              std::vector<IntVec> matrix, std::string name) {
    if (static_cast<int>(matrix.size()) != target->rank)
        throw Error("map '" + name + "' has " + std::to_string(matrix.size()) +
                    " rows, expected target rank " + std::to_string(target->rank));
    for (const auto& row : matrix)
        if (static_cast<int>(row.size()) != source->rank)
            throw Error("map '" + name + "' row length does not match source rank");
    return {std::move(source), std::move(target), std::move(matrix), std::move(name)};
}

CurveClass LatticeMap::apply(const CurveClass& cls) const {
    if (cls.lattice != source)
        throw Error("class applied to map '" + name + "' is not in its source lattice");
    IntVec out(target->rank, 0);
    for (int i = 0; i < target->rank; ++i) out[i] = apply_functional(matrix[i], cls.coords);
    return {target, out};
}

namespace {

// Smith normal form of small integer matrices: S = U * A * V.
struct Smith {
    std::vector<IntVec> S, U, V;
};

Smith smith_normal_form(std::vector<IntVec> A) {
    size_t m = A.size(), n = m ? A[0].size() : 0;
    std::vector<IntVec> U(m, IntVec(m, 0)), V(n, IntVec(n, 0));
    for (size_t i = 0; i < m; ++i) U[i][i] = 1;
    for (size_t j = 0; j < n; ++j) V[j][j] = 1;

    auto row_op = [&](size_t r1, size_t r2, long long k) {  // row r1 += k*row r2
        for (size_t j = 0; j < n; ++j) A[r1][j] += k * A[r2][j];
        for (size_t j = 0; j < m; ++j) U[r1][j] += k * U[r2][j];
    };
    auto col_op = [&](size_t c1, size_t c2, long long k) {  // col c1 += k*col c2
        for (size_t i = 0; i < m; ++i) A[i][c1] += k * A[i][c2];
        for (size_t i = 0; i < n; ++i) V[i][c1] += k * V[i][c2];
    };
    auto row_swap = [&](size_t r1, size_t r2) { std::swap(A[r1], A[r2]); std::swap(U[r1], U[r2]); };
    auto col_swap = [&](size_t c1, size_t c2) {
        for (size_t i = 0; i < m; ++i) std::swap(A[i][c1], A[i][c2]);
        for (size_t i = 0; i < n; ++i) std::swap(V[i][c1], V[i][c2]);
    };

    size_t t = 0;
    while (t < m && t < n) {
        // locate a pivot
        size_t pi = t, pj = t;
        bool found = false;
        for (size_t i = t; i < m && !found; ++i)
            for (size_t j = t; j < n && !found; ++j)
                if (A[i][j] != 0) { pi = i; pj = j; found = true; }
        if (!found) break;
        row_swap(t, pi);
        col_swap(t, pj);
        // clear row and column t
        bool again = true;
        while (again) {
            again = false;
            for (size_t i = t + 1; i < m; ++i)
                if (A[i][t] != 0) {
                    long long q = A[i][t] / A[t][t];
                    row_op(i, t, -q);
                    if (A[i][t] != 0) { row_swap(t, i); again = true; }
                }
            for (size_t j = t + 1; j < n; ++j)
                if (A[t][j] != 0) {
                    long long q = A[t][j] / A[t][t];
                    col_op(j, t, -q);
                    if (A[t][j] != 0) { col_swap(t, j); again = true; }
                }
        }
        ++t;
    }
    return {std::move(A), std::move(U), std::move(V)};
}

}  // namespace

std::optional<IntVec> solve_integer(const std::vector<IntVec>& matrix, const IntVec& b) {
    size_t m = matrix.size(), n = m ? matrix[0].size() : 0;
    if (b.size() != m) throw Error("solve_integer: rhs length mismatch");
    Smith snf = smith_normal_form(matrix);
    IntVec c(m, 0);
    for (size_t i = 0; i < m; ++i) c[i] = apply_functional(snf.U[i], b);
    IntVec y(n, 0);
    for (size_t i = 0; i < m; ++i) {
        long long d = (i < n) ? snf.S[i][i] : 0;
        if (d == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (c[i] % d != 0) return std::nullopt;
            y[i] = c[i] / d;
        }
    }
    IntVec x(n, 0);
    for (size_t i = 0; i < n; ++i) x[i] = apply_functional(snf.V[i], y);
    return x;
}

CurveClass minimal_lift(const LatticeMap& proj, const std::vector<CurveClass>& fibers,
                        const CurveClass& beta, int window, int eff_bound) {
    if (beta.lattice != proj.target)
        throw Error("minimal_lift: class is not in the target lattice of '" + proj.name + "'");
    if (fibers.empty()) throw Error("minimal_lift: no fiber classes registered");
    for (const auto& f : fibers) {
        if (f.lattice != proj.source) throw Error("minimal_lift: fiber class in wrong lattice");
        if (!proj.apply(f).is_zero())
            throw Error("minimal_lift: fiber class " + format_coords(f.coords) +
                        " is not in the kernel of '" + proj.name + "'");
    }
    auto x0 = solve_integer(proj.matrix, beta.coords);
    if (!x0)
        throw Error("class " + format_coords(beta.coords) + " is not in the image of '" +
                    proj.name + "'");

    const size_t k = fibers.size();
    if (k > 2) throw Error("minimal_lift: more than two fiber directions unsupported");

    auto lift_at = [&](const std::vector<int>& t) {
        IntVec c = *x0;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < c.size(); ++j) c[j] += t[i] * fibers[i].coords[j];
        return proj.source->cls(std::move(c));
    };

    std::vector<std::vector<int>> effective_offsets;
    std::vector<int> t(k, 0);
    std::function<void(size_t)> scan = [&](size_t i) {
        if (i == k) {
            if (is_effective(lift_at(t), eff_bound)) effective_offsets.push_back(t);
            return;
        }
        for (t[i] = -window; t[i] <= window; ++t[i]) scan(i + 1);
    };
    scan(0);
    if (effective_offsets.empty())
        throw Error("no effective lift of " + format_coords(beta.coords) + " under '" +
                    proj.name + "' within scan window");

    std::vector<int> corner(k, window + 1);
    for (const auto& off : effective_offsets)
        for (size_t i = 0; i < k; ++i) corner[i] = std::min(corner[i], off[i]);
    // The effective lifts must be exactly corner + Z_{>=0}^k inside the window.
    size_t expected = 1;
    for (size_t i = 0; i < k; ++i) {
        if (corner[i] <= -window)
            throw Error("minimal_lift: scan window too small for " + format_coords(beta.coords));
        expected *= static_cast<size_t>(window - corner[i] + 1);
    }
    if (effective_offsets.size() != expected)
        throw Error("effective lifts of " + format_coords(beta.coords) +
                    " do not form a translated positive orthant; no minimal lifting");
    for (const auto& off : effective_offsets)
        for (size_t i = 0; i < k; ++i)
            if (off[i] < corner[i])
                throw Error("effective lifts of " + format_coords(beta.coords) +
                            " do not form a translated positive orthant; no minimal lifting");
    return lift_at(corner);
}

CurveClass minimal_lift_blowup(const LatticeMap& p1, const std::string& exceptional_label,
                               const CurveClass& gamma, const CurveClass& beta) {
    if (!p1.source->has_divisor(exceptional_label))
        throw Error("exceptional divisor '" + exceptional_label + "' not registered upstairs");
    return minimal_lift(p1, {gamma}, beta);
}

CurveClass zero_pairing_lift(const LatticeMap& p1, const std::string& exceptional_label,
                             const CurveClass& gamma, const CurveClass& beta) {
    CurveClass lift = minimal_lift_blowup(p1, exceptional_label, gamma, beta);
    long long e_lift = pair(*p1.source, exceptional_label, lift);
    long long e_gamma = pair(*p1.source, exceptional_label, gamma);
    if (e_gamma == 0)
        throw Error("fiber class pairs to zero against '" + exceptional_label + "'");
    if (e_lift % e_gamma != 0)
        throw Error("no lift of " + format_coords(beta.coords) + " with zero '" +
                    exceptional_label + "'-pairing");
    return lift + gamma * (-e_lift / e_gamma);
}

}  // namespace gwsurgery
