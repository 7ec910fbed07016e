#include "gwsurgery/novikov.hpp"

#include <algorithm>
#include <sstream>

namespace gwsurgery {

namespace {

bool is_zero_vec(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](long long c) { return c == 0; });
}

IntVec vec_add(const IntVec& a, const IntVec& b) {
    IntVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

void add_poly_term(std::map<IntVec, Rational>& poly, const IntVec& exp, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = poly.emplace(exp, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) poly.erase(it);
    }
}

void canonicalize(NovikovElement& f) {
    std::map<std::pair<IntVec, IntVec>, Rational> merged;
    for (const auto& t : f.tails) {
        if (is_zero_vec(t.gamma))
            throw Error("Novikov tail with zero denominator class");
        merged[{t.gamma, t.beta}] += t.coeff;
    }
    f.tails.clear();
    for (const auto& [key, c] : merged)
        if (c != 0) f.tails.push_back({c, key.second, key.first});
}

}  // namespace

NovikovElement NovikovElement::zero(LatticePtr lattice) { return {std::move(lattice), {}, {}}; }

bool NovikovElement::operator==(const NovikovElement& other) const {
    return lattice == other.lattice && poly == other.poly && tails == other.tails;
}

NovikovElement nov_term(const CurveClass& exponent, const Rational& coeff) {
    NovikovElement f = NovikovElement::zero(exponent.lattice);
    add_poly_term(f.poly, exponent.coords, coeff);
    return f;
}

NovikovElement nov_constant(LatticePtr lattice, const Rational& coeff) {
    NovikovElement f = NovikovElement::zero(lattice);
    add_poly_term(f.poly, IntVec(f.lattice->rank, 0), coeff);
    return f;
}

NovikovElement nov_tail(const CurveClass& beta, const CurveClass& gamma, const Rational& coeff) {
    if (beta.lattice != gamma.lattice) throw Error("Novikov tail lattice mismatch");
    NovikovElement f = NovikovElement::zero(beta.lattice);
    f.tails.push_back({coeff, beta.coords, gamma.coords});
    canonicalize(f);
    return f;
}

NovikovElement nov_add(const NovikovElement& a, const NovikovElement& b) {
    if (a.lattice != b.lattice) throw Error("Novikov lattice mismatch in add");
    NovikovElement out = a;
    for (const auto& [exp, c] : b.poly) add_poly_term(out.poly, exp, c);
    out.tails.insert(out.tails.end(), b.tails.begin(), b.tails.end());
    canonicalize(out);
    return out;
}

NovikovElement nov_scalar_mul(const Rational& c, const NovikovElement& a) {
    NovikovElement out = NovikovElement::zero(a.lattice);
    if (c == 0) return out;
    for (const auto& [exp, v] : a.poly) out.poly[exp] = c * v;
    for (const auto& t : a.tails) out.tails.push_back({c * t.coeff, t.beta, t.gamma});
    return out;
}

bool effective_supported(const NovikovElement& f) {
    auto eff = [&](const IntVec& v) { return is_effective(f.lattice->cls(v)); };
    for (const auto& [exp, c] : f.poly)
        if (!eff(exp)) return false;
    for (const auto& t : f.tails)
        if (!eff(t.beta) || !eff(t.gamma)) return false;
    return true;
}

std::map<IntVec, Rational> truncate(const NovikovElement& f, const IntVec& ample_functional,
                                    long long cutoff) {
    std::map<IntVec, Rational> out;
    for (const auto& [exp, c] : f.poly)
        if (apply_functional(ample_functional, exp) <= cutoff) add_poly_term(out, exp, c);
    for (const auto& t : f.tails) {
        long long dgamma = apply_functional(ample_functional, t.gamma);
        if (dgamma <= 0)
            throw Error("divergent expansion: tail denominator class " +
                        format_coords(t.gamma) + " has non-positive ample degree");
        IntVec exp = t.beta;
        while (apply_functional(ample_functional, exp) <= cutoff) {
            add_poly_term(out, exp, t.coeff);
            exp = vec_add(exp, t.gamma);
        }
    }
    return out;
}

NovikovElement analytic_continue(const NovikovElement& f) {
    NovikovElement out = NovikovElement::zero(f.lattice);
    out.poly = f.poly;
    for (const auto& t : f.tails) {
        CurveClass gamma = f.lattice->cls(t.gamma);
        Rational coeff = t.coeff;
        IntVec beta = t.beta;
        if (!is_effective(gamma)) {
            CurveClass neg = -gamma;
            if (!is_effective(neg))
                throw Error("tail denominator class " + format_coords(t.gamma) +
                            " is neither effective nor anti-effective");
            // c q^b/(1-q^{-g}) = -c q^{b+g}/(1-q^g) with g effective
            gamma = neg;
            coeff = -coeff;
            beta = vec_add(beta, gamma.coords);
            // split off the Laurent head until the tail starts at a nonzero
            // effective exponent (bounded; gives -1 - q^g/(1-q^g) for b = -g)
            for (int steps = 0; steps < 512; ++steps) {
                if (!is_zero_vec(beta) && is_effective(f.lattice->cls(beta))) break;
                add_poly_term(out.poly, beta, coeff);
                beta = vec_add(beta, gamma.coords);
            }
        }
        out.tails.push_back({coeff, beta, gamma.coords});
    }
    canonicalize(out);
    return out;
}

bool isomorphic(const NovikovElement& f, const NovikovElement& g) {
    if (f.lattice != g.lattice) throw Error("Novikov lattice mismatch in isomorphic");
    return analytic_continue(f) == analytic_continue(g);
}

NovikovElement substitute(const NovikovElement& f, const LatticeMap& map) {
    if (f.lattice != map.source)
        throw Error("substitute: element lattice is not the source of map '" + map.name + "'");
    NovikovElement out = NovikovElement::zero(map.target);
    for (const auto& [exp, c] : f.poly)
        add_poly_term(out.poly, map.apply(f.lattice->cls(exp)).coords, c);
    for (const auto& t : f.tails) {
        IntVec gamma = map.apply(f.lattice->cls(t.gamma)).coords;
        if (is_zero_vec(gamma))
            throw Error("substitute: tail denominator class " + format_coords(t.gamma) +
                        " maps to zero under '" + map.name + "'");
        out.tails.push_back({t.coeff, map.apply(f.lattice->cls(t.beta)).coords, gamma});
    }
    canonicalize(out);
    return out;
}

std::string format_novikov(const NovikovElement& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exp, c] : f.poly) {
        if (!first) os << " + ";
        os << format_rational(c) << " * q^" << format_coords(exp);
        first = false;
    }
    for (const auto& t : f.tails) {
        if (!first) os << " + ";
        os << format_rational(t.coeff) << " * q^" << format_coords(t.beta) << " / (1 - q^"
           << format_coords(t.gamma) << ")";
        first = false;
    }
    return os.str();
}

}  // namespace gwsurgery
