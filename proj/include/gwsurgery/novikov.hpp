#pragma once

#include <map>
#include <string>
#include <vector>

#include "gwsurgery/curve_lattice.hpp"

namespace gwsurgery {

// One geometric tail c * q^beta / (1 - q^gamma), gamma nonzero.
struct NovikovTail {
    Rational coeff;
    IntVec beta;
    IntVec gamma;

    bool operator==(const NovikovTail& other) const = default;
};

// Exact normal form in Q{{H_2}}: finite Laurent polynomial plus a finite
// sum of geometric tails. Canonical form keeps tails sorted by
// (gamma, beta) with merged coefficients and no zero coefficients.
struct NovikovElement {
    LatticePtr lattice;
    std::map<IntVec, Rational> poly;
    std::vector<NovikovTail> tails;

    static NovikovElement zero(LatticePtr lattice);
    bool is_zero() const { return poly.empty() && tails.empty(); }
    bool operator==(const NovikovElement& other) const;
};

NovikovElement nov_term(const CurveClass& exponent, const Rational& coeff);
NovikovElement nov_constant(LatticePtr lattice, const Rational& coeff);
// c * q^beta / (1 - q^gamma)
NovikovElement nov_tail(const CurveClass& beta, const CurveClass& gamma, const Rational& coeff);

NovikovElement nov_add(const NovikovElement& a, const NovikovElement& b);
NovikovElement nov_scalar_mul(const Rational& c, const NovikovElement& a);

// True iff every polynomial exponent and every tail beta/gamma is effective.
bool effective_supported(const NovikovElement& f);

// Formal expansion of the tails as geometric series, restricted to the
// classes of ample-degree <= cutoff. Every tail gamma must have strictly
// positive ample degree.
std::map<IntVec, Rational> truncate(const NovikovElement& f, const IntVec& ample_functional,
                                    long long cutoff);

// Rewrites each tail with anti-effective denominator class through
// c q^beta/(1 - q^{-gamma}) = -c q^{beta+gamma}/(1 - q^gamma) and splits off
// the Laurent head so the remaining tail starts at a nonzero effective
// exponent. Idempotent; identity on effective-supported elements.
NovikovElement analytic_continue(const NovikovElement& f);

// Equality after analytic continuation of both sides (the decidable
// geometric-tail case of the isomorphic-power-series relation).
bool isomorphic(const NovikovElement& f, const NovikovElement& g);

// Change of variables q^beta -> q^{map(beta)}. Tails whose denominator
// class maps to zero are rejected.
NovikovElement substitute(const NovikovElement& f, const LatticeMap& map);

std::string format_novikov(const NovikovElement& f);

}  // namespace gwsurgery
