#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gwsurgery/rational.hpp"

namespace gwsurgery {

// Exponent vector over the ring generators.
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, Rational>;

struct RingPresentation;
using RingPtr = std::shared_ptr<const RingPresentation>;

// Graded quotient ring presented by monomial rewrite rules, e.g.
// Z[v,w]/(v^2, w^3 - 2 v w^2) with top degree 3. Rewriting is verified to
// terminate and be confluent on all monomials of degree <= top_degree at
// construction; monomials above the top degree are zero.
struct RingPresentation {
    struct Rule {
        Monomial lhs;
        Polynomial rhs;
    };

    std::string name;
    std::vector<std::string> generator_names;
    std::vector<int> degrees;
    std::vector<Rule> rules;
    int top_degree = 0;
    std::map<Monomial, Rational> integrals;  // declared integration pairing on top-degree monomials

    static RingPtr create(RingPresentation data);

    int degree(const Monomial& m) const;
    Monomial monomial(std::vector<int> exps) const;
};

struct RingElement {
    RingPtr presentation;
    Polynomial terms;  // keys in normal form, no zero coefficients

    bool operator==(const RingElement& other) const;
    bool is_zero() const { return terms.empty(); }
};

RingElement normal_form(const RingPtr& pres, const Polynomial& poly);
RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_multiply(const RingElement& a, const RingElement& b);
RingElement ring_scalar_mul(const Rational& c, const RingElement& a);
RingElement ring_one(const RingPtr& pres);

// Coefficient of the point class in nf(a*b*c), evaluated through the
// declared integration pairing of the top-degree monomials.
Rational triple_degree0(const RingElement& a, const RingElement& b, const RingElement& c);

// All monomials of weighted degree <= max_degree, lexicographically sorted.
std::vector<Monomial> monomials_up_to_degree(const RingPresentation& pres, int max_degree);

std::string format_monomial(const RingPresentation& pres, const Monomial& m);
std::string format_element(const RingElement& e);

}  // namespace gwsurgery
