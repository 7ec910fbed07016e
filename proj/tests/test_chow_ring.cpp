#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "gwsurgery/chow_ring.hpp"

using namespace gwsurgery;

namespace {

RingPtr make_test_ring() {
    RingPresentation pres;
    pres.name = "A";
    pres.generator_names = {"v", "w"};
    pres.degrees = {1, 1};
    pres.rules.push_back({{2, 0}, {}});                          // v^2 = 0
    pres.rules.push_back({{0, 3}, {{{1, 2}, Rational(2)}}});     // w^3 = 2 v w^2
    pres.top_degree = 3;
    pres.integrals[{1, 2}] = 1;                                  // integral of v w^2
    return RingPresentation::create(std::move(pres));
}

bool divides(const Monomial& lhs, const Monomial& m) {
    for (size_t i = 0; i < lhs.size(); ++i)
        if (m[i] < lhs[i]) return false;
    return true;
}

// apply one rule at one position; the oracle explores every choice
Polynomial apply_rule(const RingPresentation& pres, const Monomial& m, const RingPresentation::Rule& rule) {
    Polynomial out;
    for (const auto& [rm, rc] : rule.rhs) {
        Monomial prod = m;
        for (size_t i = 0; i < prod.size(); ++i) prod[i] += rm[i] - rule.lhs[i];
        out[prod] += rc;
    }
    return out;
}

// exhaustive oracle: rewrite with every applicable rule in every order and
// demand a unique fully-reduced result
Polynomial oracle_normal_form(const RingPtr& pres, const Polynomial& poly, bool& confluent) {
    // reduce a single monomial to a polynomial in irreducible monomials
    std::function<Polynomial(const Monomial&)> reduce_mono = [&](const Monomial& m) -> Polynomial {
        if (pres->degree(m) > pres->top_degree) return {};
        std::set<std::string> results;
        Polynomial first;
        bool have = false;
        bool reducible = false;
        for (const auto& rule : pres->rules) {
            if (!divides(rule.lhs, m)) continue;
            reducible = true;
            Polynomial step = apply_rule(*pres, m, rule);
            Polynomial total;
            for (const auto& [sm, sc] : step) {
                Polynomial sub = reduce_mono(sm);
                for (const auto& [tm, tc] : sub) {
                    total[tm] += sc * tc;
                    if (total[tm] == 0) total.erase(tm);
                }
            }
            std::string sig;
            for (const auto& [tm, tc] : total) {
                for (int e : tm) sig += std::to_string(e) + ",";
                sig += "=" + format_rational(tc) + ";";
            }
            results.insert(sig);
            if (!have) {
                first = total;
                have = true;
            }
        }
        if (results.size() > 1) confluent = false;
        if (!reducible) return {{m, Rational(1)}};
        return first;
    };
    Polynomial out;
    for (const auto& [m, c] : poly) {
        for (const auto& [tm, tc] : reduce_mono(m)) {
            out[tm] += c * tc;
            if (out[tm] == 0) out.erase(tm);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("normal forms in the quadric-bundle ring") {
    auto pres = make_test_ring();
    // w^3 -> 2 v w^2
    auto e = normal_form(pres, {{{0, 3}, Rational(1)}});
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms.at({1, 2}) == 2);
    // v^2 and all multiples vanish
    CHECK(normal_form(pres, {{{2, 0}, Rational(1)}}).is_zero());
    CHECK(normal_form(pres, {{{2, 1}, Rational(5)}}).is_zero());
    // degree above the top vanishes
    CHECK(normal_form(pres, {{{0, 4}, Rational(1)}}).is_zero());
    CHECK(normal_form(pres, {{{1, 3}, Rational(1)}}).is_zero());
}

TEST_CASE("normal form agrees with the exhaustive rewriting oracle") {
    auto pres = make_test_ring();
    bool confluent = true;
    for (const auto& m : monomials_up_to_degree(*pres, pres->top_degree)) {
        Polynomial p{{m, Rational(1)}};
        Polynomial expect = oracle_normal_form(pres, p, confluent);
        auto got = normal_form(pres, p);
        CAPTURE(format_monomial(*pres, m));
        CHECK(got.terms == expect);
    }
    CHECK(confluent);
}

TEST_CASE("ring arithmetic is commutative and distributive") {
    auto pres = make_test_ring();
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-4, 4);
    auto monos = monomials_up_to_degree(*pres, pres->top_degree);
    auto random_element = [&]() {
        Polynomial p;
        for (const auto& m : monos)
            if (coef(rng) > 1) p[m] = Rational(coef(rng));
        return normal_form(pres, p);
    };
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_element(), b = random_element(), c = random_element();
        CHECK(ring_multiply(a, b) == ring_multiply(b, a));
        CHECK(ring_multiply(a, ring_add(b, c)) ==
              ring_add(ring_multiply(a, b), ring_multiply(a, c)));
        CHECK(ring_multiply(ring_multiply(a, b), c) == ring_multiply(a, ring_multiply(b, c)));
        CHECK(ring_multiply(a, ring_one(pres)) == a);
    }
}

TEST_CASE("triple products through the declared integral") {
    auto pres = make_test_ring();
    auto v = normal_form(pres, {{{1, 0}, Rational(1)}});
    auto w = normal_form(pres, {{{0, 1}, Rational(1)}});
    CHECK(triple_degree0(w, w, w) == 2);   // w^3 = 2 v w^2
    CHECK(triple_degree0(v, w, w) == 1);   // v w^2
    CHECK(triple_degree0(v, v, w) == 0);   // v^2 w = 0
}

TEST_CASE("broken presentations are rejected at construction") {
    // two rules with the same head and different results: not confluent
    RingPresentation bad;
    bad.name = "bad";
    bad.generator_names = {"v", "w"};
    bad.degrees = {1, 1};
    bad.rules.push_back({{0, 1}, {{{1, 0}, Rational(1)}}});
    bad.rules.push_back({{0, 1}, {{{1, 0}, Rational(2)}}});
    bad.top_degree = 2;
    CHECK_THROWS_AS((void)RingPresentation::create(std::move(bad)), Error);

    // rule that does not lower the term order: not terminating
    RingPresentation loop;
    loop.name = "loop";
    loop.generator_names = {"v"};
    loop.degrees = {1};
    loop.rules.push_back({{1}, {{{1}, Rational(1)}}});
    loop.top_degree = 2;
    CHECK_THROWS_AS((void)RingPresentation::create(std::move(loop)), Error);
}

TEST_CASE("the shipped geometry ring matches the inline presentation") {
    const auto& g = fixtures::geometry();
    auto shipped = g.ring("A");
    auto local = make_test_ring();
    for (const auto& m : monomials_up_to_degree(*local, 3)) {
        CHECK(normal_form(shipped, {{m, Rational(1)}}).terms ==
              normal_form(local, {{m, Rational(1)}}).terms);
    }
}
