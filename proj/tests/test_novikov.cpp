#include <functional>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "gwsurgery/novikov.hpp"

using namespace gwsurgery;

namespace {

LatticePtr line() {
    CurveClassLattice lat;
    lat.name = "line";
    lat.rank = 1;
    lat.effective_generators = {{1}};
    return CurveClassLattice::create(std::move(lat));
}

// oracle: expand one tail directly as sum_{k>=0} c q^{beta+k gamma}
std::map<IntVec, Rational> expand_tail(const NovikovTail& t, const IntVec& ample,
                                       long long cutoff) {
    std::map<IntVec, Rational> out;
    IntVec e = t.beta;
    auto deg = [&](const IntVec& v) {
        long long s = 0;
        for (size_t i = 0; i < v.size(); ++i) s += ample[i] * v[i];
        return s;
    };
    while (deg(e) <= cutoff) {
        out[e] += t.coeff;
        for (size_t i = 0; i < e.size(); ++i) e[i] += t.gamma[i];
    }
    return out;
}

}  // namespace

TEST_CASE("truncation matches direct geometric-series expansion") {
    const auto& g = fixtures::geometry();
    auto x = g.lattice("X");
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> small(0, 3), coef(-5, 5);
    const IntVec ample{1, 1};
    for (int trial = 0; trial < 100; ++trial) {
        NovikovElement f = NovikovElement::zero(x);
        std::map<IntVec, Rational> expect;
        for (int terms = 0; terms < 3; ++terms) {
            IntVec b{small(rng), small(rng)};
            Rational c(coef(rng));
            f = nov_add(f, nov_term(x->cls(b), c));
            expect[b] += c;
        }
        for (int tails = 0; tails < 2; ++tails) {
            IntVec b{small(rng), small(rng)};
            IntVec gm{small(rng), small(rng)};
            if (gm[0] == 0 && gm[1] == 0) gm[0] = 1;
            Rational c(coef(rng));
            f = nov_add(f, nov_tail(x->cls(b), x->cls(gm), c));
            for (auto& [e, v] : expand_tail({c, b, gm}, ample, 9)) expect[e] += v;
        }
        for (auto it = expect.begin(); it != expect.end();) {
            long long deg = it->first[0] + it->first[1];
            if (it->second == 0 || deg > 9)
                it = expect.erase(it);
            else
                ++it;
        }
        CHECK(truncate(f, ample, 9) == expect);
    }
}

TEST_CASE("truncation needs positive ample degree on tail denominators") {
    auto l = line();
    auto f = nov_tail(l->cls({0}), l->cls({1}), Rational(1));
    CHECK_THROWS_AS((void)truncate(f, {-1}, 5), Error);
    CHECK_THROWS_AS((void)truncate(f, {0}, 5), Error);
}

TEST_CASE("analytic continuation rewrites anti-effective tails") {
    auto l = line();
    // 1/(1 - q^{-1}) = -q/(1 - q)
    auto f = nov_tail(l->cls({0}), l->cls({-1}), Rational(1));
    auto cont = analytic_continue(f);
    auto closed = nov_scalar_mul(Rational(-1), nov_tail(l->cls({1}), l->cls({1}), Rational(1)));
    CHECK(cont == closed);
    // q^{-2}/(1 - q^{-1}) = -q^{-1} - 1 - q/(1-q)
    auto g = nov_tail(l->cls({-2}), l->cls({-1}), Rational(1));
    auto gc = analytic_continue(g);
    NovikovElement expect = nov_term(l->cls({-1}), Rational(-1));
    expect = nov_add(expect, nov_constant(l, Rational(-1)));
    expect = nov_add(expect, nov_scalar_mul(Rational(-1),
                                            nov_tail(l->cls({1}), l->cls({1}), Rational(1))));
    CHECK(gc == expect);
}

TEST_CASE("analytic continuation is idempotent and fixes effective elements") {
    const auto& g = fixtures::geometry();
    auto x = g.lattice("X");
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> small(0, 2), coef(-4, 4), sign(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        NovikovElement f = nov_term(x->cls({small(rng), small(rng)}), Rational(coef(rng)));
        IntVec gm{small(rng), small(rng)};
        if (gm[0] == 0 && gm[1] == 0) gm[0] = 1;
        if (sign(rng)) {
            gm[0] = -gm[0];
            gm[1] = -gm[1];
        }
        IntVec b{small(rng), small(rng)};
        f = nov_add(f, nov_tail(x->cls(b), x->cls(gm), Rational(coef(rng))));
        auto once = analytic_continue(f);
        CHECK(analytic_continue(once) == once);
        if (effective_supported(f)) CHECK(once == f);
    }
}

TEST_CASE("isomorphic is an equivalence compatible with continuation") {
    auto l = line();
    auto f = nov_tail(l->cls({0}), l->cls({-1}), Rational(2));
    auto g = nov_scalar_mul(Rational(-2), nov_tail(l->cls({1}), l->cls({1}), Rational(1)));
    auto h = analytic_continue(f);
    CHECK(isomorphic(f, f));
    CHECK(isomorphic(f, g));
    CHECK(isomorphic(g, f));
    CHECK(isomorphic(f, h));
    CHECK(isomorphic(g, h));
    CHECK(!isomorphic(f, nov_constant(l, Rational(1))));
}

TEST_CASE("addition merges and cancels") {
    auto l = line();
    auto f = nov_add(nov_term(l->cls({2}), Rational(3, 2)),
                     nov_tail(l->cls({0}), l->cls({1}), Rational(5)));
    auto neg = nov_scalar_mul(Rational(-1), f);
    CHECK(nov_add(f, neg).is_zero());
    auto twice = nov_add(f, f);
    CHECK(twice == nov_scalar_mul(Rational(2), f));
}

TEST_CASE("substitution respects lattice maps") {
    const auto& g = fixtures::geometry();
    auto x = g.lattice("X");
    const auto& phie = g.map("phie");
    auto f = nov_add(nov_term(x->cls({2, 1}), Rational(7)),
                     nov_tail(x->cls({0, 1}), x->cls({0, 2}), Rational(1, 3)));
    auto sub = substitute(f, phie);
    CHECK(sub.lattice == g.lattice("Xs"));
    CHECK(sub.poly.at(IntVec{1}) == 7);
    REQUIRE(sub.tails.size() == 1);
    CHECK(sub.tails[0].beta == IntVec{1});
    CHECK(sub.tails[0].gamma == IntVec{2});
    // the exceptional-curve class C maps to zero: such tails are rejected
    auto bad = nov_tail(x->cls({0, 1}), x->cls({1, 0}), Rational(1));
    CHECK_THROWS_AS((void)substitute(bad, phie), Error);
    // wrong source lattice
    CHECK_THROWS_AS((void)substitute(sub, phie), Error);
}

TEST_CASE("substitution is additive") {
    const auto& g = fixtures::geometry();
    auto x = g.lattice("X");
    const auto& phi = g.map("phi");
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> small(0, 3), coef(-4, 4);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = nov_term(x->cls({small(rng), small(rng)}), Rational(coef(rng)));
        auto h = nov_tail(x->cls({small(rng), small(rng)}), x->cls({1, small(rng)}),
                          Rational(coef(rng)));
        CHECK(substitute(nov_add(f, h), phi) ==
              nov_add(substitute(f, phi), substitute(h, phi)));
    }
}
