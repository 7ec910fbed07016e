#include <functional>

#include "doctest.h"
#include "fixtures.hpp"
#include "gwsurgery/degeneration.hpp"
#include "triple_oracle.hpp"

using namespace gwsurgery;

namespace {

AdmissibleTriple sample_triple() {
    const auto& g = fixtures::geometry();
    auto xt = g.lattice("Xt");
    auto y2 = g.lattice("Y2");
    // two rooted vertices against two rooted vertices, equal weights
    auto g1 = AdmissibleGraph::create(
        xt,
        {GraphVertex{0, xt->cls({1, 1, 0})}, GraphVertex{1, xt->cls({0, 1, 0})}},
        {0},
        {GraphRoot{0, 1}, GraphRoot{1, 1}});
    auto g2 = AdmissibleGraph::create(y2, {GraphVertex{0, y2->cls({0, 2})}}, {0},
                                      {GraphRoot{0, 1}, GraphRoot{0, 1}});
    return AdmissibleTriple::create(g1, g2, {2});
}

}  // namespace

TEST_CASE("graph invariants match the defining formulas") {
    auto eta = sample_triple();
    // g = r + 1 - |V| + sum g(v) = 2 + 1 - 3 + 1
    CHECK(genus(eta) == 1);
    CHECK(root_multiplicity(eta) == 1);
    CHECK(eta.root_count() == 2);
    CHECK(eta.leg_count() == 2);
    CHECK(eta.gamma1.total_class().coords == IntVec{1, 2, 0});
    CHECK(eta.gamma1.total_genus() == 1);
    long long d = degree(eta, IntVec{1, 1, 1}, IntVec{1, 1});
    CHECK(d == 3 + 2);
}

TEST_CASE("admissibility is enforced at construction") {
    const auto& g = fixtures::geometry();
    auto xt = g.lattice("Xt");
    // two vertices, one without a root: not relatively connected
    CHECK_THROWS_AS(
        (void)AdmissibleGraph::create(
            xt, {GraphVertex{0, xt->cls({1, 0, 0})}, GraphVertex{0, xt->cls({0, 1, 0})}}, {},
            {GraphRoot{0, 1}}),
        Error);
    // zero-class genus-0 vertex with one special point: unstable
    CHECK_THROWS_AS(
        (void)AdmissibleGraph::create(xt, {GraphVertex{0, xt->cls({0, 0, 0})}}, {1000}, {}),
        Error);
    CHECK_THROWS_AS(
        (void)AdmissibleGraph::create(xt, {GraphVertex{0, xt->cls({0, 0, 0})}}, {0}, {}),
        Error);
    // weights must match across the triple
    auto a = AdmissibleGraph::create(xt, {GraphVertex{0, xt->cls({1, 1, 0})}}, {},
                                     {GraphRoot{0, 2}});
    auto y2 = g.lattice("Y2");
    auto b = AdmissibleGraph::create(y2, {GraphVertex{0, y2->cls({0, 1})}}, {},
                                     {GraphRoot{0, 1}});
    CHECK_THROWS_AS((void)AdmissibleTriple::create(a, b, {}), Error);
    // disconnected joined graph: no roots between two nonempty sides
    auto a0 = AdmissibleGraph::create(xt, {GraphVertex{1, xt->cls({1, 0, 0})}}, {}, {});
    auto b0 = AdmissibleGraph::create(y2, {GraphVertex{1, y2->cls({1, 0})}}, {}, {});
    CHECK_THROWS_AS((void)AdmissibleTriple::create(a0, b0, {}), Error);
}

TEST_CASE("eq counts the stabilizer of the canonical form") {
    auto eta = sample_triple();
    // the gamma1 root vertices differ in genus, so the root swap moves the key
    CHECK(eq_count(eta) == 1);
    const auto& g = fixtures::geometry();
    auto xt = g.lattice("Xt");
    auto y2 = g.lattice("Y2");
    auto g1 = AdmissibleGraph::create(xt, {GraphVertex{0, xt->cls({2, 1, 0})}}, {},
                                     {GraphRoot{0, 1}, GraphRoot{0, 1}});
    auto g2 = AdmissibleGraph::create(
        y2, {GraphVertex{0, y2->cls({0, 1})}, GraphVertex{0, y2->cls({0, 1})}}, {},
        {GraphRoot{0, 1}, GraphRoot{1, 1}});
    auto sym = AdmissibleTriple::create(g1, g2, {});
    CHECK(eq_count(sym) == 2);
    // keys are invariant under vertex relabeling
    auto g2swapped = AdmissibleGraph::create(
        y2, {GraphVertex{0, y2->cls({0, 1})}, GraphVertex{0, y2->cls({0, 1})}}, {},
        {GraphRoot{1, 1}, GraphRoot{0, 1}});
    CHECK(graph_key(g2) == graph_key(g2swapped));
}

TEST_CASE("blow-up enumeration matches the brute-force oracle") {
    const auto& g = fixtures::geometry();
    const auto& B = g.blowups.at("B");
    EnumerationCaps caps;
    for (long long a = 0; a <= 2; ++a) {
        for (long long b = 0; b <= 2; ++b) {
            for (int gen = 0; gen <= 1; ++gen) {
                for (int n = 0; n <= 1; ++n) {
                    CurveClass beta = g.lattice("X")->cls({a, b});
                    auto lib = oracle::as_set(enumerate_blowup_triples(gen, n, beta, B, caps));
                    auto ora = oracle::blowup_oracle(gen, n, beta, B, caps);
                    CAPTURE(a);
                    CAPTURE(b);
                    CAPTURE(gen);
                    CAPTURE(n);
                    INFO(oracle::diff_report(lib, ora));
                    CHECK(lib == ora);
                }
            }
        }
    }
}

TEST_CASE("conifold enumeration matches the brute-force oracle") {
    const auto& g = fixtures::geometry();
    const auto& K = g.conifolds.at("K");
    EnumerationCaps caps;
    for (long long d = 0; d <= 3; ++d) {
        for (int gen = 0; gen <= 1; ++gen) {
            for (int n = 0; n <= 1; ++n) {
                CurveClass beta = g.lattice("Xs")->cls({d});
                auto lib = oracle::as_set(enumerate_conifold_triples(gen, n, beta, K, caps));
                auto ora = oracle::conifold_oracle(gen, n, beta, K, caps);
                CAPTURE(d);
                CAPTURE(gen);
                CAPTURE(n);
                INFO(oracle::diff_report(lib, ora));
                CHECK(lib == ora);
            }
        }
    }
}

TEST_CASE("dedup accounts for the full orbit of root orderings") {
    // sum over records of r!/|Eq| must equal the number of distinct ordered keys
    const auto& g = fixtures::geometry();
    const auto& K = g.conifolds.at("K");
    EnumerationCaps caps;
    auto records = enumerate_conifold_triples(0, 0, g.lattice("Xs")->cls({3}), K, caps);
    for (const auto& rec : records) {
        const int r = rec.triple.root_count();
        std::set<std::string> orbit;
        std::vector<int> perm(r);
        std::iota(perm.begin(), perm.end(), 0);
        if (r == 0) {
            orbit.insert(rec.key);
        } else {
            do {
                orbit.insert(triple_key(oracle::permuted(rec.triple, perm)));
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        long long fact = 1;
        for (int i = 2; i <= r; ++i) fact *= i;
        CHECK(static_cast<long long>(orbit.size()) * rec.eq == fact);
    }
}

TEST_CASE("degeneration evaluation contracts through the pairing") {
    const auto& g = fixtures::geometry();
    auto xt = g.lattice("Xt");
    auto y2 = g.lattice("Y2");
    auto basis = CohomologyBasis::create(
        {"one", "pt"}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});

    auto g1 = AdmissibleGraph::create(xt, {GraphVertex{0, xt->cls({1, 1, 0})}}, {},
                                      {GraphRoot{0, 1}});
    auto g2 = AdmissibleGraph::create(y2, {GraphVertex{0, y2->cls({0, 1})}}, {},
                                      {GraphRoot{0, 1}});
    TripleRecord rec;
    rec.triple = AdmissibleTriple::create(g1, g2, {});
    rec.key = triple_key(rec.triple);
    rec.key1 = graph_key(rec.triple.gamma1);
    rec.key2 = graph_key(rec.triple.gamma2);
    rec.genus = genus(rec.triple);
    rec.multiplicity = root_multiplicity(rec.triple);
    rec.eq = eq_count(rec.triple);

    RelativeGWTable t1, t2;
    t1.set(rec.key1, {"one"}, Rational(2));
    t1.set(rec.key1, {"pt"}, Rational(3));
    t2.set(rec.key2, {"one"}, Rational(5));
    t2.set(rec.key2, {"pt"}, Rational(7));

    auto res = evaluate_degeneration({rec}, t1, t2, basis);
    CHECK(res.warnings.empty());
    // m/|Eq| * sum_{i,j} psi1(e_i) pairing(i,j) psi2(e_j)
    // = 1 * (2*<one,pt>*7 + 3*<pt,one>*5) with off-diagonal pairing 1
    CHECK(res.value == Rational(2 * 7 + 3 * 5));

    // linearity in the first table
    RelativeGWTable t1s;
    t1s.set(rec.key1, {"one"}, Rational(4));
    t1s.set(rec.key1, {"pt"}, Rational(6));
    auto res2 = evaluate_degeneration({rec}, t1s, t2, basis);
    CHECK(res2.value == 2 * res.value);

    // missing entries produce warnings, value treated as zero
    RelativeGWTable empty;
    auto res3 = evaluate_degeneration({rec}, empty, t2, basis);
    CHECK(res3.value == 0);
    CHECK(!res3.warnings.empty());
}

TEST_CASE("virtual dimension additivity on enumerated triples") {
    const auto& g = fixtures::geometry();
    const auto& B = g.blowups.at("B");
    EnumerationCaps caps;
    CurveClass beta = g.lattice("X")->cls({1, 2});
    auto k_down = g.lattice("X")->canonical_pairing;
    for (const auto& rec : enumerate_blowup_triples(0, 0, beta, B, caps)) {
        auto rep = vdim_additivity_check(rec.triple, 3, 2, k_down, B.p1, B.p2, B.exc1, B.exc2);
        CAPTURE(rec.key);
        CHECK(rep.holds());
        // the left side is the absolute expected dimension
        long long kbeta = 0;
        for (size_t i = 0; i < k_down.size(); ++i) kbeta += k_down[i] * beta.coords[i];
        CHECK(rep.lhs == (1 - 0) * (3 - 3) - kbeta + 0);
    }
}
