#include "gwsurgery/chow_ring.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace gwsurgery {

namespace {

bool divides(const Monomial& lhs, const Monomial& m) {
    for (size_t i = 0; i < lhs.size(); ++i)
        if (lhs[i] > m[i]) return false;
    return true;
}

Monomial quotient(const Monomial& m, const Monomial& lhs) {
    Monomial q(m.size());
    for (size_t i = 0; i < m.size(); ++i) q[i] = m[i] - lhs[i];
    return q;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial p(a.size());
    for (size_t i = 0; i < a.size(); ++i) p[i] = a[i] + b[i];
    return p;
}

void add_term(Polynomial& p, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = p.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

// Fully reduces one monomial; deterministic (lowest rule index first).
// The call budget guards against non-terminating rule sets during the
// construction-time check.
Polynomial reduce_monomial(const RingPresentation& pres, const Monomial& m,
                           std::map<Monomial, Polynomial>& memo, long& budget,
                           std::set<Monomial>& visiting) {
    if (pres.degree(m) > pres.top_degree) return {};
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    if (!visiting.insert(m).second || --budget < 0)
        throw Error("rewriting does not terminate in ring '" + pres.name + "'");
    for (const auto& rule : pres.rules) {
        if (!divides(rule.lhs, m)) continue;
        Monomial q = quotient(m, rule.lhs);
        Polynomial out;
        for (const auto& [rm, rc] : rule.rhs) {
            Polynomial sub = reduce_monomial(pres, mono_mul(q, rm), memo, budget, visiting);
            for (const auto& [sm, sc] : sub) add_term(out, sm, rc * sc);
        }
        visiting.erase(m);
        memo[m] = out;
        return out;
    }
    visiting.erase(m);
    Polynomial self{{m, Rational(1)}};
    memo[m] = self;
    return self;
}

}  // namespace

int RingPresentation::degree(const Monomial& m) const {
    if (m.size() != degrees.size()) throw Error("monomial arity mismatch in ring '" + name + "'");
    int d = 0;
    for (size_t i = 0; i < m.size(); ++i) d += m[i] * degrees[i];
    return d;
}

Monomial RingPresentation::monomial(std::vector<int> exps) const {
    if (exps.size() != generator_names.size())
        throw Error("monomial arity mismatch in ring '" + name + "'");
    return exps;
}

std::vector<Monomial> monomials_up_to_degree(const RingPresentation& pres, int max_degree) {
    std::vector<Monomial> out;
    Monomial cur(pres.generator_names.size(), 0);
    std::function<void(size_t, int)> walk = [&](size_t i, int deg_left) {
        if (i == cur.size()) {
            out.push_back(cur);
            return;
        }
        int d = pres.degrees[i];
        for (int e = 0; e * d <= deg_left; ++e) {
            cur[i] = e;
            walk(i + 1, deg_left - e * d);
        }
        cur[i] = 0;
    };
    walk(0, max_degree);
    std::sort(out.begin(), out.end());
    return out;
}

RingPtr RingPresentation::create(RingPresentation data) {
    if (data.generator_names.size() != data.degrees.size())
        throw Error("ring '" + data.name + "': generator/degree count mismatch");
    for (int d : data.degrees)
        if (d <= 0) throw Error("ring '" + data.name + "': generator degrees must be positive");
    if (data.top_degree < 0) throw Error("ring '" + data.name + "': negative top degree");
    for (const auto& rule : data.rules) {
        int ld = data.degree(rule.lhs);
        for (const auto& [m, c] : rule.rhs) {
            if (c == 0) throw Error("ring '" + data.name + "': zero coefficient in rule rhs");
            if (data.degree(m) != ld)
                throw Error("ring '" + data.name + "': rewrite rule is not degree-homogeneous");
        }
    }
    for (const auto& [m, v] : data.integrals)
        if (data.degree(m) != data.top_degree)
            throw Error("ring '" + data.name + "': integral declared on non-top-degree monomial");

    auto pres = std::make_shared<RingPresentation>(std::move(data));

    // Termination and confluence over the finite monomial set of degree
    // <= top_degree: every one-step reduct must normalize to the same form.
    std::map<Monomial, Polynomial> memo;
    long budget = 1000000;
    std::set<Monomial> visiting;
    for (const auto& m : monomials_up_to_degree(*pres, pres->top_degree)) {
        Polynomial nf = reduce_monomial(*pres, m, memo, budget, visiting);
        for (const auto& rule : pres->rules) {
            if (!divides(rule.lhs, m)) continue;
            Monomial q = quotient(m, rule.lhs);
            Polynomial step_nf;
            for (const auto& [rm, rc] : rule.rhs) {
                Polynomial sub = reduce_monomial(*pres, mono_mul(q, rm), memo, budget, visiting);
                for (const auto& [sm, sc] : sub) add_term(step_nf, sm, rc * sc);
            }
            if (step_nf != nf)
                throw Error("ring '" + pres->name + "': rewrite rules are not confluent at " +
                            format_monomial(*pres, m));
        }
    }
    return pres;
}

bool RingElement::operator==(const RingElement& other) const {
    return presentation == other.presentation && terms == other.terms;
}

RingElement normal_form(const RingPtr& pres, const Polynomial& poly) {
    std::map<Monomial, Polynomial> memo;
    long budget = 1000000;
    std::set<Monomial> visiting;
    Polynomial out;
    for (const auto& [m, c] : poly) {
        if (c == 0) continue;
        Polynomial nf = reduce_monomial(*pres, m, memo, budget, visiting);
        for (const auto& [nm, nc] : nf) add_term(out, nm, c * nc);
    }
    return {pres, std::move(out)};
}

RingElement ring_add(const RingElement& a, const RingElement& b) {
    if (a.presentation != b.presentation) throw Error("ring element presentation mismatch");
    Polynomial out = a.terms;
    for (const auto& [m, c] : b.terms) add_term(out, m, c);
    return {a.presentation, std::move(out)};
}

RingElement ring_multiply(const RingElement& a, const RingElement& b) {
    if (a.presentation != b.presentation) throw Error("ring element presentation mismatch");
    Polynomial prod;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) add_term(prod, mono_mul(ma, mb), ca * cb);
    return normal_form(a.presentation, prod);
}

RingElement ring_scalar_mul(const Rational& c, const RingElement& a) {
    Polynomial out;
    for (const auto& [m, v] : a.terms) add_term(out, m, c * v);
    return {a.presentation, std::move(out)};
}

RingElement ring_one(const RingPtr& pres) {
    Polynomial p{{Monomial(pres->generator_names.size(), 0), Rational(1)}};
    return {pres, std::move(p)};
}

Rational triple_degree0(const RingElement& a, const RingElement& b, const RingElement& c) {
    RingElement prod = ring_multiply(ring_multiply(a, b), c);
    const auto& pres = *prod.presentation;
    Rational total = 0;
    for (const auto& [m, coeff] : prod.terms) {
        if (pres.degree(m) != pres.top_degree) continue;
        auto it = pres.integrals.find(m);
        if (it == pres.integrals.end()) {
            if (pres.integrals.empty())
                throw Error("ring '" + pres.name + "': no integration pairing declared");
            throw Error("ring '" + pres.name + "': no integral declared for " +
                        format_monomial(pres, m));
        }
        total += coeff * it->second;
    }
    return total;
}

std::string format_monomial(const RingPresentation& pres, const Monomial& m) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!first) os << "*";
        os << pres.generator_names[i];
        if (m[i] > 1) os << "^" << m[i];
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

std::string format_element(const RingElement& e) {
    if (e.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : e.terms) {
        if (!first) os << " + ";
        os << format_rational(c) << "*" << format_monomial(*e.presentation, m);
        first = false;
    }
    return os.str();
}

}  // namespace gwsurgery
