#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gwsurgery/curve_lattice.hpp"
#include "gwsurgery/novikov.hpp"

namespace gwsurgery {

// A cycle class usable as a 3-point insertion: only its label, codimension
// and pairing against the exceptional curve matter here. Codimension 0 is
// the fundamental class, 1 a divisor, 3 a point.
struct InsertionClass {
    std::string label;
    int codimension = 0;
    long long c_pairing = 0;  // [C] . alpha

    bool operator==(const InsertionClass& o) const = default;
};

// Classical degree-0 triple products (a1.a2.a3)_0, keyed by sorted labels.
struct TripleProductTable {
    std::map<std::array<std::string, 3>, Rational> products;

    void set(std::string a, std::string b, std::string c, Rational value);
    Rational get(const std::string& a, const std::string& b, const std::string& c) const;
    bool has(const std::string& a, const std::string& b, const std::string& c) const;
};

struct GWKey {
    int g = 0;
    int n = 0;
    CurveClass beta;
    std::vector<std::string> insertions;  // kept sorted

    bool operator<(const GWKey& o) const;
    bool operator==(const GWKey& o) const;
};

struct GWTable {
    LatticePtr lattice;
    std::map<GWKey, Rational> entries;
    bool multiple_cover_rule = false;  // genus-0 closed form attached on m[C]

    static GWTable create(LatticePtr lattice);
    void set(int g, int n, const CurveClass& beta, std::vector<std::string> insertions,
             Rational value);
    std::optional<Rational> lookup(int g, int n, const CurveClass& beta,
                                   std::vector<std::string> insertions) const;
    bool operator==(const GWTable& o) const;
};

struct FlopGeometry {
    LatticePtr x, xprime;
    LatticeMap phi;          // H2(X) -> H2(X')
    LatticeMap phi_inverse;  // H2(X') -> H2(X)
    CurveClass c, cprime;    // exceptional rational curve classes
    std::map<std::string, InsertionClass> insertions;  // classes on X
    TripleProductTable classical;                      // degree-0 products on X

    void validate() const;
    FlopGeometry reversed() const;
    // beta = m [C]; includes m = 0 for beta = 0
    std::optional<long long> multiple_of_c(const CurveClass& beta) const;
    const InsertionClass& insertion(const std::string& label) const;
};

struct TransitionGeometry {
    LatticePtr x, xsecond, ytilde;
    LatticeMap phi_star;  // H2(X'') -> H2(X), section of phi_e
    LatticeMap phi_e;     // H2(X)  -> H2(X''), kernel Z[C]
    LatticeMap proj;      // H2(Ytilde) -> H2(X''), minimal-lift hook
    CurveClass c;         // generator of ker(phi_e)
    std::string exc;      // divisor label of E on Ytilde
    CurveClass fiber1, fiber2;  // ruling classes on Ytilde
    std::map<std::string, std::string> label_map;  // X'' labels -> X labels
    TripleProductTable classical_x, classical_xsecond;
    std::map<std::string, InsertionClass> insertions;  // on X''; c_pairing is C.(phi* alpha)

    void validate() const;
};

// Entries with beta = m[C], m != 0 carry over only for n = 0; n > 0 ones are
// rejected (their transport needs the divisor axiom, left to the caller).
GWTable flop_transform(const GWTable& table, const FlopGeometry& geom);

// Applies the flop both ways and compares with the original table.
bool flop_involution_check(const GWTable& table, const FlopGeometry& geom);

// (C.a1)(C.a2)(C.a3) q^C / (1 - q^C): the genus-0 multiple-cover series.
NovikovElement multiple_cover_tail(long long a1, long long a2, long long a3,
                                   const CurveClass& c);

struct TripleCorrection {
    Rational original;   // (a1.a2.a3)_0 on X
    Rational corrected;  // product of the transformed classes on X'
    Rational excess;     // (C.a1)(C.a2)(C.a3)
};

// Excess-intersection correction of the classical triple product under the
// flop; records the corrected product into the given X' table. The third
// term drops whenever any insertion has codimension 0 or 3.
TripleCorrection triple_product_correction(const std::string& a1, const std::string& a2,
                                           const std::string& a3, const FlopGeometry& geom,
                                           TripleProductTable& xprime_products);

// Genus-0 3-point function: classical product + the beta != 0, m[C] part
// from the table + the multiple-cover tail (when the rule is attached).
NovikovElement three_point_function(const GWTable& table, const FlopGeometry& geom,
                                    const std::string& a1, const std::string& a2,
                                    const std::string& a3);

struct WallCrossingReport {
    NovikovElement pushed;        // phi_*(Psi^X), continued
    NovikovElement side_xprime;   // Psi^{X'}(phi_* alphas), continued
    bool isomorphic = false;
    Rational classical_discrepancy;  // -(C.a1)(C.a2)(C.a3)
};

// The two 3-point functions across the flop agree up to analytic
// continuation; the classical parts differ by the excess term.
WallCrossingReport wallcrossing_check(const GWTable& table_x, const GWTable& table_xprime,
                                      const FlopGeometry& geom, const std::string& a1,
                                      const std::string& a2, const std::string& a3);

// I_beta = {0, 1, ..., beta~0 . E} for beta != 0 on X''.
std::vector<long long> transition_index_set(const CurveClass& beta_second,
                                            const TransitionGeometry& geom);

// sum over l in I_beta of the X-table value at (g, n, phi*(beta) + l[C])
// with the insertions transported through the label map.
Rational transition_transform(const GWTable& table_x, int g, int n,
                              const CurveClass& beta_second,
                              const std::vector<std::string>& labels,
                              const TransitionGeometry& geom);

// Same sum ranging over the whole fiber phi_e^{-1}(beta) up to |k| <= cutoff;
// a nonzero table value outside the I_beta range is an input inconsistency
// and is reported, not summed.
Rational transition_transform_fiber_sum(const GWTable& table_x, int g, int n,
                                        const CurveClass& beta_second,
                                        const std::vector<std::string>& labels,
                                        const TransitionGeometry& geom, long long cutoff);

struct TransitionThreePointReport {
    NovikovElement side_x;        // Psi^X(phi* alphas) after q^beta -> q^{phi_e beta}
    NovikovElement side_xsecond;  // Psi^{X''}(alphas)
    bool equal = false;
};

// Insertions must miss C (c_pairing 0), so the [C]-tail vanishes and the
// substituted X series must equal the X'' series exactly.
TransitionThreePointReport transition_threepoint_check(const GWTable& table_x,
                                                       const GWTable& table_xsecond,
                                                       const TransitionGeometry& geom,
                                                       const std::string& a1,
                                                       const std::string& a2,
                                                       const std::string& a3);

}  // namespace gwsurgery
