#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gwsurgery/rational.hpp"

namespace gwsurgery {

using IntVec = std::vector<long long>;

struct CurveClassLattice;
using LatticePtr = std::shared_ptr<const CurveClassLattice>;

// Integer point of H_2(·;Z) modulo torsion, tied to its lattice.
struct CurveClass {
    LatticePtr lattice;
    IntVec coords;

    bool is_zero() const;
    bool operator==(const CurveClass& other) const;
    bool operator<(const CurveClass& other) const;  // lex on coords, lattices must agree
    CurveClass operator+(const CurveClass& other) const;
    CurveClass operator-(const CurveClass& other) const;
    CurveClass operator-() const;
    CurveClass operator*(long long scalar) const;
};

// Free lattice modelling the curve-class group of a variety, together with
// the effective-cone semigroup generators and the pairing functionals
// against divisor classes and the canonical class.
struct CurveClassLattice {
    std::string name;
    int rank = 0;
    std::vector<std::string> generator_names;
    std::vector<IntVec> effective_generators;
    std::map<std::string, IntVec> divisor_pairings;
    IntVec canonical_pairing;  // empty when not registered
    std::map<std::string, IntVec> named_classes;

    // Validates invariants (functional lengths, nonzero generators, strict
    // convexity of the cone by bounded search) and freezes the value.
    static LatticePtr create(CurveClassLattice data);

    CurveClass cls(IntVec coords) const;
    CurveClass named(const std::string& label) const;
    bool has_divisor(const std::string& label) const;

private:
    mutable std::weak_ptr<const CurveClassLattice> self_;
    friend LatticePtr lattice_handle(const CurveClassLattice&);
};

LatticePtr lattice_handle(const CurveClassLattice& lat);

// Integer functional applied to the class coordinates.
long long pair(const CurveClassLattice& lat, const std::string& divisor_label,
               const CurveClass& cls);
long long pair_canonical(const CurveClassLattice& lat, const CurveClass& cls);
long long apply_functional(const IntVec& functional, const IntVec& coords);

// Cone membership by bounded exhaustive search over non-negative integer
// combinations of the effective generators. Throws UndecidedError when the
// search was truncated by the bound without an answer, never returns a
// silent false in that case.
bool is_effective(const CurveClass& cls, int bound = 64);

struct LatticeMap {
    LatticePtr source;
    LatticePtr target;
    std::vector<IntVec> matrix;  // target-rank rows, source-rank columns
    std::string name;

    static LatticeMap create(LatticePtr source, LatticePtr target,
                             std::vector<IntVec> matrix, std::string name);
    CurveClass apply(const CurveClass& cls) const;
};

// Particular integer solution of matrix * x = b, empty when none exists.
std::optional<IntVec> solve_integer(const std::vector<IntVec>& matrix, const IntVec& b);

// The distinguished lift beta~0 of beta under proj with every effective lift
// of beta equal to beta~0 plus a non-negative combination of the fiber
// classes. The fiber classes must span ker(proj). Errors when beta is not in
// the image or when the effective lifts fail to have that corner shape
// within the scan window.
CurveClass minimal_lift(const LatticeMap& proj, const std::vector<CurveClass>& fibers,
                        const CurveClass& beta, int window = 12, int eff_bound = 64);

// Blow-up variant: single fiber class gamma.
CurveClass minimal_lift_blowup(const LatticeMap& p1, const std::string& exceptional_label,
                               const CurveClass& gamma, const CurveClass& beta);

// The unique lift with zero pairing against the exceptional divisor,
// i.e. minimal lift shifted along gamma until divisor-degree zero.
CurveClass zero_pairing_lift(const LatticeMap& p1, const std::string& exceptional_label,
                             const CurveClass& gamma, const CurveClass& beta);

std::string format_coords(const IntVec& v);

}  // namespace gwsurgery
