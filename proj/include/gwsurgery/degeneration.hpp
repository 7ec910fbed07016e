#pragma once

#include <map>
#include <string>
#include <vector>

#include "gwsurgery/curve_lattice.hpp"

namespace gwsurgery {

struct GraphVertex {
    int genus = 0;
    CurveClass cls;
};

struct GraphRoot {
    int vertex = 0;
    int weight = 1;
};

// Admissible weighted graph for a relative pair: no edges, ordered legs,
// ordered weighted roots, genus and curve-class weights on the vertices.
// Relatively connected: a single vertex, or every vertex carries a root.
struct AdmissibleGraph {
    LatticePtr lattice;
    std::vector<GraphVertex> vertices;
    std::vector<int> legs;         // vertex index per leg
    std::vector<GraphRoot> roots;  // ordered, weights >= 1

    static AdmissibleGraph create(LatticePtr lattice, std::vector<GraphVertex> vertices,
                                  std::vector<int> legs, std::vector<GraphRoot> roots);
    static AdmissibleGraph empty(LatticePtr lattice);

    bool is_empty() const { return vertices.empty(); }
    CurveClass total_class() const;
    int total_genus() const;
};

// Triple (Gamma_1, Gamma_2, I): matching root weights, connected after
// joining i-th roots, I the set of global marks carried by Gamma_1.
struct AdmissibleTriple {
    AdmissibleGraph gamma1, gamma2;
    std::vector<int> marks1;  // sorted subset of {1..n}, size = #legs(gamma1)

    static AdmissibleTriple create(AdmissibleGraph gamma1, AdmissibleGraph gamma2,
                                   std::vector<int> marks1);
    int root_count() const { return static_cast<int>(gamma1.roots.size()); }
    int leg_count() const {
        return static_cast<int>(gamma1.legs.size() + gamma2.legs.size());
    }
};

// g(eta) = r + 1 - |V| + sum g(v)
int genus(const AdmissibleTriple& eta);
// d(eta) = sum b(v).H over both sides
long long degree(const AdmissibleTriple& eta, const IntVec& h1, const IntVec& h2);
// m(eta) = product of the root weights, 1 for r = 0
long long root_multiplicity(const AdmissibleTriple& eta);
// Number of root permutations fixing the canonical form; r <= 8.
int eq_count(const AdmissibleTriple& eta);

// Canonical serialization, invariant under vertex relabeling.
std::string graph_key(const AdmissibleGraph& g);
std::string triple_key(const AdmissibleTriple& eta);

struct EnumerationCaps {
    int max_vertices = 3;
    int max_genus = 2;
    int max_weight = 3;

    void validate() const;
};

// Degeneration data of the blow-up family: W_0 = Y1 \cup_E Y2 where Y1 is
// the blow-up of the downstairs variety and Y2 the exceptional bundle.
struct BlowupGeometry {
    LatticePtr down, y1, y2;
    LatticeMap p1, p2;
    std::string exc1, exc2;    // divisor label of E on each side
    CurveClass gamma1, gamma2; // fiber classes contracted by p1, p2
    IntVec ample_down, ample1, ample2;

    void validate() const;
};

// Conifold degeneration: W^ss_0 = Ytilde \cup_E Q.
struct ConifoldGeometry {
    LatticePtr down, ytilde, quadric;
    LatticeMap p1, p2;
    std::string exc1, exc2;
    CurveClass gamma21, gamma22;  // the two ruling classes on Ytilde
    CurveClass quadric_gen;       // generator of H_2(Q)
    IntVec ample_down, ample1, ample2;

    void validate() const;
};

struct TripleRecord {
    AdmissibleTriple triple;
    std::string key;   // canonical triple key of the representative
    std::string key1;  // graph key of gamma1
    std::string key2;
    int genus = 0;
    long long multiplicity = 1;  // m(eta)
    int eq = 1;                  // |Eq(eta)|
};

std::vector<TripleRecord> enumerate_blowup_triples(int g, int n, const CurveClass& beta,
                                                   const BlowupGeometry& geom,
                                                   const EnumerationCaps& caps);
std::vector<TripleRecord> enumerate_conifold_triples(int g, int n, const CurveClass& beta,
                                                     const ConifoldGeometry& geom,
                                                     const EnumerationCaps& caps);

// Basis of H^*(D) with its intersection pairing.
struct CohomologyBasis {
    std::vector<std::string> labels;
    std::vector<std::vector<Rational>> pairing;  // symmetric, non-degenerate

    static CohomologyBasis create(std::vector<std::string> labels,
                                  std::vector<std::vector<Rational>> pairing);
    int index(const std::string& label) const;
};

// Relative invariants with fundamental-class ordinary insertions, keyed by
// graph canonical key and the basis labels at the distinguished points.
struct RelativeGWTable {
    std::map<std::pair<std::string, std::vector<std::string>>, Rational> entries;

    void set(const std::string& graph_key, std::vector<std::string> labels, Rational value);
};

struct DegenerationResult {
    Rational value;
    std::vector<std::string> warnings;  // graphs with no table entries
};

// sum over eta of m(eta)/|Eq(eta)| [Psi_1 . Psi_2]_0, contracting the r
// distinguished points through the basis pairing.
DegenerationResult evaluate_degeneration(const std::vector<TripleRecord>& triples,
                                         const RelativeGWTable& table1,
                                         const RelativeGWTable& table2,
                                         const CohomologyBasis& basis);

struct VdimReport {
    long long lhs = 0;
    long long rhs = 0;
    bool holds() const { return lhs == rhs; }
    // per-side brackets (1-g_i)(dim-3) - b_i.K + n_i + (r - b_i.D)
    long long bracket1 = 0;
    long long bracket2 = 0;
};

// Virtual-dimension additivity for a triple in a degeneration with fiber
// dimension dim_total and divisor dimension dim_divisor. K functionals are
// the registered canonical pairings; the downstairs class is recovered
// through the projections.
VdimReport vdim_additivity_check(const AdmissibleTriple& eta, int dim_total, int dim_divisor,
                                 const IntVec& canonical_down, const LatticeMap& p1,
                                 const LatticeMap& p2, const std::string& exc1,
                                 const std::string& exc2);

}  // namespace gwsurgery
