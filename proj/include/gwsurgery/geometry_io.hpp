#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "gwsurgery/chow_ring.hpp"
#include "gwsurgery/degeneration.hpp"
#include "gwsurgery/novikov.hpp"
#include "gwsurgery/transform.hpp"

namespace gwsurgery {

// Contents of one geometry file: named lattices, lattice maps, quotient
// rings and the wired surgery setups.
struct GeometryFile {
    std::map<std::string, LatticePtr> lattices;
    std::map<std::string, LatticeMap> maps;
    std::map<std::string, RingPtr> rings;
    std::map<std::string, FlopGeometry> flops;
    std::map<std::string, BlowupGeometry> blowups;
    std::map<std::string, ConifoldGeometry> conifolds;
    std::map<std::string, TransitionGeometry> transitions;

    LatticePtr lattice(const std::string& name) const;
    const LatticeMap& map(const std::string& name) const;
    RingPtr ring(const std::string& name) const;
};

// Line-oriented text format, version header "gwsurgery v1". Parse errors
// carry 1-based line numbers.
GeometryFile parse_geometry(std::istream& in);
GeometryFile load_geometry(const std::string& path);
std::string serialize_geometry(const GeometryFile& g);

// GW table files: header "gwsurgery-table v1", a lattice line, an optional
// multiple-cover-rule line, then "entry g n <coords> <labels> <p/q>".
GWTable parse_gwtable(std::istream& in, const GeometryFile& g);
GWTable load_gwtable(const std::string& path, const GeometryFile& g);
std::string serialize_gwtable(const GWTable& t, const std::string& provenance = "");

// Relative tables: header "gwsurgery-reltable v1", then
// "rel <graph-key> <labels...> <p/q>".
RelativeGWTable parse_relative_table(std::istream& in);
RelativeGWTable load_relative_table(const std::string& path);
std::string serialize_relative_table(const RelativeGWTable& t);

// Token syntax for ring polynomials: terms "p/q:e1,e2,...", "0" for zero.
Polynomial parse_polynomial(const std::string& text, int rank);
std::string serialize_polynomial(const Polynomial& p);

// Token syntax for Novikov elements: poly terms "p/q:b1,..", tails
// "p/q:b1,../g1,..", "0" for zero.
NovikovElement parse_novikov(const std::string& text, const LatticePtr& lattice);
std::string serialize_novikov(const NovikovElement& f);

}  // namespace gwsurgery
