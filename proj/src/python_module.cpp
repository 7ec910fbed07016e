#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gwsurgery/geometry_io.hpp"

namespace py = pybind11;
using namespace gwsurgery;

namespace {

struct PyLattice {
    LatticePtr ptr;
};

struct PyRing {
    RingPtr ptr;
};

std::string rational_str(const Rational& r) { return format_rational(r); }

Rational rational_from_str(const std::string& s) { return parse_rational(s); }

}  // namespace

PYBIND11_MODULE(_gwsurgery, m) {
    m.doc() = "exact curve-class surgery calculator";

    py::register_exception<Error>(m, "GwError");

    py::class_<CurveClass>(m, "CurveClass")
        .def_property_readonly("coords", [](const CurveClass& c) { return c.coords; })
        .def("__eq__", [](const CurveClass& a, const CurveClass& b) { return a == b; })
        .def("__add__", [](const CurveClass& a, const CurveClass& b) { return a + b; })
        .def("__mul__", [](const CurveClass& a, long long m) { return a * m; })
        .def("__repr__",
             [](const CurveClass& c) { return c.lattice->name + format_coords(c.coords); });

    py::class_<PyLattice>(m, "Lattice")
        .def_property_readonly("name", [](const PyLattice& l) { return l.ptr->name; })
        .def_property_readonly("rank", [](const PyLattice& l) { return l.ptr->rank; })
        .def("cls", [](const PyLattice& l, IntVec coords) { return l.ptr->cls(std::move(coords)); })
        .def("named", [](const PyLattice& l, const std::string& label) { return l.ptr->named(label); });

    m.def("is_effective", &is_effective, py::arg("cls"), py::arg("bound") = 64);

    py::class_<LatticeMap>(m, "LatticeMap").def("apply", &LatticeMap::apply);

    m.def("minimal_lift",
          [](const LatticeMap& proj, const std::vector<CurveClass>& fibers,
             const CurveClass& beta) { return minimal_lift(proj, fibers, beta); });

    py::class_<PyRing>(m, "Ring")
        .def_property_readonly("name", [](const PyRing& r) { return r.ptr->name; });

    py::class_<RingElement>(m, "RingElement")
        .def("__eq__", [](const RingElement& a, const RingElement& b) { return a == b; })
        .def("__repr__", [](const RingElement& e) { return format_element(e); })
        .def("serialize", [](const RingElement& e) { return serialize_polynomial(e.terms); });

    m.def("normal_form", [](const PyRing& ring, const std::string& expr) {
        return normal_form(ring.ptr,
                           parse_polynomial(expr, static_cast<int>(ring.ptr->generator_names.size())));
    });
    m.def("ring_multiply", &ring_multiply);
    m.def("triple_degree0", [](const RingElement& a, const RingElement& b, const RingElement& c) {
        return rational_str(triple_degree0(a, b, c));
    });

    py::class_<NovikovElement>(m, "NovikovElement")
        .def("__eq__", [](const NovikovElement& a, const NovikovElement& b) { return a == b; })
        .def("__repr__", [](const NovikovElement& f) { return format_novikov(f); })
        .def("serialize", [](const NovikovElement& f) { return serialize_novikov(f); });

    m.def("parse_novikov", [](const std::string& text, const PyLattice& lat) {
        return parse_novikov(text, lat.ptr);
    });
    m.def("nov_add", &nov_add);
    m.def("analytic_continue", &analytic_continue);
    m.def("isomorphic", &isomorphic);
    m.def("substitute", &substitute);
    m.def("truncate", [](const NovikovElement& f, const IntVec& ample, long long cutoff) {
        std::map<std::string, std::string> out;
        for (const auto& [b, c] : truncate(f, ample, cutoff)) out[format_coords(b)] = rational_str(c);
        return out;
    });

    py::class_<GWTable>(m, "GWTable")
        .def("__eq__", [](const GWTable& a, const GWTable& b) { return a == b; })
        .def("set",
             [](GWTable& t, int g, int n, const CurveClass& beta,
                std::vector<std::string> labels, const std::string& value) {
                 t.set(g, n, beta, std::move(labels), rational_from_str(value));
             })
        .def("lookup",
             [](const GWTable& t, int g, int n, const CurveClass& beta,
                std::vector<std::string> labels) -> py::object {
                 auto v = t.lookup(g, n, beta, std::move(labels));
                 if (!v) return py::none();
                 return py::str(rational_str(*v));
             })
        .def("serialize", [](const GWTable& t) { return serialize_gwtable(t); });

    py::class_<FlopGeometry>(m, "FlopGeometry");
    py::class_<TransitionGeometry>(m, "TransitionGeometry");
    py::class_<BlowupGeometry>(m, "BlowupGeometry");
    py::class_<ConifoldGeometry>(m, "ConifoldGeometry");

    m.def("flop_transform", &flop_transform);
    m.def("flop_involution_check", &flop_involution_check);
    m.def("multiple_cover_tail", &multiple_cover_tail);
    m.def("three_point_function", &three_point_function);
    m.def("wallcrossing_check",
          [](const GWTable& tx, const GWTable& txp, const FlopGeometry& geom,
             const std::string& a1, const std::string& a2, const std::string& a3) {
              auto rep = wallcrossing_check(tx, txp, geom, a1, a2, a3);
              return py::make_tuple(rep.isomorphic, rational_str(rep.classical_discrepancy),
                                    format_novikov(rep.pushed), format_novikov(rep.side_xprime));
          });
    m.def("transition_index_set", &transition_index_set);
    m.def("transition_transform",
          [](const GWTable& t, int g, int n, const CurveClass& beta,
             const std::vector<std::string>& labels, const TransitionGeometry& geom) {
              return rational_str(transition_transform(t, g, n, beta, labels, geom));
          });
    m.def("transition_transform_fiber_sum",
          [](const GWTable& t, int g, int n, const CurveClass& beta,
             const std::vector<std::string>& labels, const TransitionGeometry& geom,
             long long cutoff) {
              return rational_str(transition_transform_fiber_sum(t, g, n, beta, labels, geom, cutoff));
          });
    m.def("transition_threepoint_check",
          [](const GWTable& tx, const GWTable& txs, const TransitionGeometry& geom,
             const std::string& a1, const std::string& a2, const std::string& a3) {
              return transition_threepoint_check(tx, txs, geom, a1, a2, a3).equal;
          });

    py::class_<TripleRecord>(m, "TripleRecord")
        .def_readonly("key", &TripleRecord::key)
        .def_readonly("genus", &TripleRecord::genus)
        .def_readonly("multiplicity", &TripleRecord::multiplicity)
        .def_readonly("eq", &TripleRecord::eq);

    py::class_<EnumerationCaps>(m, "EnumerationCaps")
        .def(py::init<>())
        .def_readwrite("max_vertices", &EnumerationCaps::max_vertices)
        .def_readwrite("max_genus", &EnumerationCaps::max_genus)
        .def_readwrite("max_weight", &EnumerationCaps::max_weight);

    m.def("enumerate_blowup_triples", &enumerate_blowup_triples);
    m.def("enumerate_conifold_triples", &enumerate_conifold_triples);

    py::class_<GeometryFile>(m, "GeometryFile")
        .def("lattice",
             [](const GeometryFile& g, const std::string& name) { return PyLattice{g.lattice(name)}; })
        .def("map", &GeometryFile::map, py::return_value_policy::reference_internal)
        .def("ring",
             [](const GeometryFile& g, const std::string& name) { return PyRing{g.ring(name)}; })
        .def("flop",
             [](const GeometryFile& g, const std::string& name) {
                 auto it = g.flops.find(name);
                 if (it == g.flops.end()) throw Error("unknown flop: " + name);
                 return it->second;
             })
        .def("blowup",
             [](const GeometryFile& g, const std::string& name) {
                 auto it = g.blowups.find(name);
                 if (it == g.blowups.end()) throw Error("unknown blowup: " + name);
                 return it->second;
             })
        .def("conifold",
             [](const GeometryFile& g, const std::string& name) {
                 auto it = g.conifolds.find(name);
                 if (it == g.conifolds.end()) throw Error("unknown conifold: " + name);
                 return it->second;
             })
        .def("transition",
             [](const GeometryFile& g, const std::string& name) {
                 auto it = g.transitions.find(name);
                 if (it == g.transitions.end()) throw Error("unknown transition: " + name);
                 return it->second;
             })
        .def("serialize", &serialize_geometry);

    m.def("load_geometry", &load_geometry);
    m.def("parse_geometry", [](const std::string& text) {
        std::istringstream is(text);
        return parse_geometry(is);
    });
    m.def("load_gwtable", &load_gwtable);
    m.def("parse_gwtable", [](const std::string& text, const GeometryFile& g) {
        std::istringstream is(text);
        return parse_gwtable(is, g);
    });
    m.def("new_gwtable", [](const PyLattice& lat) { return GWTable::create(lat.ptr); });
}
