#include "gwsurgery/geometry_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gwsurgery {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

[[noreturn]] void fail(int lineno, const std::string& msg) {
    throw Error("line " + std::to_string(lineno) + ": " + msg);
}

long long to_int(const std::string& s, int lineno) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(lineno, "expected integer, got '" + s + "'");
    }
}

IntVec to_coords(const std::vector<std::string>& toks, size_t from, size_t count, int lineno) {
    if (toks.size() < from + count) fail(lineno, "too few coordinates");
    IntVec v(count);
    for (size_t i = 0; i < count; ++i) v[i] = to_int(toks[from + i], lineno);
    return v;
}

IntVec split_coords(const std::string& s, int lineno) {
    IntVec v;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) v.push_back(to_int(cur, lineno));
    if (v.empty()) fail(lineno, "empty coordinate list");
    return v;
}

std::string join_coords(const IntVec& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

struct LineReader {
    std::istream& in;
    int lineno = 0;

    bool next(std::vector<std::string>& toks) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            toks = tokenize(line);
            if (!toks.empty()) return true;
        }
        return false;
    }
};

CurveClass named_class(const GeometryFile& g, const std::string& lattice,
                       const std::string& label, int lineno) {
    try {
        return g.lattice(lattice)->named(label);
    } catch (const Error& e) {
        fail(lineno, e.what());
    }
}

}  // namespace

LatticePtr GeometryFile::lattice(const std::string& name) const {
    auto it = lattices.find(name);
    if (it == lattices.end()) throw Error("unknown lattice: " + name);
    return it->second;
}

const LatticeMap& GeometryFile::map(const std::string& name) const {
    auto it = maps.find(name);
    if (it == maps.end()) throw Error("unknown map: " + name);
    return it->second;
}

RingPtr GeometryFile::ring(const std::string& name) const {
    auto it = rings.find(name);
    if (it == rings.end()) throw Error("unknown ring: " + name);
    return it->second;
}

Polynomial parse_polynomial(const std::string& text, int rank) {
    Polynomial p;
    for (const auto& tok : tokenize(text)) {
        if (tok == "0") continue;
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw Error("malformed polynomial term: " + tok);
        Rational c = parse_rational(tok.substr(0, colon));
        IntVec e = split_coords(tok.substr(colon + 1), 0);
        if (static_cast<int>(e.size()) != rank)
            throw Error("polynomial exponent arity mismatch: " + tok);
        Monomial m(e.begin(), e.end());
        p[m] += c;
    }
    for (auto it = p.begin(); it != p.end();)
        it = it->second == 0 ? p.erase(it) : std::next(it);
    return p;
}

std::string serialize_polynomial(const Polynomial& p) {
    if (p.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : p) {
        if (!s.empty()) s += ' ';
        s += format_rational(c) + ":";
        for (size_t i = 0; i < m.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(m[i]);
        }
    }
    return s;
}

NovikovElement parse_novikov(const std::string& text, const LatticePtr& lattice) {
    NovikovElement f = NovikovElement::zero(lattice);
    for (const auto& tok : tokenize(text)) {
        if (tok == "0") continue;
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw Error("malformed series term: " + tok);
        Rational c = parse_rational(tok.substr(0, colon));
        std::string rest = tok.substr(colon + 1);
        auto slash = rest.find('/');
        NovikovElement piece = NovikovElement::zero(lattice);
        if (slash == std::string::npos) {
            IntVec b = split_coords(rest, 0);
            piece = nov_term(lattice->cls(b), c);
        } else {
            IntVec b = split_coords(rest.substr(0, slash), 0);
            IntVec g = split_coords(rest.substr(slash + 1), 0);
            piece = nov_tail(lattice->cls(b), lattice->cls(g), c);
        }
        f = nov_add(f, piece);
    }
    return f;
}

std::string serialize_novikov(const NovikovElement& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (const auto& [b, c] : f.poly) {
        if (!s.empty()) s += ' ';
        s += format_rational(c) + ":" + join_coords(b);
    }
    for (const auto& t : f.tails) {
        if (!s.empty()) s += ' ';
        s += format_rational(t.coeff) + ":" + join_coords(t.beta) + "/" + join_coords(t.gamma);
    }
    return s;
}

GeometryFile parse_geometry(std::istream& in) {
    GeometryFile g;
    LineReader rd{in};
    std::vector<std::string> toks;
    if (!rd.next(toks) || toks.size() != 2 || toks[0] != "gwsurgery" || toks[1] != "v1")
        fail(rd.lineno == 0 ? 1 : rd.lineno, "expected header 'gwsurgery v1'");

    while (rd.next(toks)) {
        const std::string section = toks[0];
        const int secline = rd.lineno;
        if (section == "lattice") {
            if (toks.size() != 3) fail(secline, "usage: lattice <name> <rank>");
            CurveClassLattice lat;
            lat.name = toks[1];
            lat.rank = static_cast<int>(to_int(toks[2], secline));
            while (rd.next(toks) && toks[0] != "end") {
                if (toks[0] == "gen") {
                    if (toks.size() != 2 + static_cast<size_t>(lat.rank))
                        fail(rd.lineno, "usage: gen <name> <coords>");
                    lat.generator_names.push_back(toks[1]);
                    lat.effective_generators.push_back(to_coords(toks, 2, lat.rank, rd.lineno));
                } else if (toks[0] == "divisor") {
                    if (toks.size() != 2 + static_cast<size_t>(lat.rank))
                        fail(rd.lineno, "usage: divisor <name> <coords>");
                    lat.divisor_pairings[toks[1]] = to_coords(toks, 2, lat.rank, rd.lineno);
                } else if (toks[0] == "canonical") {
                    lat.canonical_pairing = to_coords(toks, 1, lat.rank, rd.lineno);
                } else if (toks[0] == "class") {
                    if (toks.size() != 2 + static_cast<size_t>(lat.rank))
                        fail(rd.lineno, "usage: class <name> <coords>");
                    lat.named_classes[toks[1]] = to_coords(toks, 2, lat.rank, rd.lineno);
                } else {
                    fail(rd.lineno, "unknown lattice field: " + toks[0]);
                }
            }
            try {
                const std::string lat_name = lat.name;
                if (!g.lattices.emplace(lat_name, CurveClassLattice::create(std::move(lat))).second)
                    fail(secline, "duplicate lattice name");
            } catch (const Error& e) {
                fail(secline, e.what());
            }
        } else if (section == "map") {
            if (toks.size() != 4) fail(secline, "usage: map <name> <source> <target>");
            const std::string name = toks[1];
            LatticePtr src, tgt;
            try {
                src = g.lattice(toks[2]);
                tgt = g.lattice(toks[3]);
            } catch (const Error& e) {
                fail(secline, e.what());
            }
            std::vector<IntVec> rows;
            while (rd.next(toks) && toks[0] != "end") {
                if (toks[0] != "row") fail(rd.lineno, "unknown map field: " + toks[0]);
                rows.push_back(to_coords(toks, 1, src->rank, rd.lineno));
            }
            try {
                if (!g.maps.emplace(name, LatticeMap::create(src, tgt, rows, name)).second)
                    fail(secline, "duplicate map name");
            } catch (const Error& e) {
                fail(secline, e.what());
            }
        } else if (section == "ring") {
            if (toks.size() != 3) fail(secline, "usage: ring <name> <top-degree>");
            RingPresentation pres;
            pres.name = toks[1];
            pres.top_degree = static_cast<int>(to_int(toks[2], secline));
            while (rd.next(toks) && toks[0] != "end") {
                if (toks[0] == "rgen") {
                    if (toks.size() != 3) fail(rd.lineno, "usage: rgen <name> <degree>");
                    pres.generator_names.push_back(toks[1]);
                    pres.degrees.push_back(static_cast<int>(to_int(toks[2], rd.lineno)));
                } else if (toks[0] == "rule") {
                    auto eq = std::find(toks.begin(), toks.end(), "=");
                    if (eq == toks.end()) fail(rd.lineno, "usage: rule <exps> = <poly>");
                    const size_t nexp = static_cast<size_t>(eq - toks.begin()) - 1;
                    if (nexp != pres.generator_names.size())
                        fail(rd.lineno, "rule arity differs from generator count");
                    IntVec e = to_coords(toks, 1, nexp, rd.lineno);
                    std::string rhs;
                    for (auto it = eq + 1; it != toks.end(); ++it) rhs += *it + " ";
                    try {
                        pres.rules.push_back(
                            {Monomial(e.begin(), e.end()),
                             parse_polynomial(rhs, static_cast<int>(nexp))});
                    } catch (const Error& err) {
                        fail(rd.lineno, err.what());
                    }
                } else if (toks[0] == "integral") {
                    if (toks.size() != 2 + pres.generator_names.size())
                        fail(rd.lineno, "usage: integral <exps> <p/q>");
                    IntVec e = to_coords(toks, 1, pres.generator_names.size(), rd.lineno);
                    try {
                        pres.integrals[Monomial(e.begin(), e.end())] =
                            parse_rational(toks.back());
                    } catch (const Error& err) {
                        fail(rd.lineno, err.what());
                    }
                } else {
                    fail(rd.lineno, "unknown ring field: " + toks[0]);
                }
            }
            try {
                const std::string ring_name = pres.name;
                if (!g.rings.emplace(ring_name, RingPresentation::create(std::move(pres))).second)
                    fail(secline, "duplicate ring name");
            } catch (const Error& e) {
                fail(secline, e.what());
            }
        } else if (section == "flop") {
            if (toks.size() != 2) fail(secline, "usage: flop <name>");
            const std::string name = toks[1];
            FlopGeometry f;
            while (rd.next(toks) && toks[0] != "end") {
                try {
                    if (toks[0] == "lattices" && toks.size() == 3) {
                        f.x = g.lattice(toks[1]);
                        f.xprime = g.lattice(toks[2]);
                    } else if (toks[0] == "maps" && toks.size() == 3) {
                        f.phi = g.map(toks[1]);
                        f.phi_inverse = g.map(toks[2]);
                    } else if (toks[0] == "classes" && toks.size() == 3) {
                        f.c = named_class(g, f.x ? f.x->name : "", toks[1], rd.lineno);
                        f.cprime = named_class(g, f.xprime ? f.xprime->name : "", toks[2], rd.lineno);
                    } else if (toks[0] == "insertion" && toks.size() == 4) {
                        f.insertions[toks[1]] =
                            InsertionClass{toks[1], static_cast<int>(to_int(toks[2], rd.lineno)),
                                           to_int(toks[3], rd.lineno)};
                    } else if (toks[0] == "product" && toks.size() == 5) {
                        f.classical.set(toks[1], toks[2], toks[3], parse_rational(toks[4]));
                    } else {
                        fail(rd.lineno, "unknown flop field: " + toks[0]);
                    }
                } catch (const Error& e) {
                    fail(rd.lineno, e.what());
                }
            }
            try {
                f.validate();
            } catch (const Error& e) {
                fail(secline, e.what());
            }
            if (!g.flops.emplace(name, std::move(f)).second) fail(secline, "duplicate flop name");
        } else if (section == "blowup") {
            if (toks.size() != 2) fail(secline, "usage: blowup <name>");
            const std::string name = toks[1];
            BlowupGeometry b;
            while (rd.next(toks) && toks[0] != "end") {
                try {
                    if (toks[0] == "lattices" && toks.size() == 4) {
                        b.down = g.lattice(toks[1]);
                        b.y1 = g.lattice(toks[2]);
                        b.y2 = g.lattice(toks[3]);
                    } else if (toks[0] == "maps" && toks.size() == 3) {
                        b.p1 = g.map(toks[1]);
                        b.p2 = g.map(toks[2]);
                    } else if (toks[0] == "exceptional" && toks.size() == 3) {
                        b.exc1 = toks[1];
                        b.exc2 = toks[2];
                    } else if (toks[0] == "fibers" && toks.size() == 3) {
                        b.gamma1 = named_class(g, b.y1 ? b.y1->name : "", toks[1], rd.lineno);
                        b.gamma2 = named_class(g, b.y2 ? b.y2->name : "", toks[2], rd.lineno);
                    } else if (toks[0] == "ample_down") {
                        b.ample_down = to_coords(toks, 1, b.down->rank, rd.lineno);
                    } else if (toks[0] == "ample1") {
                        b.ample1 = to_coords(toks, 1, b.y1->rank, rd.lineno);
                    } else if (toks[0] == "ample2") {
                        b.ample2 = to_coords(toks, 1, b.y2->rank, rd.lineno);
                    } else {
                        fail(rd.lineno, "unknown blowup field: " + toks[0]);
                    }
                } catch (const Error& e) {
                    fail(rd.lineno, e.what());
                }
            }
            try {
                b.validate();
            } catch (const Error& e) {
                fail(secline, e.what());
            }
            if (!g.blowups.emplace(name, std::move(b)).second)
                fail(secline, "duplicate blowup name");
        } else if (section == "conifold") {
            if (toks.size() != 2) fail(secline, "usage: conifold <name>");
            const std::string name = toks[1];
            ConifoldGeometry c;
            while (rd.next(toks) && toks[0] != "end") {
                try {
                    if (toks[0] == "lattices" && toks.size() == 4) {
                        c.down = g.lattice(toks[1]);
                        c.ytilde = g.lattice(toks[2]);
                        c.quadric = g.lattice(toks[3]);
                    } else if (toks[0] == "maps" && toks.size() == 3) {
                        c.p1 = g.map(toks[1]);
                        c.p2 = g.map(toks[2]);
                    } else if (toks[0] == "exceptional" && toks.size() == 3) {
                        c.exc1 = toks[1];
                        c.exc2 = toks[2];
                    } else if (toks[0] == "fibers" && toks.size() == 4) {
                        c.gamma21 = named_class(g, c.ytilde ? c.ytilde->name : "", toks[1], rd.lineno);
                        c.gamma22 = named_class(g, c.ytilde ? c.ytilde->name : "", toks[2], rd.lineno);
                        c.quadric_gen =
                            named_class(g, c.quadric ? c.quadric->name : "", toks[3], rd.lineno);
                    } else if (toks[0] == "ample_down") {
                        c.ample_down = to_coords(toks, 1, c.down->rank, rd.lineno);
                    } else if (toks[0] == "ample1") {
                        c.ample1 = to_coords(toks, 1, c.ytilde->rank, rd.lineno);
                    } else if (toks[0] == "ample2") {
                        c.ample2 = to_coords(toks, 1, c.quadric->rank, rd.lineno);
                    } else {
                        fail(rd.lineno, "unknown conifold field: " + toks[0]);
                    }
                } catch (const Error& e) {
                    fail(rd.lineno, e.what());
                }
            }
            try {
                c.validate();
            } catch (const Error& e) {
                fail(secline, e.what());
            }
            if (!g.conifolds.emplace(name, std::move(c)).second)
                fail(secline, "duplicate conifold name");
        } else if (section == "transition") {
            if (toks.size() != 2) fail(secline, "usage: transition <name>");
            const std::string name = toks[1];
            TransitionGeometry t;
            while (rd.next(toks) && toks[0] != "end") {
                try {
                    if (toks[0] == "lattices" && toks.size() == 4) {
                        t.x = g.lattice(toks[1]);
                        t.xsecond = g.lattice(toks[2]);
                        t.ytilde = g.lattice(toks[3]);
                    } else if (toks[0] == "maps" && toks.size() == 4) {
                        t.phi_star = g.map(toks[1]);
                        t.phi_e = g.map(toks[2]);
                        t.proj = g.map(toks[3]);
                    } else if (toks[0] == "class" && toks.size() == 2) {
                        t.c = named_class(g, t.x ? t.x->name : "", toks[1], rd.lineno);
                    } else if (toks[0] == "exceptional" && toks.size() == 2) {
                        t.exc = toks[1];
                    } else if (toks[0] == "fibers" && toks.size() == 3) {
                        t.fiber1 = named_class(g, t.ytilde ? t.ytilde->name : "", toks[1], rd.lineno);
                        t.fiber2 = named_class(g, t.ytilde ? t.ytilde->name : "", toks[2], rd.lineno);
                    } else if (toks[0] == "labelmap" && toks.size() == 3) {
                        t.label_map[toks[1]] = toks[2];
                    } else if (toks[0] == "insertion" && toks.size() == 4) {
                        t.insertions[toks[1]] =
                            InsertionClass{toks[1], static_cast<int>(to_int(toks[2], rd.lineno)),
                                           to_int(toks[3], rd.lineno)};
                    } else if (toks[0] == "product_x" && toks.size() == 5) {
                        t.classical_x.set(toks[1], toks[2], toks[3], parse_rational(toks[4]));
                    } else if (toks[0] == "product_xsecond" && toks.size() == 5) {
                        t.classical_xsecond.set(toks[1], toks[2], toks[3],
                                                parse_rational(toks[4]));
                    } else {
                        fail(rd.lineno, "unknown transition field: " + toks[0]);
                    }
                } catch (const Error& e) {
                    fail(rd.lineno, e.what());
                }
            }
            try {
                t.validate();
            } catch (const Error& e) {
                fail(secline, e.what());
            }
            if (!g.transitions.emplace(name, std::move(t)).second)
                fail(secline, "duplicate transition name");
        } else {
            fail(secline, "unknown section: " + section);
        }
    }
    return g;
}

GeometryFile load_geometry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open geometry file: " + path);
    return parse_geometry(in);
}

std::string serialize_geometry(const GeometryFile& g) {
    std::ostringstream os;
    os << "gwsurgery v1\n";
    for (const auto& [name, lat] : g.lattices) {
        os << "lattice " << name << ' ' << lat->rank << '\n';
        for (size_t i = 0; i < lat->effective_generators.size(); ++i) {
            os << "gen " << lat->generator_names[i];
            for (long long c : lat->effective_generators[i]) os << ' ' << c;
            os << '\n';
        }
        for (const auto& [dname, f] : lat->divisor_pairings) {
            os << "divisor " << dname;
            for (long long c : f) os << ' ' << c;
            os << '\n';
        }
        if (!lat->canonical_pairing.empty()) {
            os << "canonical";
            for (long long c : lat->canonical_pairing) os << ' ' << c;
            os << '\n';
        }
        for (const auto& [cname, v] : lat->named_classes) {
            os << "class " << cname;
            for (long long c : v) os << ' ' << c;
            os << '\n';
        }
        os << "end\n";
    }
    for (const auto& [name, m] : g.maps) {
        os << "map " << name << ' ' << m.source->name << ' ' << m.target->name << '\n';
        for (const auto& row : m.matrix) {
            os << "row";
            for (long long c : row) os << ' ' << c;
            os << '\n';
        }
        os << "end\n";
    }
    for (const auto& [name, ring] : g.rings) {
        os << "ring " << name << ' ' << ring->top_degree << '\n';
        for (size_t i = 0; i < ring->generator_names.size(); ++i)
            os << "rgen " << ring->generator_names[i] << ' ' << ring->degrees[i] << '\n';
        for (const auto& rule : ring->rules) {
            os << "rule";
            for (int e : rule.lhs) os << ' ' << e;
            os << " = " << serialize_polynomial(rule.rhs) << '\n';
        }
        for (const auto& [m, v] : ring->integrals) {
            os << "integral";
            for (int e : m) os << ' ' << e;
            os << ' ' << format_rational(v) << '\n';
        }
        os << "end\n";
    }
    auto find_class_name = [](const LatticePtr& lat, const IntVec& coords) -> std::string {
        for (const auto& [n, v] : lat->named_classes)
            if (v == coords) return n;
        throw Error("class without a registered name on " + lat->name);
    };
    for (const auto& [name, f] : g.flops) {
        os << "flop " << name << '\n';
        os << "lattices " << f.x->name << ' ' << f.xprime->name << '\n';
        os << "maps " << f.phi.name << ' ' << f.phi_inverse.name << '\n';
        os << "classes " << find_class_name(f.x, f.c.coords) << ' '
           << find_class_name(f.xprime, f.cprime.coords) << '\n';
        for (const auto& [label, ins] : f.insertions)
            os << "insertion " << label << ' ' << ins.codimension << ' ' << ins.c_pairing << '\n';
        for (const auto& [key, v] : f.classical.products)
            os << "product " << key[0] << ' ' << key[1] << ' ' << key[2] << ' '
               << format_rational(v) << '\n';
        os << "end\n";
    }
    for (const auto& [name, b] : g.blowups) {
        os << "blowup " << name << '\n';
        os << "lattices " << b.down->name << ' ' << b.y1->name << ' ' << b.y2->name << '\n';
        os << "maps " << b.p1.name << ' ' << b.p2.name << '\n';
        os << "exceptional " << b.exc1 << ' ' << b.exc2 << '\n';
        os << "fibers " << find_class_name(b.y1, b.gamma1.coords) << ' '
           << find_class_name(b.y2, b.gamma2.coords) << '\n';
        os << "ample_down";
        for (long long c : b.ample_down) os << ' ' << c;
        os << "\nample1";
        for (long long c : b.ample1) os << ' ' << c;
        os << "\nample2";
        for (long long c : b.ample2) os << ' ' << c;
        os << "\nend\n";
    }
    for (const auto& [name, c] : g.conifolds) {
        os << "conifold " << name << '\n';
        os << "lattices " << c.down->name << ' ' << c.ytilde->name << ' ' << c.quadric->name
           << '\n';
        os << "maps " << c.p1.name << ' ' << c.p2.name << '\n';
        os << "exceptional " << c.exc1 << ' ' << c.exc2 << '\n';
        os << "fibers " << find_class_name(c.ytilde, c.gamma21.coords) << ' '
           << find_class_name(c.ytilde, c.gamma22.coords) << ' '
           << find_class_name(c.quadric, c.quadric_gen.coords) << '\n';
        os << "ample_down";
        for (long long v : c.ample_down) os << ' ' << v;
        os << "\nample1";
        for (long long v : c.ample1) os << ' ' << v;
        os << "\nample2";
        for (long long v : c.ample2) os << ' ' << v;
        os << "\nend\n";
    }
    for (const auto& [name, t] : g.transitions) {
        os << "transition " << name << '\n';
        os << "lattices " << t.x->name << ' ' << t.xsecond->name << ' ' << t.ytilde->name << '\n';
        os << "maps " << t.phi_star.name << ' ' << t.phi_e.name << ' ' << t.proj.name << '\n';
        os << "class " << find_class_name(t.x, t.c.coords) << '\n';
        os << "exceptional " << t.exc << '\n';
        os << "fibers " << find_class_name(t.ytilde, t.fiber1.coords) << ' '
           << find_class_name(t.ytilde, t.fiber2.coords) << '\n';
        for (const auto& [from, to] : t.label_map) os << "labelmap " << from << ' ' << to << '\n';
        for (const auto& [label, ins] : t.insertions)
            os << "insertion " << label << ' ' << ins.codimension << ' ' << ins.c_pairing << '\n';
        for (const auto& [key, v] : t.classical_x.products)
            os << "product_x " << key[0] << ' ' << key[1] << ' ' << key[2] << ' '
               << format_rational(v) << '\n';
        for (const auto& [key, v] : t.classical_xsecond.products)
            os << "product_xsecond " << key[0] << ' ' << key[1] << ' ' << key[2] << ' '
               << format_rational(v) << '\n';
        os << "end\n";
    }
    return os.str();
}

GWTable parse_gwtable(std::istream& in, const GeometryFile& g) {
    LineReader rd{in};
    std::vector<std::string> toks;
    if (!rd.next(toks) || toks.size() != 2 || toks[0] != "gwsurgery-table" || toks[1] != "v1")
        fail(rd.lineno == 0 ? 1 : rd.lineno, "expected header 'gwsurgery-table v1'");
    if (!rd.next(toks) || toks.size() != 2 || toks[0] != "lattice")
        fail(rd.lineno, "expected 'lattice <name>'");
    LatticePtr lat;
    try {
        lat = g.lattice(toks[1]);
    } catch (const Error& e) {
        fail(rd.lineno, e.what());
    }
    GWTable table = GWTable::create(lat);
    while (rd.next(toks)) {
        if (toks[0] == "mcrule") {
            if (toks.size() != 2 || (toks[1] != "on" && toks[1] != "off"))
                fail(rd.lineno, "usage: mcrule on|off");
            table.multiple_cover_rule = toks[1] == "on";
            continue;
        }
        if (toks[0] != "entry") fail(rd.lineno, "unknown table line: " + toks[0]);
        if (toks.size() < 3) fail(rd.lineno, "usage: entry g n <coords> <labels> <p/q>");
        const int eg = static_cast<int>(to_int(toks[1], rd.lineno));
        const int en = static_cast<int>(to_int(toks[2], rd.lineno));
        const size_t expected = 3 + static_cast<size_t>(lat->rank) + en + 1;
        if (toks.size() != expected)
            fail(rd.lineno, "entry token count mismatch (expected " + std::to_string(expected) + ")");
        IntVec coords = to_coords(toks, 3, lat->rank, rd.lineno);
        std::vector<std::string> labels(toks.begin() + 3 + lat->rank, toks.end() - 1);
        try {
            table.set(eg, en, lat->cls(coords), std::move(labels), parse_rational(toks.back()));
        } catch (const Error& e) {
            fail(rd.lineno, e.what());
        }
    }
    return table;
}

GWTable load_gwtable(const std::string& path, const GeometryFile& g) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open table file: " + path);
    return parse_gwtable(in, g);
}

std::string serialize_gwtable(const GWTable& t, const std::string& provenance) {
    std::ostringstream os;
    os << "gwsurgery-table v1\n";
    if (!provenance.empty()) os << "# derived-by: " << provenance << '\n';
    os << "lattice " << t.lattice->name << '\n';
    os << "mcrule " << (t.multiple_cover_rule ? "on" : "off") << '\n';
    for (const auto& [key, v] : t.entries) {
        os << "entry " << key.g << ' ' << key.n;
        for (long long c : key.beta.coords) os << ' ' << c;
        for (const auto& lab : key.insertions) os << ' ' << lab;
        os << ' ' << format_rational(v) << '\n';
    }
    return os.str();
}

RelativeGWTable parse_relative_table(std::istream& in) {
    LineReader rd{in};
    std::vector<std::string> toks;
    if (!rd.next(toks) || toks.size() != 2 || toks[0] != "gwsurgery-reltable" || toks[1] != "v1")
        fail(rd.lineno == 0 ? 1 : rd.lineno, "expected header 'gwsurgery-reltable v1'");
    RelativeGWTable t;
    while (rd.next(toks)) {
        if (toks[0] != "rel" || toks.size() < 3)
            fail(rd.lineno, "usage: rel <graph-key> <labels...> <p/q>");
        std::vector<std::string> labels(toks.begin() + 2, toks.end() - 1);
        try {
            t.set(toks[1], std::move(labels), parse_rational(toks.back()));
        } catch (const Error& e) {
            fail(rd.lineno, e.what());
        }
    }
    return t;
}

RelativeGWTable load_relative_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open relative table file: " + path);
    return parse_relative_table(in);
}

std::string serialize_relative_table(const RelativeGWTable& t) {
    std::ostringstream os;
    os << "gwsurgery-reltable v1\n";
    for (const auto& [key, v] : t.entries) {
        os << "rel " << key.first;
        for (const auto& lab : key.second) os << ' ' << lab;
        os << ' ' << format_rational(v) << '\n';
    }
    return os.str();
}

}  // namespace gwsurgery
