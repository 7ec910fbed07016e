#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "gwsurgery/geometry_io.hpp"

using namespace gwsurgery;

namespace {

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + out_path);
    out << text;
}

IntVec parse_coords_arg(const std::string& s) {
    IntVec v;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) v.push_back(std::stoll(tok));
    if (v.empty()) throw Error("empty coordinate list");
    return v;
}

std::vector<std::string> parse_labels_arg(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) v.push_back(tok);
    return v;
}

int cmd_enumerate(const std::string& geometry_path, const std::string& surgery, int g, int n,
                  const std::string& beta_arg, const EnumerationCaps& caps,
                  const std::string& out_path) {
    GeometryFile geo = load_geometry(geometry_path);
    std::vector<TripleRecord> triples;
    LatticePtr down;
    std::string picked = surgery;
    if (picked.empty()) {
        if (geo.blowups.size() + geo.conifolds.size() != 1)
            throw Error("several surgeries in the file; pick one with --surgery");
        picked = geo.blowups.empty() ? geo.conifolds.begin()->first : geo.blowups.begin()->first;
    }
    if (geo.blowups.count(picked)) {
        const auto& b = geo.blowups.at(picked);
        down = b.down;
        triples = enumerate_blowup_triples(g, n, down->cls(parse_coords_arg(beta_arg)), b, caps);
    } else if (geo.conifolds.count(picked)) {
        const auto& c = geo.conifolds.at(picked);
        down = c.down;
        triples = enumerate_conifold_triples(g, n, down->cls(parse_coords_arg(beta_arg)), c, caps);
    } else {
        throw Error("no blowup or conifold named " + picked);
    }
    std::ostringstream os;
    os << "# triples: " << triples.size() << '\n';
    for (const auto& rec : triples)
        os << rec.key << " genus=" << rec.genus << " m=" << rec.multiplicity
           << " eq=" << rec.eq << '\n';
    write_output(out_path, os.str());
    return 0;
}

int cmd_transform_flop(const std::string& geometry_path, const std::string& table_path,
                       const std::string& flop_name, const std::string& out_path) {
    GeometryFile geo = load_geometry(geometry_path);
    std::string picked = flop_name;
    if (picked.empty()) {
        if (geo.flops.size() != 1) throw Error("several flops in the file; pick one with --flop");
        picked = geo.flops.begin()->first;
    }
    if (!geo.flops.count(picked)) throw Error("no flop named " + picked);
    GWTable table = load_gwtable(table_path, geo);
    GWTable out = flop_transform(table, geo.flops.at(picked));
    write_output(out_path, serialize_gwtable(out, "flop-pushforward"));
    return 0;
}

int cmd_transform_transition(const std::string& geometry_path, const std::string& table_path,
                             const std::string& transition_name, const std::string& out_path) {
    GeometryFile geo = load_geometry(geometry_path);
    std::string picked = transition_name;
    if (picked.empty()) {
        if (geo.transitions.size() != 1)
            throw Error("several transitions in the file; pick one with --transition");
        picked = geo.transitions.begin()->first;
    }
    if (!geo.transitions.count(picked)) throw Error("no transition named " + picked);
    const TransitionGeometry& t = geo.transitions.at(picked);
    GWTable table = load_gwtable(table_path, geo);
    if (table.lattice != t.x) throw Error("table is not on the transition source lattice");

    // inverse of the label correspondence, to name transported insertions
    std::map<std::string, std::string> inverse_labels;
    for (const auto& [from, to] : t.label_map) {
        if (!inverse_labels.emplace(to, from).second)
            throw Error("label correspondence is not invertible at " + to);
    }

    GWTable out = GWTable::create(t.xsecond);
    std::set<GWKey> targets;
    for (const auto& [key, value] : table.entries) {
        (void)value;
        CurveClass image = t.phi_e.apply(key.beta);
        if (image.is_zero()) {
            std::cerr << "skipped: entry maps to the zero class (g=" << key.g << ", n=" << key.n
                      << ")\n";
            continue;
        }
        std::vector<std::string> labels;
        bool ok = true;
        for (const auto& lab : key.insertions) {
            auto it = inverse_labels.find(lab);
            if (it == inverse_labels.end()) {
                ok = false;
                break;
            }
            labels.push_back(it->second);
        }
        if (!ok) {
            std::cerr << "skipped: insertion without a transported image\n";
            continue;
        }
        std::sort(labels.begin(), labels.end());
        targets.insert(GWKey{key.g, key.n, image, labels});
    }
    for (const auto& key : targets) {
        Rational v = transition_transform(table, key.g, key.n, key.beta, key.insertions, t);
        out.set(key.g, key.n, key.beta, key.insertions, v);
    }
    write_output(out_path, serialize_gwtable(out, "transition-sum"));
    return 0;
}

int cmd_ring_nf(const std::string& geometry_path, const std::string& ring_name,
                const std::string& expr, const std::string& out_path) {
    GeometryFile geo = load_geometry(geometry_path);
    std::string picked = ring_name;
    if (picked.empty()) {
        if (geo.rings.size() != 1) throw Error("several rings in the file; pick one with --ring");
        picked = geo.rings.begin()->first;
    }
    RingPtr ring = geo.ring(picked);
    Polynomial p = parse_polynomial(expr, static_cast<int>(ring->generator_names.size()));
    RingElement nf = normal_form(ring, p);
    std::ostringstream os;
    os << serialize_polynomial(nf.terms) << '\n';
    os << "# " << format_element(nf) << '\n';
    write_output(out_path, os.str());
    return 0;
}

int cmd_series_truncate(const std::string& geometry_path, const std::string& lattice_name,
                        const std::string& ample_arg, long long cutoff, const std::string& expr,
                        const std::string& out_path) {
    GeometryFile geo = load_geometry(geometry_path);
    LatticePtr lat = geo.lattice(lattice_name);
    NovikovElement f = parse_novikov(expr, lat);
    auto terms = truncate(f, parse_coords_arg(ample_arg), cutoff);
    std::ostringstream os;
    for (const auto& [b, c] : terms) {
        for (size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
        os << ' ' << format_rational(c) << '\n';
    }
    write_output(out_path, os.str());
    return 0;
}

int cmd_check(const std::string& geometry_path, const std::string& table_path,
              const std::string& table_prime_path, const std::string& table_second_path,
              int g, int n, const std::string& beta_arg, const EnumerationCaps& caps,
              long long cutoff, const std::string& out_path) {
    GeometryFile geo = load_geometry(geometry_path);
    std::ostringstream os;
    bool all_pass = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        os << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) os << "  " << detail;
        os << '\n';
        if (!ok) all_pass = false;
    };

    for (const auto& [name, flop] : geo.flops) {
        // multiple-cover truncation consistency at M = 50
        {
            NovikovElement tail = multiple_cover_tail(1, 1, 1, flop.c);
            IntVec ample(flop.x->rank, 1);
            auto got = truncate(tail, ample, 50 * apply_functional(ample, flop.c.coords));
            bool ok = true;
            for (long long m = 1; m <= 50; ++m) {
                auto it = got.find((flop.c * m).coords);
                Rational expected = Rational(m) * m * m / (Rational(m) * m * m);
                if (it == got.end() || it->second != expected) ok = false;
            }
            report("multiple-cover-truncation[" + name + "]", ok);
        }
        if (table_path.empty()) continue;
        GWTable table = load_gwtable(table_path, geo);
        if (table.lattice != flop.x) continue;
        GWTable table_prime = table_prime_path.empty()
                                  ? flop_transform(table, flop)
                                  : load_gwtable(table_prime_path, geo);
        report("flop-involution[" + name + "]", flop_involution_check(table, flop));
        for (const auto& [key, v] : flop.classical.products) {
            (void)v;
            try {
                auto rep = wallcrossing_check(table, table_prime, flop, key[0], key[1], key[2]);
                report("wall-crossing[" + name + ":" + key[0] + key[1] + key[2] + "]",
                       rep.isomorphic,
                       "discrepancy=" + format_rational(rep.classical_discrepancy));
            } catch (const Error& e) {
                report("wall-crossing[" + name + "]", false, e.what());
            }
        }
    }

    for (const auto& [name, t] : geo.transitions) {
        if (table_path.empty()) break;
        GWTable table = load_gwtable(table_path, geo);
        if (table.lattice != t.x) continue;
        // fiber-sum consistency on the named class, when present
        if (t.xsecond->named_classes.count("beta")) {
            CurveClass beta = t.xsecond->named("beta");
            try {
                Rational direct = transition_transform(table, g, n, beta, {}, t);
                Rational fiber = transition_transform_fiber_sum(table, g, n, beta, {}, t, cutoff);
                report("transition-fiber-sum[" + name + "]", direct == fiber,
                       format_rational(direct) + " vs " + format_rational(fiber));
            } catch (const Error& e) {
                report("transition-fiber-sum[" + name + "]", false, e.what());
            }
        }
        // 3-point comparison when an X'' table is supplied
        if (!table_second_path.empty()) {
            GWTable table_second = load_gwtable(table_second_path, geo);
            for (const auto& [key, v] : t.classical_xsecond.products) {
                (void)v;
                try {
                    auto rep = transition_threepoint_check(table, table_second, t, key[0],
                                                           key[1], key[2]);
                    report("transition-3pt[" + name + ":" + key[0] + key[1] + key[2] + "]",
                           rep.equal,
                           format_novikov(rep.side_x) + " vs " + format_novikov(rep.side_xsecond));
                } catch (const Error& e) {
                    report("transition-3pt[" + name + "]", false, e.what());
                }
            }
        }
    }

    auto vdim_over = [&](const std::string& name, const std::vector<TripleRecord>& triples,
                         const IntVec& k_down, const LatticeMap& p1, const LatticeMap& p2,
                         const std::string& exc1, const std::string& exc2) {
        bool ok = true;
        long long checked = 0;
        for (const auto& rec : triples) {
            auto rep = vdim_additivity_check(rec.triple, 3, 2, k_down, p1, p2, exc1, exc2);
            if (!rep.holds()) ok = false;
            ++checked;
        }
        report("vdim-additivity[" + name + "]", ok, std::to_string(checked) + " triples");
    };
    for (const auto& [name, b] : geo.blowups) {
        if (b.down->canonical_pairing.empty()) continue;
        CurveClass beta = beta_arg.empty() && b.down->named_classes.count("beta")
                              ? b.down->named("beta")
                              : (beta_arg.empty() ? CurveClass{}
                                                  : b.down->cls(parse_coords_arg(beta_arg)));
        if (!beta.lattice || !is_effective(beta)) continue;
        vdim_over(name, enumerate_blowup_triples(g, n, beta, b, caps),
                  b.down->canonical_pairing, b.p1, b.p2, b.exc1, b.exc2);
    }
    for (const auto& [name, c] : geo.conifolds) {
        if (c.down->canonical_pairing.empty()) continue;
        CurveClass beta = beta_arg.empty() && c.down->named_classes.count("beta")
                              ? c.down->named("beta")
                              : (beta_arg.empty() ? CurveClass{}
                                                  : c.down->cls(parse_coords_arg(beta_arg)));
        if (!beta.lattice || !is_effective(beta)) continue;
        vdim_over(name, enumerate_conifold_triples(g, n, beta, c, caps),
                  c.down->canonical_pairing, c.p1, c.p2, c.exc1, c.exc2);
    }

    write_output(out_path, os.str());
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact curve-class surgery calculator"};
    app.require_subcommand(1);

    std::string geometry, table, table_prime, table_second, out, surgery, beta, labels, expr;
    std::string lattice_name, ample = "1";
    int g = 0, n = 0;
    long long cutoff = 10;
    EnumerationCaps caps;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--geometry", geometry, "geometry file")->required();
        sub->add_option("--out", out, "output file (default stdout)");
    };

    auto* enumerate = app.add_subcommand("enumerate", "list admissible triples");
    add_common(enumerate);
    enumerate->add_option("--surgery", surgery, "blowup or conifold name");
    enumerate->add_option("--g", g, "genus");
    enumerate->add_option("--n", n, "marked points");
    enumerate->add_option("--beta", beta, "class coordinates a,b,...")->required();
    enumerate->add_option("--max-vertices", caps.max_vertices);
    enumerate->add_option("--max-genus", caps.max_genus);
    enumerate->add_option("--max-weight", caps.max_weight);

    auto* tflop = app.add_subcommand("transform-flop", "push a GW table through the flop");
    add_common(tflop);
    tflop->add_option("--table", table, "GW table file")->required();
    tflop->add_option("--flop", surgery, "flop name");

    auto* ttrans = app.add_subcommand("transform-transition", "sum a GW table down a transition");
    add_common(ttrans);
    ttrans->add_option("--table", table, "GW table file")->required();
    ttrans->add_option("--transition", surgery, "transition name");

    auto* check = app.add_subcommand("check", "verify the surgery identities");
    add_common(check);
    check->add_option("--table", table, "GW table file (source side)");
    check->add_option("--table-prime", table_prime, "GW table on the flopped side");
    check->add_option("--table-second", table_second, "GW table on the transition side");
    check->add_option("--g", g, "genus for enumeration checks");
    check->add_option("--n", n, "marked points for enumeration checks");
    check->add_option("--beta", beta, "class coordinates for enumeration checks");
    check->add_option("--max-vertices", caps.max_vertices);
    check->add_option("--max-genus", caps.max_genus);
    check->add_option("--max-weight", caps.max_weight);
    check->add_option("--cutoff", cutoff, "fiber-sum cutoff");

    auto* ringnf = app.add_subcommand("ring-nf", "normal form in a quotient ring");
    add_common(ringnf);
    ringnf->add_option("--ring", surgery, "ring name");
    ringnf->add_option("expr", expr, "polynomial, terms p/q:e1,e2,...")->required();

    auto* trunc = app.add_subcommand("series-truncate", "expand a series up to a degree");
    add_common(trunc);
    trunc->add_option("--lattice", lattice_name, "lattice name")->required();
    trunc->add_option("--ample", ample, "ample functional coordinates");
    trunc->add_option("--cutoff", cutoff, "degree cutoff");
    trunc->add_option("expr", expr, "series, terms p/q:b... or p/q:b.../g...")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (enumerate->parsed())
            return cmd_enumerate(geometry, surgery, g, n, beta, caps, out);
        if (tflop->parsed()) return cmd_transform_flop(geometry, table, surgery, out);
        if (ttrans->parsed()) return cmd_transform_transition(geometry, table, surgery, out);
        if (check->parsed())
            return cmd_check(geometry, table, table_prime, table_second, g, n, beta, caps,
                             cutoff, out);
        if (ringnf->parsed()) return cmd_ring_nf(geometry, surgery, expr, out);
        if (trunc->parsed())
            return cmd_series_truncate(geometry, lattice_name, ample, cutoff, expr, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
