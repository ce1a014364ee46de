// grk: command-line front end.
//
// Exit codes: 0 ok, 1 negative answer, 2 contract violation or bad input,
// 3 graph outside the class, 4 search budget exhausted.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "grk/grk.hpp"
#include "grk/io.hpp"

namespace {

using namespace grk;
using io::json;

enum Exit { kOk = 0, kNegative = 1, kContract = 2, kNotInClass = 3, kBudget = 4 };

struct Options {
    std::string format = "text";
    std::size_t budget = 64;
    std::optional<std::uint64_t> seed;
    bool symbolic = false;
    bool report = false;
    std::size_t rounds = 4;
};

bool as_json(const Options& o) { return o.format == "json"; }

void emit(const Options& o, const json& j, const std::string& text) {
    if (as_json(o)) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

template <class Fn>
int with_base(const io::FieldDescriptor& d, Fn&& fn) {
    if (d.base == "rational") return fn(rationals());
    if (d.base == "gaussian") return fn(gaussian_rationals());
    return fn(prime_field(d.modulus));
}

io::FieldDescriptor field_of(const json& j) {
    return io::field_from_json(j.contains("field") ? j.at("field") : json::object());
}

std::string letters(std::size_t n) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + n % 26));
        n /= 26;
    } while (n-- > 0);
    return s;
}

/** a, b, c, ... over the blocks of R in row-major order. */
template <class F>
std::vector<std::vector<std::vector<std::string>>> generic_labels(const MatricialAlgebra<F>& R) {
    std::vector<std::vector<std::vector<std::string>>> lab;
    std::size_t n = 0;
    for (std::size_t i = 0; i < R.num_blocks(); ++i) {
        lab.emplace_back(R.block_size(i), std::vector<std::string>(R.block_size(i)));
        for (auto& row : lab.back())
            for (auto& x : row) x = letters(n++);
    }
    return lab;
}

// ---------------------------------------------------------------------------
// Graph verbs

int cmd_check(const Options& o, const std::string& path) {
    const auto g = io::load_graph(path);
    const auto r = classify_graph(g);
    std::string text = std::string(r.in_class ? "in class" : "not in class") + ": " + std::to_string(r.sinks.size()) +
                       " sinks, " + std::to_string(r.cycles.size()) + " cycles\n";
    for (auto& [v, e] : r.exits)
        text += "  exit '" + g.edge(e).name + "' at cycle vertex '" + g.vertex_name(v) + "'\n";
    emit(o, io::class_report_to_json(g, r), text);
    return r.in_class ? kOk : kNotInClass;
}

int cmd_decompose(const Options& o, const std::string& path) {
    const auto g = io::load_graph(path);
    const auto st = structure_decomposition(g, rationals());
    std::string text = st.to_string() + "\n";
    for (std::size_t i = 0; i < st.data.sinks.size(); ++i) {
        text += "  sink " + g.vertex_name(st.data.sinks[i].vertex) + ":";
        for (auto& p : st.data.sinks[i].paths) text += " " + path_to_string(g, p);
        text += "\n";
    }
    for (auto& c : st.data.cycles) {
        text += "  cycle at " + g.vertex_name(c.cycle.base) + " (length " + std::to_string(c.cycle.length()) + "):";
        for (auto& p : c.paths) text += " " + path_to_string(g, p);
        text += "\n";
    }
    emit(o, io::structure_to_json(g, st), text);
    return kOk;
}

int cmd_invariant(const Options& o, const std::string& path) {
    const auto inv = lpa_invariant(io::load_graph(path));
    std::string text;
    for (auto& s : inv.sinks) {
        text += "sink {";
        for (std::size_t k = 0; k < s.size(); ++k) text += (k ? "," : "") + std::to_string(s[k]);
        text += "}\n";
    }
    for (auto& [n, s] : inv.cycles) {
        text += "cycle n=" + std::to_string(n) + " {";
        for (std::size_t k = 0; k < s.size(); ++k) text += (k ? "," : "") + std::to_string(s[k]);
        text += "}\n";
    }
    emit(o, io::invariant_to_json(inv), text);
    return kOk;
}

int cmd_decide(const Options& o, const std::string& p1, const std::string& p2) {
    const auto d = decide_graded_iso(io::load_graph(p1), io::load_graph(p2));
    std::string text;
    if (d.isomorphic) {
        text = "graded *-isomorphic\n";
        for (auto& m : d.sinks)
            text += "  sink " + std::to_string(m.first + 1) + " -> " + std::to_string(m.second + 1) +
                    " shift " + std::to_string(m.shift) + "\n";
        for (auto& m : d.cycles)
            text += "  cycle " + std::to_string(m.first + 1) + " -> " + std::to_string(m.second + 1) +
                    " rotation " + std::to_string(m.rotation) + "\n";
    } else {
        text = "not isomorphic: " + d.obstruction + "\n";
    }
    emit(o, io::decision_to_json(d), text);
    return d.isomorphic ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// Algebra verbs

int cmd_synth(const Options& o, const std::string& path) {
    const auto j = io::load_json(path);
    return with_base(field_of(j), [&](auto base) {
        using F = typename decltype(base)::scalar_type;
        auto A = io::make_graded_field(field_of(j), base);
        const auto R = io::algebra_from_json<F>(io::need(j, "source"), A);
        const auto S = io::algebra_from_json<F>(io::need(j, "target"), A);
        const auto f = io::khom_from_json(io::need(j, "khom"), k0_module(R), k0_module(S));
        SynthesisOptions opt;
        opt.seed = o.seed;
        const auto spec = synthesize(f, R, S, opt);
        const auto h = evaluate_hom(spec);
        auto out = io::spec_to_json(spec, f);
        std::string text = "synthesized " + R.to_string() + " -> " + S.to_string() +
                           (spec.is_unital() ? " (unital)\n" : " (not unital)\n");
        for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
            text += "  block " + std::to_string(b + 1) + ": rho = (";
            for (std::size_t x = 0; x < spec.blocks[b].rho.size(); ++x)
                text += (x ? "," : "") + std::to_string(spec.blocks[b].rho[x] + 1);
            text += "), padding " + std::to_string(spec.blocks[b].padding) + "\n";
        }
        if (o.report) {
            const auto rep = dimension_report(f, R, S);
            out["dimension_report"] = io::dimension_report_to_json(rep);
            text += std::string("  coset equations ") + (rep.coset_equations ? "hold" : "fail") +
                    ", dimension formulas " + (rep.dimension_formulas ? "hold" : "fail") +
                    ", pre-dimension formulas " + (rep.predimension ? "hold" : "fail") + "\n";
        }
        if (o.symbolic) {
            const auto img = symbolic_image(h, generic_labels(R));
            json mats = json::array();
            for (std::size_t b = 0; b < img.size(); ++b) {
                const auto m = format_symbolic(img[b], S.block_size(b));
                mats.push_back(m);
                text += "block " + std::to_string(b + 1) + ":\n" + m;
            }
            out["symbolic"] = mats;
        }
        emit(o, out, text);
        return kOk;
    });
}

int cmd_verify_hom(const Options& o, const std::string& path) {
    const auto j = io::load_json(path);
    return with_base(field_of(j), [&](auto base) {
        auto A = io::make_graded_field(field_of(j), base);
        const auto h = io::hom_from_json(io::need(j, "hom"), A);
        const auto rep = verify_graded_star_hom(h, j.value("unital", false));
        auto out = io::hom_report_to_json(rep);
        std::string text = rep.ok() ? "ok\n" : "violations:\n";
        for (auto& v : rep.violations) text += "  " + v + "\n";
        if (rep.ok()) {
            const auto k = k0_of_hom(h);
            out["k0"] = io::khom_to_json(k);
            text += "K0 = " + k.to_string() + "\n";
        }
        emit(o, out, text);
        return rep.ok() ? kOk : kNegative;
    });
}

int cmd_intertwiner(const Options& o, const std::string& path) {
    const auto j = io::load_json(path);
    return with_base(field_of(j), [&](auto base) {
        auto A = io::make_graded_field(field_of(j), base);
        const auto phi = io::hom_from_json(io::need(j, "phi"), A);
        const auto psi = io::hom_from_json(io::need(j, "psi"), A);
        const auto x = build_intertwiner(phi, psi);
        const auto u = unitary_completion(x, phi, psi);
        const bool ok = is_unitary(u, phi.target) && verify_conjugation(u, phi, psi);
        json out = {{"unitary", io::homogeneous_to_json(u)}, {"verified", ok}};
        std::string text = std::string(ok ? "unitary found" : "verification failed") + ", " +
                           std::to_string(u.nnz()) + " nonzero entries\n" + io::homogeneous_to_json(u).dump() + "\n";
        emit(o, out, text);
        return ok ? kOk : kNegative;
    });
}

int cmd_intertwine_chains(const Options& o, const std::string& path) {
    const auto j = io::load_json(path);
    const auto fd = field_of(j);
    return with_base(fd, [&](auto base) {
        using F = typename decltype(base)::scalar_type;
        ChainPtr<F> R = io::chain_from_json(io::need(j, "R"), fd, base);
        ChainPtr<F> S = io::chain_from_json(io::need(j, "S"), fd, base);
        const auto f = io::stage_khom_from_json<F>(j.value("forward", json{{"kind", "identity"}}), R, S);
        const auto g = io::stage_khom_from_json<F>(j.value("backward", json{{"kind", "identity"}}), S, R);
        const auto rounds = j.value("rounds", o.rounds);
        const auto t = elliott_intertwine(*R, *S, f, g, rounds, StageBudget{o.budget});
        const auto rel = verify_transcript(t, *R, *S, f, g);
        const bool ok = std::all_of(rel.begin(), rel.end(), [](auto& r) { return r.all(); });
        std::string text = "transcript of depth " + std::to_string(t.depth()) + (ok ? ", all relations hold\n" : ", relation failure\n");
        for (std::size_t i = 0; i < rel.size(); ++i)
            text += "  i=" + std::to_string(i + 1) + " n=" + std::to_string(t.n[i] + 1) + " m=" +
                    std::to_string(t.m[i] + 1) + " (1)" + (rel[i].sigma_rho ? "ok" : "FAIL") + " (2)" +
                    (rel[i].rho_sigma ? "ok" : "FAIL") + " (3)" + (rel[i].k_rho ? "ok" : "FAIL") + " (4)" +
                    (rel[i].k_sigma ? "ok" : "FAIL") + "\n";
        emit(o, io::transcript_to_json(t, rel), text);
        return ok ? kOk : kNegative;
    });
}

OmegaShiftMultiset omega_preset(const std::string& name) {
    if (name == "line") return OmegaShiftMultiset::line();
    if (name == "clock") return OmegaShiftMultiset::clock();
    throw ParseError("unknown shift preset '" + name + "' (expected line or clock)");
}

/** {"algebra"} -> K0 module; {"source","target","khom"} -> map properties;
 *  {"omega": [A, B]} -> contractive-iso certificate. */
int cmd_k0(const Options& o, const std::string& path) {
    const auto j = io::load_json(path);
    if (j.contains("omega")) {
        const auto names = io::get_as<std::vector<std::string>>(j.at("omega"), "omega");
        if (names.size() != 2) throw ParseError("'omega' needs two preset names");
        const auto c = certify_no_contractive_iso(omega_preset(names[0]), omega_preset(names[1]));
        std::string text = c.no_contractive_iso ? "no contractive isomorphism\n" : "not refuted\n";
        for (auto& l : c.forward.lines) text += "  " + l + "\n";
        for (auto& l : c.backward.lines) text += "  " + l + "\n";
        emit(o, io::omega_certificate_to_json(c), text);
        return c.no_contractive_iso ? kNegative : kOk;
    }
    return with_base(field_of(j), [&](auto base) {
        using F = typename decltype(base)::scalar_type;
        auto A = io::make_graded_field(field_of(j), base);
        if (j.contains("algebra")) {
            const auto R = io::algebra_from_json<F>(j.at("algebra"), A);
            const auto m = k0_module(R);
            auto out = io::k0_module_to_json(m);
            std::string text = "K0 of " + R.to_string() + ": rank " + std::to_string(m.rank) + " over Z[" +
                               m.space->to_string() + "]\nunit = (";
            for (std::size_t i = 0; i < m.rank; ++i) text += (i ? ", " : "") + io::ring_elem_to_json(m.unit.coords[i]).template get<std::string>();
            text += ")\n";
            if (j.contains("projection")) {
                const auto c = class_of_projection(R, io::homogeneous_from_json(j.at("projection"), R));
                out["class"] = io::k0_elem_to_json(c);
                text += "class = " + io::k0_elem_to_json(c).dump() + "\n";
            }
            emit(o, out, text);
            return kOk;
        }
        const auto R = io::algebra_from_json<F>(io::need(j, "source"), A);
        const auto S = io::algebra_from_json<F>(io::need(j, "target"), A);
        const auto f = io::khom_from_json(io::need(j, "khom"), k0_module(R), k0_module(S));
        const auto rep = dimension_report(f, R, S);
        json out = {{"order_preserving", is_order_preserving(f)},
                    {"contractive", is_contractive(f)},
                    {"unit_preserving", is_unit_preserving(f)},
                    {"image_of_unit", io::k0_elem_to_json(f.apply(unit_class(R)))},
                    {"target_unit", io::k0_elem_to_json(unit_class(S))},
                    {"dimension_report", io::dimension_report_to_json(rep)}};
        std::string text = std::string("order-preserving: ") + (is_order_preserving(f) ? "yes" : "no") +
                           "\ncontractive: " + (is_contractive(f) ? "yes" : "no") +
                           "\nunit-preserving: " + (is_unit_preserving(f) ? "yes" : "no") + "\n";
        emit(o, out, text);
        return is_contractive(f) ? kOk : kNegative;
    });
}

int run_guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const NotInClass& e) {
        std::cerr << "not in class: " << e.what() << "\n";
        return kNotInClass;
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kBudget;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kContract;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kContract;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graded matricial *-algebras, graded K0 and Leavitt path algebras of no-exit graphs"};
    app.require_subcommand(1);
    Options opt;
    std::size_t seed = 0;
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--budget", opt.budget, "Largest stage index searched in chain operations");
    auto* seed_opt = app.add_option("--seed", seed, "Randomize canonical choices in synthesis");

    int code = kOk;
    std::string a, b;

    auto graph_verbs = [&](CLI::App* parent) {
        auto* check = parent->add_subcommand("check", "Decide whether a graph is no-exit (in class)");
        check->add_option("graph", a, "Graph file")->required();
        check->callback([&] { code = run_guarded([&] { return cmd_check(opt, a); }); });
        auto* dec = parent->add_subcommand("decompose", "Graded matricial decomposition of L_K(E)");
        dec->add_option("graph", a, "Graph file")->required();
        dec->callback([&] { code = run_guarded([&] { return cmd_decompose(opt, a); }); });
        auto* inv = parent->add_subcommand("invariant", "Path-length multisets forming the K0 invariant");
        inv->add_option("graph", a, "Graph file")->required();
        inv->callback([&] { code = run_guarded([&] { return cmd_invariant(opt, a); }); });
        auto* iso = parent->add_subcommand("decide-iso", "Decide graded *-isomorphism of two Leavitt path algebras");
        iso->add_option("first", a, "Graph file")->required();
        iso->add_option("second", b, "Graph file")->required();
        iso->callback([&] { code = run_guarded([&] { return cmd_decide(opt, a, b); }); });
    };
    graph_verbs(&app);
    auto* lpa = app.add_subcommand("lpa", "Leavitt path algebra verbs");
    lpa->require_subcommand(1);
    graph_verbs(lpa);

    auto* synth = app.add_subcommand("synth", "Synthesize a graded *-homomorphism from a contractive K-hom");
    synth->add_option("problem", a, "JSON with field, source, target and khom")->required();
    synth->add_flag("--symbolic", opt.symbolic, "Print the image of a generic element");
    synth->add_flag("--report", opt.report, "Include the dimension report");
    synth->callback([&] {
        if (seed_opt->count()) opt.seed = seed;
        code = run_guarded([&] { return cmd_synth(opt, a); });
    });

    auto* verify = app.add_subcommand("verify-hom", "Check that a map is a graded *-homomorphism");
    verify->add_option("file", a, "JSON with field and hom")->required();
    verify->callback([&] { code = run_guarded([&] { return cmd_verify_hom(opt, a); }); });

    auto* inter = app.add_subcommand("intertwiner", "Degree-zero unitary u with phi = Ad(u) psi");
    inter->add_option("file", a, "JSON with field, phi and psi")->required();
    inter->callback([&] { code = run_guarded([&] { return cmd_intertwiner(opt, a); }); });

    auto* chains = app.add_subcommand("intertwine-chains", "Back-and-forth intertwining of two chains");
    chains->add_option("file", a, "JSON with R, S, forward, backward, rounds")->required();
    chains->add_option("--rounds", opt.rounds, "Depth when the file does not set it");
    chains->callback([&] { code = run_guarded([&] { return cmd_intertwine_chains(opt, a); }); });

    auto* k0 = app.add_subcommand("k0", "K0 module, K-hom properties or shift-multiset certificates");
    k0->add_option("file", a, "JSON input")->required();
    k0->callback([&] { code = run_guarded([&] { return cmd_k0(opt, a); }); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? kOk : kContract;
    }
    return code;
}
