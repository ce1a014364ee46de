// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "grk/grk.hpp"
#include "oracles.hpp"

using namespace grk;

namespace {

using Alg = MatricialAlgebra<Rational>;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;
};

#define REQUIRE(cond, msg)                   \
    do {                                     \
        if (!(cond)) return Outcome{false, msg}; \
    } while (0)

const std::vector<std::vector<std::vector<std::string>>> kLabels{{{"a", "b"}, {"c", "d"}}, {{"e"}}};

Outcome ungraded_example() {
    const auto A = make_field(rationals(), FGAbelianGroup::trivial(), {});
    const Alg R(A, {{{}, {}}, {{}}});
    const Alg S(A, {std::vector<Vec>(5), std::vector<Vec>(4)});
    auto c = [&](std::int64_t n) { return GroupRingElem::constant(A->support, n); };
    const auto f = make_khom(k0_module(R), k0_module(S), {{c(2), c(1)}, {c(0), c(3)}});
    const auto spec = synthesize(f, R, S);
    const auto h = evaluate_hom(spec);
    const auto img = symbolic_image(h, kLabels);
    REQUIRE(format_symbolic(img[0], 5) == "[a 0 b 0 0]\n[0 a 0 b 0]\n[c 0 d 0 0]\n[0 c 0 d 0]\n[0 0 0 0 e]\n",
            "block 1 differs:\n" + format_symbolic(img[0], 5));
    REQUIRE(format_symbolic(img[1], 4) == "[e 0 0 0]\n[0 e 0 0]\n[0 0 e 0]\n[0 0 0 0]\n",
            "block 2 differs:\n" + format_symbolic(img[1], 4));
    REQUIRE(!spec.is_unital() && spec.blocks[1].padding == 1, "expected one padding row in block 2");
    REQUIRE(verify_graded_star_hom(h).ok(), "hom check failed");
    return {true, "block 1 = 5x5 pattern, block 2 = diag(e,e,e,0)"};
}

Outcome cyclic_example() {
    const auto A = make_field(rationals(), FGAbelianGroup::cyclic(3), {});
    const Alg R(A, {{{0}, {1}}, {{1}}});
    const Alg S(A, {{{0}, {0}, {1}, {1}, {2}}, {{0}, {0}, {2}, {2}}});
    auto p = [&](const char* s) { return GroupRingElem::parse(s, A->support); };
    const auto f = make_khom(k0_module(R), k0_module(S), {{p("2"), p("x^2")}, {p("x"), p("x+x^2")}});
    const auto spec = synthesize(f, R, S);
    const auto h = evaluate_hom(spec);
    const auto rep = verify_graded_star_hom(h, true);
    REQUIRE(rep.ok(), std::to_string(rep.violations.size()) + " violations");
    REQUIRE(k0_of_hom(h) == f, "K0 differs from f");
    REQUIRE(spec.blocks[1].rho == (std::vector<std::size_t>{2, 0, 1, 3}), "rho_2 differs from (3,1,2,4)");
    const auto img = symbolic_image(h, kLabels);
    REQUIRE(format_symbolic(img[1], 4) == "[d 0 c 0]\n[0 e 0 0]\n[b 0 a 0]\n[0 0 0 e]\n",
            "block 2 differs:\n" + format_symbolic(img[1], 4));
    return {true, "K0 = f, 0 violations, rho_2 = (3,1,2,4)"};
}

struct CorpusStats {
    int total = 0, contractive = 0, unital = 0, roundtrip_fail = 0, unital_fail = 0, throw_fail = 0;
    int formula_fail = 0;
};

CorpusStats run_corpus(int n) {
    std::mt19937_64 rng(20240601);
    CorpusStats st;
    for (int k = 0; k < n; ++k) {
        const auto s = corpus::random_sample(rng);
        ++st.total;
        const auto rep = dimension_report(s.f, s.R, s.S);
        if (rep.predimension != (rep.coset_equations && rep.dimension_formulas)) ++st.formula_fail;
        if (!is_contractive(s.f)) {
            try {
                synthesize(s.f, s.R, s.S);
                ++st.throw_fail;
            } catch (const NotContractive&) {
            }
            continue;
        }
        ++st.contractive;
        const auto spec = synthesize(s.f, s.R, s.S);
        const auto h = evaluate_hom(spec);
        if (!verify_graded_star_hom(h).ok() || !(k0_of_hom(h) == s.f)) ++st.roundtrip_fail;
        if (spec.is_unital() != is_unit_preserving(s.f) || spec.is_unital() != verify_graded_star_hom(h, true).ok())
            ++st.unital_fail;
        st.unital += spec.is_unital();
    }
    return st;
}

Outcome corpus_roundtrip(const CorpusStats& st) {
    std::ostringstream d;
    d << st.total << " samples, " << st.contractive << " contractive (" << st.unital << " unital)";
    REQUIRE(st.total >= 500, d.str());
    REQUIRE(st.roundtrip_fail == 0, d.str() + ", " + std::to_string(st.roundtrip_fail) + " round-trip failures");
    REQUIRE(st.unital_fail == 0, d.str() + ", " + std::to_string(st.unital_fail) + " unitality mismatches");
    REQUIRE(st.throw_fail == 0, d.str() + ", non-contractive f synthesized");
    return {true, d.str()};
}

Outcome corpus_formulas(const CorpusStats& st) {
    REQUIRE(st.formula_fail == 0, std::to_string(st.formula_fail) + " disagreements");
    return {true, std::to_string(st.total) + " samples agree"};
}

Outcome resynthesis() {
    std::mt19937_64 rng(555);
    int pairs = 0, unitaries = 0;
    while (pairs < 200) {
        const auto s = corpus::random_sample(rng, static_cast<int>(rng() % 2));
        if (!is_contractive(s.f)) continue;
        const auto phi = evaluate_hom(synthesize(s.f, s.R, s.S));
        const auto psi = evaluate_hom(synthesize(s.f, s.R, s.S, {rng()}));
        const auto u = unitary_completion(build_intertwiner(phi, psi), phi, psi);
        REQUIRE(is_unitary(u, s.S), "non-unitary intertwiner (" + s.label + ")");
        REQUIRE(u.degree == s.S.field()->grading().zero(), "intertwiner not of degree 0");
        REQUIRE(verify_conjugation(u, phi, psi), "conjugation fails (" + s.label + ")");
        ++pairs;
        if (unitaries < 50) {
            const auto w = random_degree_zero_unitary(s.S, rng, 4);
            REQUIRE(is_unitary(w, s.S), "random unitary is not unitary");
            REQUIRE(k0_of_hom(conjugate(w, phi)) == k0_of_hom(phi), "conjugation changed K0");
            ++unitaries;
        }
    }
    return {true, std::to_string(pairs) + " pairs, " + std::to_string(unitaries) + " random unitaries"};
}

Path random_path_into(const Graph& g, std::size_t w, std::mt19937_64& rng) {
    Path p{w, {}};
    const auto len = rng() % 5;
    for (std::size_t k = 0; k < len && !g.in_edges(p.start).empty(); ++k) {
        const auto& in = g.in_edges(p.start);
        const auto e = in[rng() % in.size()];
        p.edges.insert(p.edges.begin(), e);
        p.start = g.edge(e).source;
    }
    return p;
}

Outcome lpa_goldens() {
    const std::vector<std::pair<std::string, std::string>> goldens{
        {"e: u -> v\nf: v -> w\n", "M3(K)(0,1,2)"},
        {"c: v -> v\n", "M1(K[x,x^-1])(0)"},
        {"a: u -> v\nb: v -> u\n", "M2(K[x^2,x^-2])(0,1)"},
    };
    std::mt19937_64 rng(64);
    for (auto& [text, want] : goldens) {
        const auto g = parse_graph_text(text);
        const auto st = structure_decomposition(g, rationals());
        REQUIRE(st.to_string() == want, "got " + st.to_string() + ", expected " + want);
        for (int t = 0; t < 100; ++t) {
            auto mono = [&] {
                const auto w = rng() % g.num_vertices();
                return Monomial<Rational>{Rational(1), random_path_into(g, w, rng), random_path_into(g, w, rng)};
            };
            const auto a = mono(), b = mono();
            const auto prod = multiply(g, a, b);
            const auto lhs = reduce_monomial(g, st, a) * reduce_monomial(g, st, b);
            if (prod) REQUIRE(reduce_monomial(g, st, *prod) == lhs, "product mismatch for " + want);
            else REQUIRE(lhs.is_zero(), "nonzero image of a zero product for " + want);
        }
    }
    return {true, "3 goldens, 300 monomial products"};
}

Outcome lpa_decisions() {
    const auto all = oracle::enumerate_no_exit(5, 6);
    std::vector<LpaInvariant> inv;
    std::map<std::string, std::vector<std::size_t>> buckets;
    for (std::size_t k = 0; k < all.size(); ++k) {
        inv.push_back(lpa_invariant(oracle::to_graph(all[k])));
        // same component shapes: the decision is not settled by counting
        std::string key;
        for (auto& s : inv.back().sinks) key += "s" + std::to_string(s.size());
        for (auto& [n, s] : inv.back().cycles) key += "c" + std::to_string(n) + ":" + std::to_string(s.size());
        buckets[key].push_back(k);
    }
    std::mt19937_64 rng(7);
    int pairs = 0, within = 0, iso = 0;
    auto check = [&](std::size_t a, std::size_t b) {
        const bool got = decide_graded_iso(inv[a], inv[b]).isomorphic;
        iso += got;
        ++pairs;
        return got == oracle::contractive_iso_exists(inv[a], inv[b]);
    };
    for (auto& [key, ids] : buckets) {
        if (ids.size() < 2) continue;
        for (int t = 0; t < 4; ++t) {
            const auto a = ids[rng() % ids.size()], b = ids[rng() % ids.size()];
            REQUIRE(check(a, b), "disagreement within bucket " + key);
            ++within;
        }
    }
    for (int t = 0; t < 200; ++t) REQUIRE(check(rng() % inv.size(), rng() % inv.size()), "disagreement on a random pair");
    REQUIRE(pairs >= 100, "only " + std::to_string(pairs) + " pairs");
    return {true, std::to_string(all.size()) + " graphs, " + std::to_string(pairs) + " pairs (" +
                      std::to_string(within) + " within buckets, " + std::to_string(iso) + " isomorphic)"};
}

Outcome omega_certificate() {
    const auto L = OmegaShiftMultiset::line(), C = OmegaShiftMultiset::clock();
    const auto cert = certify_no_contractive_iso(L, C);
    REQUIRE(cert.no_contractive_iso, "certificate not produced");
    const auto line = line_truncation_chain(rationals());
    const auto clock = clock_truncation_chain(rationals());
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto ul = shift_sum(L.truncate(n)), uc = shift_sum(C.truncate(n));
        REQUIRE(omega_interval_member(ul, L) && omega_interval_member(uc, C), "truncation unit outside its interval");
        REQUIRE(unit_class(line->algebra(n - 1)).coords[0] == ul, "line stage unit differs");
        REQUIRE(unit_class(clock->algebra(n - 1)).coords[0] == uc, "clock stage unit differs");
        if (n >= 3) REQUIRE(!omega_interval_member(ul, C), "line unit lies in the clock interval");
    }
    return {true, "both directions checked, n = 2..8"};
}

Outcome elliott() {
    const ChainPtr<Rational> R = corner_doubling_chain(rationals());
    const ChainPtr<Rational> S = corner_doubling_chain(rationals(), true);
    const auto f = identity_stage_khom<Rational>(R, S), g = identity_stage_khom<Rational>(S, R);
    const auto t = elliott_intertwine(*R, *S, f, g, 4);
    REQUIRE(t.depth() == 4, "depth " + std::to_string(t.depth()));
    const auto rel = verify_transcript(t, *R, *S, f, g);
    for (std::size_t i = 0; i < rel.size(); ++i) REQUIRE(rel[i].all(), "relation " + std::to_string(i + 1) + " fails");

    const ChainPtr<Rational> L = line_truncation_chain(rationals());
    const ChainPtr<Rational> C = clock_truncation_chain(rationals());
    std::string why;
    try {
        elliott_intertwine(*L, *C, identity_stage_khom<Rational>(L, C), identity_stage_khom<Rational>(C, L), 4,
                           StageBudget{16});
    } catch (const BudgetExhausted& e) {
        why = std::string("BudgetExhausted: ") + e.what();
    } catch (const KHomInconsistent& e) {
        why = std::string("KHomInconsistent: ") + e.what();
    }
    REQUIRE(!why.empty(), "line/clock intertwining unexpectedly succeeded");
    std::string stages;
    for (std::size_t i = 0; i < t.n.size(); ++i) stages += (i ? " " : "") + std::to_string(t.n[i]) + "/" + std::to_string(t.m[i]);
    return {true, "depth 4, stages n/m " + stages + "; line/clock: " + why};
}

}  // namespace

int main() {
    int failures = 0;
    auto run = [&](int id, const std::string& name, double limit_s, const std::function<Outcome()>& fn) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (limit_s > 0 && s > limit_s) {
            o.ok = false;
            o.detail += " (time limit " + std::to_string(static_cast<int>(limit_s)) + " s exceeded)";
        }
        failures += !o.ok;
        std::printf("%s [%d] %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), s);
        std::fflush(stdout);
    };

    run(1, "ungraded synthesis matches the symbolic form", 0, ungraded_example);
    run(2, "Z/3 synthesis realizes f", 0, cyclic_example);
    CorpusStats st;
    run(3, "corpus round trip and unitality", 60, [&] {
        st = run_corpus(600);
        return corpus_roundtrip(st);
    });
    run(4, "pre-dimension iff coset and dimension formulas", 0, [&] { return corpus_formulas(st); });
    run(5, "re-synthesis is unitarily equivalent", 0, resynthesis);
    run(6, "Leavitt path algebra goldens and multiplicativity", 0, lpa_goldens);
    run(7, "graded iso decision agrees with brute force", 300, lpa_decisions);
    run(8, "line/clock non-isomorphism certificate", 0, omega_certificate);
    run(9, "Elliott intertwining and its obstruction", 30, elliott);
    return failures ? 1 : 0;
}
