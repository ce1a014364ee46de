#pragma once
/** @file io.hpp
 *  @brief JSON readers and writers for fields, algebras, K-homs, specs,
 *  homogeneous elements, maps, chains, graphs and reports. Matrix and block
 *  indices are 1-based on the wire.
 */

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "grk/lpa.hpp"
#include "grk/ultra.hpp"
#include "json.hpp"

namespace grk::io {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json parse_json(const std::string& text, const std::string& where = "input") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), path); }

/** j[key] or a ParseError naming the key. */
inline const json& need(const json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError("missing field '" + key + "'");
    return j.at(key);
}

template <class T>
T get_as(const json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ParseError("bad value for '" + what + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Groups and fields

inline Vec vec_from_json(const json& j) {
    if (j.is_number_integer()) return {j.get<std::int64_t>()};
    return get_as<Vec>(j, "group element");
}

inline json vec_to_json(const Vec& v) { return v; }

inline FGAbelianGroup group_from_json(const json& j) {
    const auto free_rank = j.value("free_rank", std::size_t{0});
    const auto torsion = get_as<std::vector<std::int64_t>>(j.value("torsion_moduli", json::array()), "torsion_moduli");
    return FGAbelianGroup(free_rank, torsion);
}

struct FieldDescriptor {
    /** "rational", "gaussian" or "fp:<p>" */
    std::string base = "rational";
    std::uint64_t modulus = 0;
    FGAbelianGroup group;
    std::vector<Vec> support;
};

inline FieldDescriptor field_from_json(const json& j) {
    FieldDescriptor d;
    d.base = j.value("base", std::string("rational"));
    if (d.base.rfind("fp:", 0) == 0) {
        try {
            d.modulus = std::stoull(d.base.substr(3));
        } catch (const std::logic_error&) {
            throw ParseError("bad prime field '" + d.base + "'");
        }
    } else if (d.base != "rational" && d.base != "gaussian") {
        throw ParseError("unknown base field '" + d.base + "'");
    }
    if (j.contains("grading")) d.group = group_from_json(j.at("grading"));
    for (auto& g : j.value("support_generators", json::array())) d.support.push_back(vec_from_json(g));
    return d;
}

inline json field_to_json(const FieldDescriptor& d) {
    return {{"base", d.base},
            {"grading", {{"free_rank", d.group.free_rank()}, {"torsion_moduli", d.group.torsion_moduli()}}},
            {"support_generators", d.support}};
}

template <StarScalar F>
FieldPtr<F> make_graded_field(const FieldDescriptor& d, const BaseStarField<F>& base) {
    return make_field(base, d.group, d.support);
}

// ---------------------------------------------------------------------------
// Algebras, K0

template <StarScalar F>
MatricialAlgebra<F> algebra_from_json(const json& j, const FieldPtr<F>& A) {
    std::vector<std::vector<Vec>> blocks;
    for (auto& b : need(j, "blocks")) {
        std::vector<Vec> shifts;
        for (auto& s : need(b, "shifts")) shifts.push_back(vec_from_json(s));
        if (b.contains("size") && get_as<std::size_t>(b.at("size"), "size") != shifts.size())
            throw ParseError("block size does not match the number of shifts");
        for (auto& s : shifts) A->grading().check(s);
        blocks.push_back(std::move(shifts));
    }
    return MatricialAlgebra<F>(A, std::move(blocks));
}

template <StarScalar F>
json algebra_to_json(const MatricialAlgebra<F>& R) {
    json blocks = json::array();
    for (std::size_t i = 0; i < R.num_blocks(); ++i) blocks.push_back({{"size", R.block_size(i)}, {"shifts", R.shifts(i)}});
    return {{"blocks", blocks}};
}

inline json ring_elem_to_json(const GroupRingElem& x) {
    return x.space() && x.space()->ambient().dim() == 1 ? x.to_laurent() : x.to_string();
}

inline json k0_elem_to_json(const K0Elem& v) {
    json a = json::array();
    for (auto& c : v.coords) a.push_back(ring_elem_to_json(c));
    return a;
}

inline json k0_module_to_json(const K0Module& m) {
    json norm = json::array();
    for (auto& g : m.normalization) norm.push_back(g);
    return {{"rank", m.rank},
            {"support", m.space->to_string()},
            {"unit", k0_elem_to_json(m.unit)},
            {"normalization", norm}};
}

inline KHomMatrix khom_from_json(const json& j, const K0Module& src, const K0Module& tgt) {
    const json& e = j.is_object() ? need(j, "entries") : j;
    std::vector<std::vector<GroupRingElem>> rows;
    for (auto& row : e) {
        rows.emplace_back();
        for (auto& x : row) {
            if (x.is_number_integer()) rows.back().push_back(GroupRingElem::constant(src.space, x.get<std::int64_t>()));
            else rows.back().push_back(GroupRingElem::parse(get_as<std::string>(x, "K-hom entry"), src.space));
        }
    }
    return make_khom(src, tgt, std::move(rows));
}

inline json khom_to_json(const KHomMatrix& f) {
    json rows = json::array();
    for (auto& row : f.entries) {
        json r = json::array();
        for (auto& x : row) r.push_back(ring_elem_to_json(x));
        rows.push_back(r);
    }
    return {{"entries", rows}};
}

inline json dimension_report_to_json(const DimensionReport& d) {
    json blocks = json::array();
    for (std::size_t j = 0; j < d.blocks.size(); ++j) {
        const auto& b = d.blocks[j];
        json cls = json::array();
        for (std::size_t c = 0; c < b.classes.size(); ++c)
            cls.push_back({{"coset", b.classes[c]}, {"slots", b.N_class[c]}, {"target_rows", b.s_class[c]}});
        blocks.push_back({{"block", j + 1},
                          {"N", b.N},
                          {"q", b.q},
                          {"classes", cls},
                          {"unmatched_slots", b.unmatched.size()},
                          {"coset_equations", b.coset_equations},
                          {"dimension_formulas", b.dimension_formulas},
                          {"predimension", b.predimension},
                          {"equality", b.equality}});
    }
    return {{"blocks", blocks},
            {"coset_equations", d.coset_equations},
            {"dimension_formulas", d.dimension_formulas},
            {"predimension", d.predimension},
            {"equalities", d.equalities}};
}

// ---------------------------------------------------------------------------
// Elements and maps

template <StarScalar F>
json homogeneous_to_json(const Homogeneous<F>& x) {
    json blocks = json::array();
    for (auto& b : x.blocks) {
        json e = json::array();
        for (auto& [ij, c] : b.entries()) e.push_back({ij.first + 1, ij.second + 1, ScalarOps<F>::to_string(c)});
        blocks.push_back({{"entries", e}});
    }
    return {{"degree", x.degree}, {"blocks", blocks}};
}

template <StarScalar F>
Homogeneous<F> homogeneous_from_json(const json& j, const MatricialAlgebra<F>& R) {
    auto x = zero_element(R, vec_from_json(need(j, "degree")));
    const auto& blocks = need(j, "blocks");
    if (blocks.size() != R.num_blocks()) throw ParseError("element has the wrong number of blocks");
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (auto& t : need(blocks[b], "entries")) {
            if (!t.is_array() || t.size() != 3) throw ParseError("matrix entry must be [row, col, value]");
            const auto r = get_as<std::size_t>(t[0], "row"), c = get_as<std::size_t>(t[1], "col");
            if (r == 0 || c == 0) throw ParseError("matrix indices are 1-based");
            const auto v = t[2].is_string() ? R.field()->base.parse(t[2].get<std::string>())
                                            : R.field()->base.from_int(get_as<long>(t[2], "entry"));
            x.blocks[b].add_to(r - 1, c - 1, v);
        }
    return x;
}

template <StarScalar F>
json explicit_hom_to_json(const ExplicitHom<F>& h) {
    json images = json::array();
    for (auto& block : h.images) {
        json b = json::array();
        for (auto& img : block) b.push_back(homogeneous_to_json(img));
        images.push_back(b);
    }
    return {{"source", algebra_to_json(h.source)}, {"target", algebra_to_json(h.target)}, {"images", images}};
}

template <StarScalar F>
ExplicitHom<F> explicit_hom_from_json(const json& j, const FieldPtr<F>& A) {
    ExplicitHom<F> h{algebra_from_json(need(j, "source"), A), algebra_from_json(need(j, "target"), A), {}};
    const auto& images = need(j, "images");
    if (images.size() != h.source.num_blocks()) throw ParseError("one image list per source block expected");
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto p = h.source.block_size(i);
        if (images[i].size() != p * p) throw ParseError("block " + std::to_string(i + 1) + " needs p^2 images");
        h.images.emplace_back();
        for (auto& img : images[i]) h.images.back().push_back(homogeneous_from_json(img, h.target));
    }
    return h;
}

inline std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> r(v);
    for (auto& x : r) ++x;
    return r;
}

template <StarScalar F>
json spec_to_json(const GradedHomSpec<F>& s, const KHomMatrix& f) {
    json blocks = json::array();
    for (std::size_t j = 0; j < s.blocks.size(); ++j) {
        const auto& b = s.blocks[j];
        json slots = json::array();
        for (auto& sl : b.slots)
            slots.push_back({{"source_block", sl.source_block + 1},
                             {"term", sl.term + 1},
                             {"row", sl.row + 1},
                             {"copy", sl.copy + 1},
                             {"alpha", sl.alpha},
                             {"target", sl.target + 1},
                             {"epsilon", sl.epsilon}});
        blocks.push_back({{"q", s.target.block_size(j)},
                          {"padding", b.padding},
                          {"rho", one_based(b.rho)},
                          {"slots", slots}});
    }
    return {{"source", algebra_to_json(s.source)},
            {"target", algebra_to_json(s.target)},
            {"khom", khom_to_json(f)},
            {"unital", s.is_unital()},
            {"blocks", blocks}};
}

template <StarScalar F>
GradedHomSpec<F> spec_from_json(const json& j, const FieldPtr<F>& A) {
    GradedHomSpec<F> s{algebra_from_json(need(j, "source"), A), algebra_from_json(need(j, "target"), A), {}, {}};
    if (j.contains("khom")) s.coefficients = decompose_khom(khom_from_json(j.at("khom"), k0_module(s.source), k0_module(s.target)));
    const auto& blocks = need(j, "blocks");
    if (blocks.size() != s.target.num_blocks()) throw SpecCorrupt("one plan per target block expected");
    for (auto& b : blocks) {
        TargetBlockPlan p;
        p.padding = b.value("padding", std::size_t{0});
        for (auto r : b.value("rho", std::vector<std::size_t>{})) {
            if (r == 0) throw SpecCorrupt("rho is 1-based");
            p.rho.push_back(r - 1);
        }
        for (auto& sl : need(b, "slots")) {
            auto idx = [&](const char* key) {
                const auto v = get_as<std::size_t>(need(sl, key), key);
                if (v == 0) throw SpecCorrupt(std::string(key) + " is 1-based");
                return v - 1;
            };
            p.slots.push_back({idx("source_block"), idx("term"), idx("row"), idx("copy"),
                               sl.contains("alpha") ? vec_from_json(sl.at("alpha")) : Vec{}, idx("target"),
                               sl.contains("epsilon") ? vec_from_json(sl.at("epsilon")) : Vec{}});
        }
        s.blocks.push_back(std::move(p));
    }
    return s;
}

/** Either an explicit map ("images") or a spec ("blocks" with slots). */
template <StarScalar F>
ExplicitHom<F> hom_from_json(const json& j, const FieldPtr<F>& A) {
    if (j.contains("images")) return explicit_hom_from_json(j, A);
    return evaluate_hom(spec_from_json(j, A));
}

inline json hom_report_to_json(const HomReport& r) { return {{"ok", r.ok()}, {"violations", r.violations}}; }

// ---------------------------------------------------------------------------
// Chains

template <StarScalar F>
std::shared_ptr<Chain<F>> chain_from_json(const json& j, const FieldDescriptor& fd, const BaseStarField<F>& base) {
    if (j.contains("preset")) {
        const auto preset = get_as<std::string>(j.at("preset"), "preset");
        const auto variant = j.value("variant", std::string("standard"));
        if (preset == "corner-doubling") {
            if (variant != "standard" && variant != "reversed") throw ParseError("unknown variant '" + variant + "'");
            return corner_doubling_chain(base, variant == "reversed");
        }
        if (preset == "line-truncation") return line_truncation_chain(base);
        if (preset == "clock-truncation") return clock_truncation_chain(base);
        throw ParseError("unknown chain preset '" + preset + "'");
    }
    auto A = make_graded_field(fd, base);
    std::vector<MatricialAlgebra<F>> stages;
    for (auto& s : need(j, "stages")) stages.push_back(algebra_from_json(s, A));
    std::vector<ExplicitHom<F>> maps;
    for (auto& m : need(j, "maps")) maps.push_back(hom_from_json(m, A));
    return Chain<F>::finite(j.value("name", std::string("explicit")), std::move(stages), std::move(maps));
}

/** {"kind": "identity"} | {"kind": "constant", "entries": ...} | {"kind": "list", "maps": [...]} */
template <StarScalar F>
StageKHom stage_khom_from_json(const json& j, ChainPtr<F> A, ChainPtr<F> B) {
    const auto kind = j.value("kind", std::string("identity"));
    if (kind == "identity") return identity_stage_khom<F>(A, B);
    if (kind == "constant") {
        std::vector<std::vector<std::string>> e;
        for (auto& row : need(j, "entries")) {
            e.emplace_back();
            for (auto& x : row) e.back().push_back(x.is_string() ? x.get<std::string>() : x.dump());
        }
        return constant_stage_khom<F>(A, B, e);
    }
    if (kind == "list") {
        const auto maps = need(j, "maps");
        return [A, B, maps](std::size_t n) -> KHomMatrix {
            if (n >= maps.size())
                throw BudgetExhausted("stage data lists only " + std::to_string(maps.size()) + " stages");
            return khom_from_json(maps[n], A->k0(n), B->k0(n));
        };
    }
    throw ParseError("unknown stage data kind '" + kind + "'");
}

template <StarScalar F>
json transcript_to_json(const IntertwiningTranscript<F>& t, const std::vector<RelationCheck>& rel) {
    json rels = json::array();
    for (std::size_t i = 0; i < rel.size(); ++i)
        rels.push_back({{"i", i + 1},
                        {"sigma_rho", rel[i].sigma_rho},
                        {"rho_sigma", rel[i].rho_sigma},
                        {"k_rho", rel[i].k_rho},
                        {"k_sigma", rel[i].k_sigma}});
    json rho = json::array(), sigma = json::array(), rc = json::array(), sc = json::array();
    for (auto& h : t.rho) rho.push_back(explicit_hom_to_json(h));
    for (auto& h : t.sigma) sigma.push_back(explicit_hom_to_json(h));
    for (auto& u : t.rho_correction) rc.push_back(homogeneous_to_json(u));
    for (auto& u : t.sigma_correction) sc.push_back(homogeneous_to_json(u));
    return {{"depth", t.depth()},
            {"n", one_based(t.n)},
            {"m", one_based(t.m)},
            {"relations", rels},
            {"rho", rho},
            {"sigma", sigma},
            {"rho_corrections", rc},
            {"sigma_corrections", sc}};
}

// ---------------------------------------------------------------------------
// Graphs

/** {"vertices": [...], "edges": [{"name", "source", "range"}]} */
inline Graph graph_from_json(const json& j) {
    Graph g;
    for (auto& v : j.value("vertices", json::array())) g.add_vertex(get_as<std::string>(v, "vertex"));
    for (auto& e : need(j, "edges")) {
        const auto name = get_as<std::string>(need(e, "name"), "name");
        const auto s = get_as<std::string>(need(e, "source"), "source");
        const auto r = get_as<std::string>(need(e, "range"), "range");
        if (!g.vertex(s) || !g.vertex(r))
            throw DanglingEndpoint("edge '" + name + "' uses an undeclared vertex");
        g.add_edge(name, *g.vertex(s), *g.vertex(r));
    }
    return g;
}

inline json graph_to_json(const Graph& g) {
    json v = json::array(), e = json::array();
    for (std::size_t x = 0; x < g.num_vertices(); ++x) v.push_back(g.vertex_name(x));
    for (auto& d : g.edges())
        e.push_back({{"name", d.name}, {"source", g.vertex_name(d.source)}, {"range", g.vertex_name(d.range)}});
    return {{"vertices", v}, {"edges", e}};
}

/** JSON when the text starts with '{', the line format otherwise. */
inline Graph load_graph(const std::string& path) {
    const auto text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return graph_from_json(parse_json(text, path));
    return parse_graph_text(text);
}

inline json cycle_to_json(const Graph& g, const Cycle& c) {
    json edges = json::array();
    for (auto e : c.edges) edges.push_back(g.edge(e).name);
    return {{"base", g.vertex_name(c.base)}, {"length", c.length()}, {"edges", edges}};
}

inline json class_report_to_json(const Graph& g, const GraphClassReport& r) {
    json sinks = json::array(), regular = json::array(), cycles = json::array(), exits = json::array();
    for (auto v : r.sinks) sinks.push_back(g.vertex_name(v));
    for (auto v : r.regular) regular.push_back(g.vertex_name(v));
    for (auto& c : r.cycles) cycles.push_back(cycle_to_json(g, c));
    for (auto& [v, e] : r.exits) exits.push_back({{"vertex", g.vertex_name(v)}, {"edge", g.edge(e).name}});
    return {{"sinks", sinks},      {"regular", regular},     {"cycles", cycles},
            {"exits", exits},      {"no_exit", r.no_exit},   {"in_class", r.in_class}};
}

template <StarScalar F>
json structure_to_json(const Graph& g, const LpaStructure<F>& st) {
    json comps = json::array();
    auto paths = [&](const std::vector<Path>& ps) {
        json a = json::array();
        for (auto& p : ps) a.push_back({{"path", path_to_string(g, p)}, {"length", p.length()}});
        return a;
    };
    for (std::size_t i = 0; i < st.data.sinks.size(); ++i) {
        const auto& s = st.data.sinks[i];
        comps.push_back({{"kind", "sink"},
                         {"vertex", g.vertex_name(s.vertex)},
                         {"size", s.paths.size()},
                         {"shifts", st.components[i].shifts(0)},
                         {"paths", paths(s.paths)}});
    }
    for (std::size_t i = 0; i < st.data.cycles.size(); ++i) {
        const auto& c = st.data.cycles[i];
        comps.push_back({{"kind", "cycle"},
                         {"cycle", cycle_to_json(g, c.cycle)},
                         {"size", c.paths.size()},
                         {"shifts", st.components[st.data.sinks.size() + i].shifts(0)},
                         {"paths", paths(c.paths)}});
    }
    return {{"algebra", st.to_string()}, {"components", comps}};
}

inline json invariant_to_json(const LpaInvariant& inv) {
    json sinks = json::array(), cycles = json::array();
    for (auto& s : inv.sinks) sinks.push_back(s);
    for (auto& [n, s] : inv.cycles) cycles.push_back({{"n", n}, {"lengths", s}});
    json unit = json::array();
    for (auto& u : invariant_unit(inv)) unit.push_back(u.to_laurent());
    return {{"sinks", sinks}, {"cycles", cycles}, {"unit", unit}};
}

inline json decision_to_json(const IsoDecision& d) {
    json s = json::array(), c = json::array();
    for (auto& m : d.sinks) s.push_back({{"first", m.first + 1}, {"second", m.second + 1}, {"shift", m.shift}});
    for (auto& m : d.cycles) c.push_back({{"first", m.first + 1}, {"second", m.second + 1}, {"rotation", m.rotation}});
    json out = {{"isomorphic", d.isomorphic}};
    if (d.isomorphic) out["certificate"] = {{"sinks", s}, {"cycles", c}};
    else out["obstruction"] = d.obstruction;
    return out;
}

inline json omega_certificate_to_json(const NoIsoCertificate& c) {
    auto dir = [](const DirectionCertificate& d) {
        json lines = json::array();
        for (auto& l : d.lines) lines.push_back(l);
        json out = {{"refuted", d.refuted}, {"lines", lines}};
        if (d.survivor) out["survivor_exponent"] = *d.survivor;
        return out;
    };
    return {{"no_contractive_iso", c.no_contractive_iso}, {"forward", dir(c.forward)}, {"backward", dir(c.backward)}};
}

}  // namespace grk::io
