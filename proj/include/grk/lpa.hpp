#pragma once
/** @file lpa.hpp
 *  @brief Leavitt path algebras of finite no-exit graphs: class check, the
 *  decomposition into graded matricial pieces, rewriting monomials p q* into
 *  matrix units, the K0 invariant and the graded isomorphism decision.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grk/k0gr.hpp"

namespace grk {

struct Edge {
    std::string name;
    std::size_t source = 0;
    std::size_t range = 0;
};

/** Vertex ids are positions in declaration order. */
class Graph {
public:
    std::size_t add_vertex(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        index_.emplace(name, names_.size());
        names_.push_back(name);
        out_.emplace_back();
        in_.emplace_back();
        return names_.size() - 1;
    }
    std::size_t add_edge(const std::string& name, std::size_t u, std::size_t v) {
        if (u >= names_.size() || v >= names_.size()) throw DanglingEndpoint("edge '" + name + "' has an unknown endpoint");
        if (edge_index_.count(name)) throw ParseError("duplicate edge name '" + name + "'");
        edge_index_.emplace(name, edges_.size());
        edges_.push_back({name, u, v});
        out_[u].push_back(edges_.size() - 1);
        in_[v].push_back(edges_.size() - 1);
        return edges_.size() - 1;
    }
    std::size_t add_edge(const std::string& name, const std::string& u, const std::string& v) {
        const auto a = add_vertex(u);
        const auto b = add_vertex(v);
        return add_edge(name, a, b);
    }

    std::size_t num_vertices() const { return names_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::string& vertex_name(std::size_t v) const { return names_.at(v); }
    std::optional<std::size_t> vertex(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? std::nullopt : std::optional(it->second);
    }
    std::optional<std::size_t> edge_id(const std::string& name) const {
        auto it = edge_index_.find(name);
        return it == edge_index_.end() ? std::nullopt : std::optional(it->second);
    }
    const Edge& edge(std::size_t e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_.at(v); }
    const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_.at(v); }
    bool is_sink(std::size_t v) const { return out_.at(v).empty(); }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
    std::vector<Edge> edges_;
    std::map<std::string, std::size_t> edge_index_;
    std::vector<std::vector<std::size_t>> out_, in_;
};

/** Lines "e: u -> v" and "v: vertex"; '#' starts a comment. */
inline Graph parse_graph_text(const std::string& text) {
    Graph g;
    std::istringstream in(text);
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto fail = [&](const std::string& why) {
            throw ParseError("line " + std::to_string(no) + ": " + why);
        };
        // allow "e:u" glued to the colon
        std::string head = tok[0];
        if (head.size() > 1 && head.back() == ':') {
            head.pop_back();
            tok.erase(tok.begin());
        } else if (tok.size() > 1 && tok[1] == ":") {
            tok.erase(tok.begin(), tok.begin() + 2);
        } else {
            fail("expected 'name: u -> v' or 'name: vertex'");
        }
        if (tok.size() == 1 && tok[0] == "vertex") {
            if (g.edge_id(head)) fail("'" + head + "' is already an edge");
            g.add_vertex(head);
        } else if (tok.size() == 3 && tok[1] == "->") {
            if (g.edge_id(head)) fail("duplicate edge name '" + head + "'");
            g.add_edge(head, tok[0], tok[2]);
        } else {
            fail("expected 'u -> v' or 'vertex' after '" + head + ":'");
        }
    }
    return g;
}

inline std::string graph_to_text(const Graph& g) {
    std::string s;
    std::vector<bool> touched(g.num_vertices(), false);
    for (auto& e : g.edges()) touched[e.source] = touched[e.range] = true;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        if (!touched[v]) s += g.vertex_name(v) + ": vertex\n";
    for (auto& e : g.edges()) s += e.name + ": " + g.vertex_name(e.source) + " -> " + g.vertex_name(e.range) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Class membership

struct Cycle {
    /** Minimal vertex id on the cycle. */
    std::size_t base = 0;
    /** Edges in order, starting at base. */
    std::vector<std::size_t> edges;
    std::size_t length() const { return edges.size(); }
};

struct GraphClassReport {
    std::vector<std::size_t> sinks, regular;
    std::vector<Cycle> cycles;
    /** (vertex on a cycle, its extra out-edge) */
    std::vector<std::pair<std::size_t, std::size_t>> exits;
    bool no_exit = true;
    bool in_class = true;
};

/** Every simple cycle once, starting at its minimal vertex. Exponential in the
 *  worst case; for no-exit graphs cycles are disjoint and the search is linear. */
inline std::vector<Cycle> simple_cycles(const Graph& g) {
    std::vector<Cycle> out;
    const auto n = g.num_vertices();
    std::vector<bool> on_path(n, false);
    std::vector<std::size_t> path;
    for (std::size_t s = 0; s < n; ++s) {
        std::function<void(std::size_t)> dfs = [&](std::size_t v) {
            on_path[v] = true;
            for (auto e : g.out_edges(v)) {
                const auto w = g.edge(e).range;
                if (w < s) continue;
                path.push_back(e);
                if (w == s) out.push_back({s, path});
                else if (!on_path[w]) dfs(w);
                path.pop_back();
            }
            on_path[v] = false;
        };
        dfs(s);
    }
    return out;
}

inline GraphClassReport classify_graph(const Graph& g) {
    GraphClassReport r;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) (g.is_sink(v) ? r.sinks : r.regular).push_back(v);
    r.cycles = simple_cycles(g);
    for (auto& c : r.cycles)
        for (auto e : c.edges) {
            const auto v = g.edge(e).source;
            for (auto f : g.out_edges(v))
                if (f != e) r.exits.emplace_back(v, f);
        }
    std::sort(r.exits.begin(), r.exits.end());
    r.exits.erase(std::unique(r.exits.begin(), r.exits.end()), r.exits.end());
    r.no_exit = r.exits.empty();
    // in a finite graph an infinite path eventually runs around a cycle; without exits it stays there
    r.in_class = r.no_exit;
    return r;
}

// ---------------------------------------------------------------------------
// Structure

struct Path {
    std::size_t start = 0;
    std::vector<std::size_t> edges;

    std::size_t length() const { return edges.size(); }
    std::size_t end(const Graph& g) const { return edges.empty() ? start : g.edge(edges.back()).range; }
    bool operator==(const Path& o) const { return start == o.start && edges == o.edges; }
    bool operator<(const Path& o) const {
        if (edges.size() != o.edges.size()) return edges.size() < o.edges.size();
        if (edges.empty()) return start < o.start;
        return edges < o.edges;
    }
};

inline std::string path_to_string(const Graph& g, const Path& p) {
    if (p.edges.empty()) return g.vertex_name(p.start);
    std::string s;
    for (std::size_t k = 0; k < p.edges.size(); ++k) s += (k ? " " : "") + g.edge(p.edges[k]).name;
    return s;
}

struct SinkComponent {
    std::size_t vertex = 0;
    /** All paths ending at the sink, by length then edge sequence. */
    std::vector<Path> paths;
};

struct CycleComponent {
    Cycle cycle;
    /** Paths ending at the base that do not run through the whole cycle. */
    std::vector<Path> paths;
};

struct StructureData {
    std::vector<SinkComponent> sinks;
    std::vector<CycleComponent> cycles;
    std::size_t num_components() const { return sinks.size() + cycles.size(); }
};

namespace detail {

inline void require_in_class(const Graph& g, const GraphClassReport& r) {
    if (r.in_class) return;
    const auto& [v, e] = r.exits.front();
    throw NotInClass("vertex '" + g.vertex_name(v) + "' on a cycle has the exit '" + g.edge(e).name + "'");
}

/** Backward enumeration of paths ending at v; a path is dropped (with all its
 *  extensions) when reject says so. */
inline std::vector<Path> paths_into(const Graph& g, std::size_t v, const std::function<bool(const Path&)>& reject) {
    std::vector<Path> all{{v, {}}};
    std::vector<Path> level{{v, {}}};
    while (!level.empty()) {
        std::vector<Path> next;
        for (auto& p : level)
            for (auto e : g.in_edges(p.start)) {
                Path q{g.edge(e).source, {e}};
                q.edges.insert(q.edges.end(), p.edges.begin(), p.edges.end());
                if (!reject(q)) next.push_back(std::move(q));
            }
        std::sort(next.begin(), next.end());
        all.insert(all.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return all;
}

inline bool ends_with(const std::vector<std::size_t>& p, const std::vector<std::size_t>& c) {
    return p.size() >= c.size() && std::equal(c.rbegin(), c.rend(), p.rbegin());
}

}  // namespace detail

inline StructureData structure_data(const Graph& g) {
    const auto rep = classify_graph(g);
    detail::require_in_class(g, rep);
    StructureData d;
    for (auto s : rep.sinks) d.sinks.push_back({s, detail::paths_into(g, s, [](const Path&) { return false; })});
    for (auto& c : rep.cycles) {
        const auto edges = c.edges;
        d.cycles.push_back(
            {c, detail::paths_into(g, c.base, [&](const Path& p) { return detail::ends_with(p.edges, edges); })});
    }
    return d;
}

/** One single-block algebra per component: sinks over K, cycles of length n over K[x^n, x^-n]. */
template <StarScalar F>
struct LpaStructure {
    StructureData data;
    std::vector<MatricialAlgebra<F>> components;

    std::size_t component_of_sink(std::size_t v) const {
        for (std::size_t i = 0; i < data.sinks.size(); ++i)
            if (data.sinks[i].vertex == v) return i;
        throw IndexOutOfRange("not a sink");
    }
    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < components.size(); ++i) {
            const auto& R = components[i];
            std::string ring = "K";
            if (i >= data.sinks.size()) {
                const auto n = std::to_string(data.cycles[i - data.sinks.size()].cycle.length());
                ring = n == "1" ? "K[x,x^-1]" : "K[x^" + n + ",x^-" + n + "]";
            }
            s += (i ? " + " : "") + ("M" + std::to_string(R.block_size(0)) + "(" + ring + ")(");
            for (std::size_t k = 0; k < R.block_size(0); ++k) s += (k ? "," : "") + format_vec(R.shifts(0)[k]);
            s += ")";
        }
        return s.empty() ? "0" : s;
    }
};

template <StarScalar F>
LpaStructure<F> structure_decomposition(const Graph& g, const BaseStarField<F>& base) {
    LpaStructure<F> st{structure_data(g), {}};
    const auto Z = FGAbelianGroup::free(1);
    auto sink_field = make_field(base, Z, {});
    auto shifts = [](const std::vector<Path>& ps) {
        std::vector<Vec> v;
        for (auto& p : ps) v.push_back({static_cast<std::int64_t>(p.length())});
        return v;
    };
    for (auto& s : st.data.sinks) st.components.emplace_back(sink_field, std::vector<std::vector<Vec>>{shifts(s.paths)});
    std::map<std::size_t, FieldPtr<F>> cycle_fields;
    for (auto& c : st.data.cycles) {
        const auto n = c.cycle.length();
        auto& A = cycle_fields[n];
        if (!A) A = make_field(base, Z, {{static_cast<std::int64_t>(n)}});
        st.components.emplace_back(A, std::vector<std::vector<Vec>>{shifts(c.paths)});
    }
    return st;
}

// ---------------------------------------------------------------------------
// Monomials

template <StarScalar F>
struct Monomial {
    F scalar;
    Path p, q;
};

/** p q* is defined when p and q end at the same vertex. */
template <StarScalar F>
bool composable(const Graph& g, const Monomial<F>& m) {
    return m.p.end(g) == m.q.end(g);
}

/** (p1 q1*)(p2 q2*) by q1* p2 = cancellation of the common prefix, or 0. */
template <StarScalar F>
std::optional<Monomial<F>> multiply(const Graph&, const Monomial<F>& a, const Monomial<F>& b) {
    if (a.q.start != b.p.start) return std::nullopt;
    const auto& x = a.q.edges;
    const auto& y = b.p.edges;
    const auto k = std::min(x.size(), y.size());
    if (!std::equal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), y.begin())) return std::nullopt;
    Monomial<F> r{F(a.scalar * b.scalar), a.p, b.q};
    if (y.size() >= x.size()) r.p.edges.insert(r.p.edges.end(), y.begin() + static_cast<std::ptrdiff_t>(k), y.end());
    else r.q.edges.insert(r.q.edges.end(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
    return r;
}

/** Element of the decomposed algebra: one matrix per component, common Z-degree. */
template <StarScalar F>
Homogeneous<F> lpa_zero(const LpaStructure<F>& st, std::int64_t degree) {
    Homogeneous<F> x{{degree}, {}};
    for (auto& R : st.components)
        x.blocks.push_back(GradedMatrix<F>::square(R.field(), R.shift_ptr(0), {degree}));
    return x;
}

namespace detail {

template <StarScalar F>
void reduce_into(const Graph& g, const LpaStructure<F>& st, const std::vector<int>& cycle_of_vertex,
                 const F& c, Path p, Path q, Homogeneous<F>& out) {
    auto w = p.end(g);
    if (g.is_sink(w)) {
        const auto i = st.component_of_sink(w);
        const auto& ps = st.data.sinks[i].paths;
        const auto j = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), p) - ps.begin());
        const auto l = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), q) - ps.begin());
        if (j == ps.size() || l == ps.size()) throw Error("path into a sink missing from the basis");
        out.blocks[i].add_to(j, l, c);
        return;
    }
    if (cycle_of_vertex[w] >= 0) {
        const auto ci = static_cast<std::size_t>(cycle_of_vertex[w]);
        const auto& cc = st.data.cycles[ci];
        // w = d d* for the unique out-edge d, until both paths end at the base
        while (w != cc.cycle.base) {
            const auto d = g.out_edges(w).front();
            p.edges.push_back(d);
            q.edges.push_back(d);
            w = g.edge(d).range;
        }
        auto strip = [&](Path& x) {
            while (detail::ends_with(x.edges, cc.cycle.edges)) x.edges.resize(x.edges.size() - cc.cycle.length());
        };
        strip(p);
        strip(q);
        const auto& ps = cc.paths;
        const auto j = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), p) - ps.begin());
        const auto l = static_cast<std::size_t>(std::find(ps.begin(), ps.end(), q) - ps.begin());
        if (j == ps.size() || l == ps.size()) throw Error("path into a cycle missing from the basis");
        out.blocks[st.data.sinks.size() + ci].add_to(j, l, c);
        return;
    }
    // w = sum_e e e*
    for (auto e : g.out_edges(w)) {
        Path p2 = p, q2 = q;
        p2.edges.push_back(e);
        q2.edges.push_back(e);
        reduce_into(g, st, cycle_of_vertex, c, std::move(p2), std::move(q2), out);
    }
}

}  // namespace detail

/** Image of a p q* in the decomposed algebra; p_ij p_il* -> e_jl and r_ij c^k r_il* -> x^{nk} e_jl. */
template <StarScalar F>
Homogeneous<F> reduce_monomial(const Graph& g, const LpaStructure<F>& st, const Monomial<F>& m) {
    if (!composable(g, m)) throw ShapeMismatch("monomial p q* needs r(p) = r(q)");
    std::vector<int> cycle_of(g.num_vertices(), -1);
    for (std::size_t i = 0; i < st.data.cycles.size(); ++i)
        for (auto e : st.data.cycles[i].cycle.edges) cycle_of[g.edge(e).source] = static_cast<int>(i);
    auto out = lpa_zero(st, static_cast<std::int64_t>(m.p.length()) - static_cast<std::int64_t>(m.q.length()));
    if (!ScalarOps<F>::is_zero(m.scalar)) detail::reduce_into(g, st, cycle_of, m.scalar, m.p, m.q, out);
    return out;
}

// ---------------------------------------------------------------------------
// Invariant and decision

struct LpaInvariant {
    /** Sorted path lengths per sink component. */
    std::vector<std::vector<std::int64_t>> sinks;
    /** (cycle length, sorted path lengths) per cycle component. */
    std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> cycles;
};

inline LpaInvariant lpa_invariant(const StructureData& d) {
    LpaInvariant inv;
    for (auto& s : d.sinks) {
        std::vector<std::int64_t> v;
        for (auto& p : s.paths) v.push_back(static_cast<std::int64_t>(p.length()));
        std::sort(v.begin(), v.end());
        inv.sinks.push_back(v);
    }
    for (auto& c : d.cycles) {
        std::vector<std::int64_t> v;
        for (auto& p : c.paths) v.push_back(static_cast<std::int64_t>(p.length()));
        std::sort(v.begin(), v.end());
        inv.cycles.emplace_back(static_cast<std::int64_t>(c.cycle.length()), v);
    }
    return inv;
}

inline LpaInvariant lpa_invariant(const Graph& g) { return lpa_invariant(structure_data(g)); }

/** Order-unit of K0: sum_j x^{-len_j} per component (cycle components over Z[x]/(x^n - 1)). */
inline std::vector<GroupRingElem> invariant_unit(const LpaInvariant& inv) {
    const auto Z = FGAbelianGroup::free(1);
    std::vector<GroupRingElem> u;
    auto sink_space = make_space(Z, {});
    for (auto& s : inv.sinks) {
        GroupRingElem e(sink_space);
        for (auto d : s) e.add_term({-d}, 1);
        u.push_back(e);
    }
    for (auto& [n, s] : inv.cycles) {
        GroupRingElem e(make_space(Z, {{n}}));
        for (auto d : s) e.add_term({-d}, 1);
        u.push_back(e);
    }
    return u;
}

struct SinkMatch {
    std::size_t first = 0, second = 0;
    /** Lengths of the first component plus shift give the second. */
    std::int64_t shift = 0;
};
struct CycleMatch {
    std::size_t first = 0, second = 0;
    /** Residues of the first component plus rotation give the second, mod n. */
    std::int64_t rotation = 0;
};

struct IsoDecision {
    bool isomorphic = false;
    std::vector<SinkMatch> sinks;
    std::vector<CycleMatch> cycles;
    /** Why no matching exists. */
    std::string obstruction;
};

namespace detail {

inline std::vector<std::int64_t> residue_counts(std::int64_t n, const std::vector<std::int64_t>& lens) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(n), 0);
    for (auto d : lens) ++c[static_cast<std::size_t>(detail::mod_pos(d, n))];
    return c;
}

/** t with a[(r - t) mod n] == b[r] for all r. */
inline std::optional<std::int64_t> rotation_between(const std::vector<std::int64_t>& a,
                                                    const std::vector<std::int64_t>& b) {
    const auto n = static_cast<std::int64_t>(a.size());
    if (a.size() != b.size()) return std::nullopt;
    for (std::int64_t t = 0; t < n; ++t) {
        bool ok = true;
        for (std::int64_t r = 0; r < n && ok; ++r)
            ok = a[static_cast<std::size_t>(detail::mod_pos(r - t, n))] == b[static_cast<std::size_t>(r)];
        if (ok) return t;
    }
    return std::nullopt;
}

inline std::string multiset_string(const std::vector<std::int64_t>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

}  // namespace detail

/** Matches sink components up to a uniform length shift and cycle components of equal
 *  length up to a rotation of residues. */
inline IsoDecision decide_graded_iso(const LpaInvariant& A, const LpaInvariant& B) {
    IsoDecision d;
    if (A.sinks.size() != B.sinks.size()) {
        d.obstruction = "sink component counts differ (" + std::to_string(A.sinks.size()) + " vs " +
                        std::to_string(B.sinks.size()) + ")";
        return d;
    }
    if (A.cycles.size() != B.cycles.size()) {
        d.obstruction = "cycle component counts differ (" + std::to_string(A.cycles.size()) + " vs " +
                        std::to_string(B.cycles.size()) + ")";
        return d;
    }
    std::vector<bool> used(B.sinks.size(), false);
    for (std::size_t a = 0; a < A.sinks.size(); ++a) {
        bool found = false;
        for (std::size_t b = 0; b < B.sinks.size() && !found; ++b) {
            if (used[b] || A.sinks[a].size() != B.sinks[b].size()) continue;
            const auto t = B.sinks[b].front() - A.sinks[a].front();
            bool ok = true;
            for (std::size_t k = 0; k < A.sinks[a].size() && ok; ++k) ok = A.sinks[a][k] + t == B.sinks[b][k];
            if (ok) {
                used[b] = found = true;
                d.sinks.push_back({a, b, t});
            }
        }
        if (!found) {
            d.obstruction = "sink component " + std::to_string(a + 1) + " with lengths " +
                            detail::multiset_string(A.sinks[a]) + " has no shifted copy in the second graph";
            d.sinks.clear();
            return d;
        }
    }
    used.assign(B.cycles.size(), false);
    for (std::size_t a = 0; a < A.cycles.size(); ++a) {
        const auto& [n, lens] = A.cycles[a];
        const auto ca = detail::residue_counts(n, lens);
        bool found = false;
        for (std::size_t b = 0; b < B.cycles.size() && !found; ++b) {
            if (used[b] || B.cycles[b].first != n) continue;
            if (auto t = detail::rotation_between(ca, detail::residue_counts(n, B.cycles[b].second))) {
                used[b] = found = true;
                d.cycles.push_back({a, b, *t});
            }
        }
        if (!found) {
            d.obstruction = "cycle component " + std::to_string(a + 1) + " (length " + std::to_string(n) +
                            ", lengths " + detail::multiset_string(lens) +
                            ") has no rotated copy in the second graph";
            d.sinks.clear();
            d.cycles.clear();
            return d;
        }
    }
    d.isomorphic = true;
    return d;
}

inline IsoDecision decide_graded_iso(const Graph& g1, const Graph& g2) {
    return decide_graded_iso(lpa_invariant(g1), lpa_invariant(g2));
}

}  // namespace grk
