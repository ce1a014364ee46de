#pragma once
// Reference computations used by the tests. Everything here is written against
// plain integers and maps so that it does not share code paths with the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grk/grk.hpp"

namespace oracle {

using grk::Vec;

/** Reduce v modulo the torsion moduli of the ambient group (free coordinates first). */
inline Vec ambient_reduce(const grk::FGAbelianGroup& G, Vec v) {
    for (std::size_t i = 0; i < G.torsion_moduli().size(); ++i) {
        auto& x = v[G.free_rank() + i];
        const auto m = G.torsion_moduli()[i];
        x = ((x % m) + m) % m;
    }
    return v;
}

inline bool is_zero_in(const grk::FGAbelianGroup& G, const Vec& v) {
    auto r = ambient_reduce(G, v);
    return std::all_of(r.begin(), r.end(), [](auto x) { return x == 0; });
}

/** v in <gens> by trying every coefficient vector in [-bound, bound]^k. */
inline bool member(const grk::FGAbelianGroup& G, const std::vector<Vec>& gens, const Vec& v, int bound = 8) {
    std::vector<int> c(gens.size(), -bound);
    for (;;) {
        Vec w(v);
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t d = 0; d < w.size(); ++d) w[d] -= c[i] * gens[i][d];
        if (is_zero_in(G, w)) return true;
        std::size_t i = 0;
        while (i < c.size() && ++c[i] > bound) c[i++] = -bound;
        if (i == c.size()) return false;
    }
}

/** Dense model of Z[Z/n]: coefficient vector indexed by residue. */
inline std::vector<std::int64_t> cyclic_mul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    const auto n = a.size();
    std::vector<std::int64_t> r(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[(i + j) % n] += a[i] * b[j];
    return r;
}

/** Laurent polynomial keyed by exponent, optionally reduced mod x^n - 1. */
using Laurent = std::map<std::int64_t, std::int64_t>;

inline Laurent laurent_reduce(const Laurent& p, std::int64_t n) {
    Laurent r;
    for (auto& [e, c] : p) {
        const auto k = n ? ((e % n) + n) % n : e;
        r[k] += c;
    }
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

inline Laurent laurent_shift(const Laurent& p, std::int64_t k, std::int64_t sign, std::int64_t n) {
    Laurent r;
    for (auto& [e, c] : p) r[e + k] += sign * c;
    return laurent_reduce(r, n);
}

inline bool laurent_leq(const Laurent& a, const Laurent& b, std::int64_t n) {
    Laurent d = b;
    for (auto& [e, c] : a) d[e] -= c;
    for (auto& [e, c] : laurent_reduce(d, n))
        if (c < 0) return false;
    return true;
}

inline bool laurent_nonneg(const Laurent& a, std::int64_t n) { return laurent_leq({}, a, n); }

inline Laurent unit_of_lengths(const std::vector<std::int64_t>& lens, std::int64_t n) {
    Laurent u;
    for (auto d : lens) u[-d] += 1;
    return laurent_reduce(u, n);
}

/** Brute-force search for a contractive module isomorphism in both directions.
 *  Components are matched by a bijection; each matched pair gets a candidate
 *  automorphism +-x^k, kept only when it is positive on the units. Sinks are copies of Z[x, x^-1], a cycle of length n is
 *  Z[x]/(x^n - 1). */
inline bool contractive_iso_exists(const grk::LpaInvariant& A, const grk::LpaInvariant& B, std::int64_t window = 16) {
    struct Comp {
        std::int64_t n;  // 0 for a sink
        Laurent unit;
    };
    auto comps = [](const grk::LpaInvariant& I) {
        std::vector<Comp> v;
        for (auto& s : I.sinks) v.push_back({0, unit_of_lengths(s, 0)});
        for (auto& [n, s] : I.cycles) v.push_back({n, unit_of_lengths(s, n)});
        return v;
    };
    const auto a = comps(A), b = comps(B);
    if (a.size() != b.size()) return false;
    auto pair_ok = [&](const Comp& x, const Comp& y) {
        if (x.n != y.n) return false;
        const std::int64_t lo = x.n ? 0 : -window, hi = x.n ? x.n - 1 : window;
        for (std::int64_t sign : {1, -1})
            for (std::int64_t k = lo; k <= hi; ++k) {
                // f = sign x^k, f^-1 = sign x^-k; both must send the units to positive elements
                const auto fx = laurent_shift(x.unit, k, sign, x.n), gy = laurent_shift(y.unit, -k, sign, x.n);
                if (laurent_nonneg(fx, x.n) && laurent_nonneg(gy, x.n) && laurent_leq(fx, y.unit, x.n) &&
                    laurent_leq(gy, x.unit, x.n))
                    return true;
            }
        return false;
    };
    std::vector<std::size_t> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) ok = pair_ok(a[i], b[perm[i]]);
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// ---------------------------------------------------------------------------
// Small graphs

struct SmallGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // sorted
};

inline bool no_exit(const SmallGraph& g) {
    // v lies on a cycle iff v reaches itself through at least one edge
    std::vector<std::vector<int>> out(g.n);
    for (auto& [u, v] : g.edges) out[u].push_back(v);
    for (int v = 0; v < g.n; ++v) {
        std::vector<bool> seen(g.n, false);
        std::vector<int> stack(out[v].begin(), out[v].end());
        bool cyc = false;
        while (!stack.empty() && !cyc) {
            int w = stack.back();
            stack.pop_back();
            if (w == v) cyc = true;
            if (seen[w]) continue;
            seen[w] = true;
            for (int x : out[w]) stack.push_back(x);
        }
        if (cyc && out[v].size() != 1) return false;
    }
    return true;
}

inline std::vector<std::pair<int, int>> canonical(const SmallGraph& g) {
    std::vector<int> p(g.n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::pair<int, int>> best;
    bool first = true;
    do {
        std::vector<std::pair<int, int>> e;
        for (auto& [u, v] : g.edges) e.emplace_back(p[u], p[v]);
        std::sort(e.begin(), e.end());
        if (first || e < best) best = e, first = false;
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

/** All no-exit graphs with 1..max_v vertices and at most max_e edges, one per isomorphism class. */
inline std::vector<SmallGraph> enumerate_no_exit(int max_v, int max_e) {
    std::vector<SmallGraph> out;
    for (int n = 1; n <= max_v; ++n) {
        std::set<std::vector<std::pair<int, int>>> seen;
        std::vector<std::pair<int, int>> pairs;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) pairs.emplace_back(u, v);
        SmallGraph g{n, {}};
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            if (no_exit(g)) {
                auto c = canonical(g);
                if (seen.insert(c).second) out.push_back({n, c});
            } else {
                // adding edges cannot remove an exit
                return;
            }
            if (static_cast<int>(g.edges.size()) == max_e) return;
            for (std::size_t i = from; i < pairs.size(); ++i) {
                g.edges.push_back(pairs[i]);
                rec(i);  // multigraph: the same pair may repeat
                g.edges.pop_back();
            }
        };
        rec(0);
    }
    return out;
}

inline grk::Graph to_graph(const SmallGraph& s) {
    grk::Graph g;
    for (int v = 0; v < s.n; ++v) g.add_vertex("v" + std::to_string(v));
    for (std::size_t e = 0; e < s.edges.size(); ++e)
        g.add_edge("e" + std::to_string(e), static_cast<std::size_t>(s.edges[e].first),
                   static_cast<std::size_t>(s.edges[e].second));
    return g;
}

// ---------------------------------------------------------------------------
// K0 of a homomorphism by direct counting

/** Monomial maps only. Column i: count the diagonal ones of phi(e^i_11) per target
 *  row, weight each by x^{g^i_1 - delta_r}, and reduce modulo the support. */
template <class F>
grk::KHomMatrix k0_by_counting(const grk::ExplicitHom<F>& h) {
    const auto& R = h.source;
    const auto& S = h.target;
    const auto& G = R.field()->grading();
    const auto& sp = R.field()->support;
    std::vector<std::vector<grk::GroupRingElem>> e(S.num_blocks(),
                                                   std::vector<grk::GroupRingElem>(R.num_blocks(), grk::GroupRingElem(sp)));
    for (std::size_t i = 0; i < R.num_blocks(); ++i) {
        const auto& img = h.images[i][0];
        for (std::size_t j = 0; j < S.num_blocks(); ++j)
            for (std::size_t r = 0; r < S.block_size(j); ++r) {
                const auto c = img.blocks[j].get(r, r);
                if (grk::ScalarOps<F>::is_zero(c)) continue;
                Vec d(G.dim());
                for (std::size_t k = 0; k < d.size(); ++k) d[k] = R.shifts(i)[0][k] - S.shifts(j)[r][k];
                e[j][i].add_term(d, 1);
            }
    }
    return grk::make_khom(grk::k0_module(R), grk::k0_module(S), std::move(e));
}

}  // namespace oracle
