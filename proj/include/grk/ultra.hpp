#pragma once
/** @file ultra.hpp
 *  @brief Chains R_0 -> R_1 -> ... of matricial algebras, their colimit K0,
 *  bounded stage searches and the back-and-forth intertwining of two chains.
 */

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grk/faithful.hpp"

namespace grk {

struct StageBudget {
    /** Largest stage index any search may visit. */
    std::size_t max_stage = 64;
};

/** Lazily generated chain. Stages and connecting maps are cached on first use;
 *  the cache only grows, and every access holds one lock. */
template <StarScalar F>
class Chain {
public:
    using AlgebraGen = std::function<MatricialAlgebra<F>(std::size_t)>;
    /** n, R_n, R_{n+1} -> phi_{n,n+1} */
    using MapGen = std::function<ExplicitHom<F>(std::size_t, const MatricialAlgebra<F>&, const MatricialAlgebra<F>&)>;
    /** Optional shortcut for K0(phi_{n,n+1}); must agree with k0_of_hom of the map. */
    using KMapGen = std::function<KHomMatrix(std::size_t, const K0Module&, const K0Module&)>;

    Chain(std::string name, AlgebraGen algebras, MapGen maps, std::optional<std::size_t> length = std::nullopt,
          KMapGen kmaps = {})
        : name_(std::move(name)),
          alg_gen_(std::move(algebras)),
          map_gen_(std::move(maps)),
          kmap_gen_(std::move(kmaps)),
          length_(length) {
        if (length_ && *length_ == 0) throw Error("a chain needs at least one stage");
    }
    Chain(const Chain&) = delete;
    Chain& operator=(const Chain&) = delete;

    /** Chain with explicitly listed stages; maps.size() must be stages.size() - 1. */
    static std::shared_ptr<Chain> finite(std::string name, std::vector<MatricialAlgebra<F>> stages,
                                         std::vector<ExplicitHom<F>> maps) {
        if (stages.empty() || maps.size() + 1 != stages.size())
            throw ShapeMismatch("a finite chain with N stages needs N-1 connecting maps");
        for (std::size_t n = 0; n < maps.size(); ++n)
            if (!(maps[n].source == stages[n]) || !(maps[n].target == stages[n + 1]))
                throw ShapeMismatch("connecting map " + std::to_string(n) + " does not go from stage " +
                                    std::to_string(n) + " to stage " + std::to_string(n + 1));
        const auto len = stages.size();
        auto st = std::make_shared<std::vector<MatricialAlgebra<F>>>(std::move(stages));
        auto mp = std::make_shared<std::vector<ExplicitHom<F>>>(std::move(maps));
        return std::make_shared<Chain>(
            std::move(name), [st](std::size_t n) { return st->at(n); },
            [mp](std::size_t n, const MatricialAlgebra<F>&, const MatricialAlgebra<F>&) { return mp->at(n); }, len);
    }

    const std::string& name() const { return name_; }
    std::optional<std::size_t> length() const { return length_; }
    bool has_stage(std::size_t n) const { return !length_ || n < *length_; }

    const MatricialAlgebra<F>& algebra(std::size_t n) const {
        std::lock_guard lock(mu_);
        require(n);
        auto& slot = algebras_[n];
        if (!slot) slot = std::make_unique<MatricialAlgebra<F>>(alg_gen_(n));
        return *slot;
    }

    /** phi_{n,n+1} */
    const ExplicitHom<F>& map(std::size_t n) const {
        std::lock_guard lock(mu_);
        require(n + 1);
        auto& slot = maps_[n];
        if (!slot) {
            auto h = map_gen_(n, algebra(n), algebra(n + 1));
            if (!(h.source == algebra(n)) || !(h.target == algebra(n + 1)))
                throw ShapeMismatch("connecting map " + std::to_string(n) + " has the wrong source or target");
            slot = std::make_unique<ExplicitHom<F>>(std::move(h));
        }
        return *slot;
    }

    /** phi_{n,m} for n <= m. */
    ExplicitHom<F> map(std::size_t n, std::size_t m) const {
        if (m < n) throw IndexOutOfRange("phi_{n,m} needs n <= m");
        if (m == n) return identity_hom(algebra(n));
        ExplicitHom<F> h = map(n);
        for (std::size_t s = n + 1; s < m; ++s) h = compose(map(s), h);
        return h;
    }

    K0Module k0(std::size_t n) const { return k0_module(algebra(n)); }

    const KHomMatrix& k0_map(std::size_t n) const {
        std::lock_guard lock(mu_);
        auto& slot = kmaps_[n];
        if (!slot) {
            if (kmap_gen_) slot = std::make_unique<KHomMatrix>(kmap_gen_(n, k0(n), k0(n + 1)));
            else slot = std::make_unique<KHomMatrix>(k0_of_hom(map(n)));
        }
        return *slot;
    }

    /** K0(phi_{n,m}) */
    KHomMatrix k0_map(std::size_t n, std::size_t m) const {
        if (m < n) throw IndexOutOfRange("K0(phi_{n,m}) needs n <= m");
        KHomMatrix f = identity_khom(k0(n));
        for (std::size_t s = n; s < m; ++s) f = compose(k0_map(s), f);
        return f;
    }

private:
    void require(std::size_t n) const {
        if (!has_stage(n))
            throw BudgetExhausted("chain '" + name_ + "' has only " + std::to_string(*length_) + " stages");
    }

    std::string name_;
    AlgebraGen alg_gen_;
    MapGen map_gen_;
    KMapGen kmap_gen_;
    std::optional<std::size_t> length_;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::size_t, std::unique_ptr<MatricialAlgebra<F>>> algebras_;
    mutable std::map<std::size_t, std::unique_ptr<ExplicitHom<F>>> maps_;
    mutable std::map<std::size_t, std::unique_ptr<KHomMatrix>> kmaps_;
};

template <StarScalar F>
using ChainPtr = std::shared_ptr<const Chain<F>>;

namespace detail {

template <StarScalar F>
FieldPtr<F> integer_graded_trivial_field(const BaseStarField<F>& base) {
    return make_field(base, FGAbelianGroup::free(1), {});
}

inline KHomMatrix scalar_khom(const K0Module& src, const K0Module& tgt, const GroupRingElem& c) {
    auto f = zero_khom(src, tgt);
    f.entries[0][0] = c;
    return f;
}

}  // namespace detail

/** R_n = M_{2^n}(K) over Z with shifts g_0 = (0), g_{n+1} = (g_n, g_n + 1) and
 *  phi_n(x) = diag(x, x). The reversed variant lists every shift vector backwards,
 *  g_{n+1} = (g_n + 1, g_n), which is the same chain conjugated by the reversal
 *  permutations. K0(phi_n) = 1 + x^-1 either way. */
template <StarScalar F>
std::shared_ptr<Chain<F>> corner_doubling_chain(const BaseStarField<F>& base, bool reversed = false) {
    auto A = detail::integer_graded_trivial_field(base);
    auto shifts = [reversed](std::size_t n) {
        std::vector<Vec> g{{0}};
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<Vec> next;
            auto up = g;
            for (auto& v : up) v[0] += 1;
            auto& first = reversed ? up : g;
            auto& second = reversed ? g : up;
            next.insert(next.end(), first.begin(), first.end());
            next.insert(next.end(), second.begin(), second.end());
            g = std::move(next);
        }
        return g;
    };
    auto alg = [A, shifts](std::size_t n) { return MatricialAlgebra<F>(A, {shifts(n)}); };
    auto map = [](std::size_t, const MatricialAlgebra<F>& R, const MatricialAlgebra<F>& S) {
        const auto p = R.block_size(0);
        const auto& G = R.field()->grading();
        ExplicitHom<F> h{R, S, {{}}};
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < p; ++l) {
                auto x = zero_element(S, G.sub(R.shifts(0)[k], R.shifts(0)[l]));
                x.blocks[0].set(k, l, R.field()->base.one());
                x.blocks[0].set(k + p, l + p, R.field()->base.one());
                h.images[0].push_back(std::move(x));
            }
        return h;
    };
    auto kmap = [](std::size_t, const K0Module& src, const K0Module& tgt) {
        return detail::scalar_khom(src, tgt,
                                   GroupRingElem::constant(src.space, 1) + GroupRingElem::monomial(src.space, {-1}));
    };
    return std::make_shared<Chain<F>>(reversed ? "corner-doubling-reversed" : "corner-doubling", alg, map,
                                      std::nullopt, kmap);
}

/** Stage n = M_{n+1}(K)(first n+1 shifts of the multiset), connected by corner inclusion. */
template <StarScalar F>
std::shared_ptr<Chain<F>> truncation_chain(const BaseStarField<F>& base, const OmegaShiftMultiset& shifts,
                                           std::string name) {
    auto A = detail::integer_graded_trivial_field(base);
    auto alg = [A, shifts](std::size_t n) {
        std::vector<Vec> g;
        for (auto d : shifts.truncate(n + 1)) g.push_back({d});
        return MatricialAlgebra<F>(A, {g});
    };
    auto map = [](std::size_t, const MatricialAlgebra<F>& R, const MatricialAlgebra<F>& S) {
        const auto p = R.block_size(0);
        const auto& G = R.field()->grading();
        ExplicitHom<F> h{R, S, {{}}};
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < p; ++l) {
                auto x = zero_element(S, G.sub(R.shifts(0)[k], R.shifts(0)[l]));
                x.blocks[0].set(k, l, R.field()->base.one());
                h.images[0].push_back(std::move(x));
            }
        return h;
    };
    auto kmap = [](std::size_t, const K0Module& src, const K0Module& tgt) {
        return detail::scalar_khom(src, tgt, GroupRingElem::constant(src.space, 1));
    };
    return std::make_shared<Chain<F>>(std::move(name), alg, map, std::nullopt, kmap);
}

/** M_{n+1}(K)(0, 1, ..., n) */
template <StarScalar F>
std::shared_ptr<Chain<F>> line_truncation_chain(const BaseStarField<F>& base) {
    return truncation_chain(base, OmegaShiftMultiset::line(), "line-truncation");
}

/** M_{n+1}(K)(0, 1, ..., 1) */
template <StarScalar F>
std::shared_ptr<Chain<F>> clock_truncation_chain(const BaseStarField<F>& base) {
    return truncation_chain(base, OmegaShiftMultiset::clock(), "clock-truncation");
}

// ---------------------------------------------------------------------------
// Colimit K0

struct ColimitK0Elem {
    std::size_t stage = 0;
    K0Elem value;
};

template <StarScalar F>
K0Elem push_forward(const Chain<F>& chain, const ColimitK0Elem& e, std::size_t m) {
    if (m < e.stage)
        throw IndexOutOfRange("cannot push from stage " + std::to_string(e.stage) + " back to stage " +
                              std::to_string(m));
    K0Elem v = e.value;
    for (std::size_t s = e.stage; s < m; ++s) v = chain.k0_map(s).apply(v);
    return v;
}

/** Smallest m >= n, m <= budget, at which every element pushes to zero. */
template <StarScalar F>
std::size_t stage_search_zero(const Chain<F>& chain, std::size_t n, std::vector<K0Elem> elems,
                              StageBudget budget = {}) {
    for (std::size_t m = n; m <= budget.max_stage && chain.has_stage(m); ++m) {
        if (std::all_of(elems.begin(), elems.end(), [](auto& v) { return v.is_zero(); })) return m;
        if (m == budget.max_stage || !chain.has_stage(m + 1)) break;
        for (auto& v : elems) v = chain.k0_map(m).apply(v);
    }
    throw BudgetExhausted("elements did not vanish by stage " + std::to_string(budget.max_stage));
}

/** First stage at which a and b agree. */
template <StarScalar F>
std::size_t colimit_equal_stage(const Chain<F>& chain, const ColimitK0Elem& a, const ColimitK0Elem& b,
                                StageBudget budget = {}) {
    const auto s = std::max(a.stage, b.stage);
    return stage_search_zero(chain, s, {push_forward(chain, a, s) - push_forward(chain, b, s)}, budget);
}

/** A map K0(R) -> K0(S_stage), read as a map into the colimit. */
struct ColimitKHom {
    std::size_t stage = 0;
    KHomMatrix map;
};

template <StarScalar F>
struct StageFactorization {
    std::size_t stage = 0;
    GradedHomSpec<F> spec;
};

/** Smallest m with K0(psi_{stage,m}) f contractive, and a synthesized R -> S_m realizing it. */
template <StarScalar F>
StageFactorization<F> factor_through_stage(const MatricialAlgebra<F>& R, const Chain<F>& S, const ColimitKHom& f,
                                           StageBudget budget = {}, const SynthesisOptions& opt = {}) {
    if (f.map.source.rank != k0_module(R).rank || f.map.target.rank != S.k0(f.stage).rank)
        throw ShapeMismatch("K-hom does not go from K0(R) to K0 of the given stage");
    bool ever_positive = false;
    KHomMatrix g = f.map;
    std::size_t m = f.stage;
    for (;;) {
        if (is_order_preserving(g)) {
            ever_positive = true;
            if (is_contractive(g)) return {m, synthesize(g, R, S.algebra(m), opt)};
        }
        if (m == budget.max_stage || !S.has_stage(m + 1)) break;
        g = compose(S.k0_map(m), g);
        ++m;
    }
    if (!ever_positive || !S.has_stage(m + 1))
        throw NotContractive("no stage up to " + std::to_string(m) + " receives f contractively");
    throw BudgetExhausted("f is not contractive at any stage up to " + std::to_string(budget.max_stage));
}

// ---------------------------------------------------------------------------
// Back-and-forth intertwining

/** Stage-wise K-theory data: n -> map K0(A_n) -> K0(B_n). */
using StageKHom = std::function<KHomMatrix(std::size_t)>;

template <StarScalar F>
StageKHom identity_stage_khom(ChainPtr<F> A, ChainPtr<F> B) {
    return [A, B](std::size_t n) {
        const auto src = A->k0(n), tgt = B->k0(n);
        if (src.rank != tgt.rank) throw ShapeMismatch("identity stage data needs equal block counts");
        auto f = zero_khom(src, tgt);
        for (std::size_t i = 0; i < src.rank; ++i) f.entries[i][i] = GroupRingElem::constant(src.space, 1);
        return f;
    };
}

/** The same matrix of group-ring elements at every stage. */
template <StarScalar F>
StageKHom constant_stage_khom(ChainPtr<F> A, ChainPtr<F> B, std::vector<std::vector<std::string>> entries) {
    return [A, B, entries](std::size_t n) {
        const auto src = A->k0(n), tgt = B->k0(n);
        std::vector<std::vector<GroupRingElem>> e;
        for (auto& row : entries) {
            e.emplace_back();
            for (auto& s : row) e.back().push_back(GroupRingElem::parse(s, src.space));
        }
        return make_khom(src, tgt, std::move(e));
    };
}

template <StarScalar F>
struct IntertwiningTranscript {
    /** n(1..k+1) and m(1..k+1), stored 0-based. */
    std::vector<std::size_t> n, m;
    /** rho_i : R_{n(i)} -> S_{m(i)}, i = 1..k+1 */
    std::vector<ExplicitHom<F>> rho;
    /** sigma_i : S_{m(i)} -> R_{n(i+1)}, i = 1..k */
    std::vector<ExplicitHom<F>> sigma;
    /** Degree-zero unitaries applied to the synthesized maps (identity for rho_1). */
    std::vector<Homogeneous<F>> rho_correction, sigma_correction;

    std::size_t depth() const { return sigma.size(); }
};

struct RelationCheck {
    bool sigma_rho = false;    // sigma_i rho_i = phi_{n(i) n(i+1)}
    bool rho_sigma = false;    // rho_{i+1} sigma_i = psi_{m(i) m(i+1)}
    bool k_rho = false;        // K0(rho_i) = K0(psi_{n(i) m(i)}) F_{n(i)}
    bool k_sigma = false;      // K0(sigma_i) = K0(phi_{m(i) n(i+1)}) G_{m(i)}
    bool all() const { return sigma_rho && rho_sigma && k_rho && k_sigma; }
};

namespace detail {

/** Checks F_{n+1} K0(phi_n) = K0(psi_n) F_n and the same for G, stage by stage. */
template <StarScalar F>
class StageDataChecker {
public:
    StageDataChecker(const Chain<F>& R, const Chain<F>& S, const StageKHom& f, const StageKHom& g)
        : R_(R), S_(S), f_(f), g_(g) {}

    void ensure(std::size_t upto) {
        for (; checked_ <= upto; ++checked_) {
            const auto n = checked_;
            const auto fn = f_(n), gn = g_(n);
            if (fn.cols() != R_.k0(n).rank || fn.rows() != S_.k0(n).rank)
                throw KHomInconsistent("F_" + std::to_string(n) + " has the wrong shape");
            if (gn.cols() != S_.k0(n).rank || gn.rows() != R_.k0(n).rank)
                throw KHomInconsistent("G_" + std::to_string(n) + " has the wrong shape");
            if (n == 0) continue;
            if (!(compose(fn, R_.k0_map(n - 1)) == compose(S_.k0_map(n - 1), f_(n - 1))))
                throw KHomInconsistent("F does not commute with the connecting maps at stage " +
                                       std::to_string(n - 1));
            if (!(compose(gn, S_.k0_map(n - 1)) == compose(R_.k0_map(n - 1), g_(n - 1))))
                throw KHomInconsistent("G does not commute with the connecting maps at stage " +
                                       std::to_string(n - 1));
        }
    }

private:
    const Chain<F>& R_;
    const Chain<F>& S_;
    const StageKHom& f_;
    const StageKHom& g_;
    std::size_t checked_ = 0;
};

template <StarScalar F>
struct StepResult {
    std::size_t stage;
    ExplicitHom<F> map;
    Homogeneous<F> correction;
};

/** A map A_a -> B_b with b >= lo, K0 equal to K0(B_{a,b}) D_a, and, when prev : B_p -> A_a
 *  is given, composing with prev to exactly the connecting map B_{p,b}. */
template <StarScalar F>
StepResult<F> intertwining_step(const Chain<F>& A, const Chain<F>& B, const StageKHom& D, std::size_t a,
                                std::size_t lo, const ExplicitHom<F>* prev, std::size_t p, StageBudget budget,
                                StageDataChecker<F>& chk, const std::string& label) {
    chk.ensure(std::max(a, p));
    const auto Da = D(a);
    KHomMatrix pushed = Da;
    std::size_t b = a;
    std::optional<KHomMatrix> kprev;
    if (prev) kprev = k0_of_hom(*prev);
    for (; b < lo; ++b) pushed = compose(B.k0_map(b), pushed);
    for (;; ++b) {
        if (b > budget.max_stage || !B.has_stage(b))
            throw BudgetExhausted(label + ": no stage up to " + std::to_string(budget.max_stage) +
                                  " closes the square");
        if (b > lo) pushed = compose(B.k0_map(b - 1), pushed);
        if (!is_contractive(pushed)) continue;
        if (kprev && !(compose(pushed, *kprev) == B.k0_map(p, b))) continue;
        break;
    }
    auto cand = evaluate_hom(synthesize(pushed, A.algebra(a), B.algebra(b)));
    if (!prev) return {b, std::move(cand), unit_element(B.algebra(b))};
    const auto target = B.map(p, b);
    const auto c = compose(cand, *prev);
    auto theta = unitary_completion(build_intertwiner(target, c), target, c);
    return {b, conjugate(theta, cand), std::move(theta)};
}

}  // namespace detail

template <StarScalar F>
std::vector<RelationCheck> verify_transcript(const IntertwiningTranscript<F>& t, const Chain<F>& R,
                                             const Chain<F>& S, const StageKHom& f, const StageKHom& g) {
    std::vector<RelationCheck> out;
    for (std::size_t i = 0; i < t.depth(); ++i) {
        RelationCheck r;
        r.sigma_rho = compose(t.sigma[i], t.rho[i]) == R.map(t.n[i], t.n[i + 1]);
        r.rho_sigma = compose(t.rho[i + 1], t.sigma[i]) == S.map(t.m[i], t.m[i + 1]);
        r.k_rho = k0_of_hom(t.rho[i]) == compose(S.k0_map(t.n[i], t.m[i]), f(t.n[i]));
        r.k_sigma = k0_of_hom(t.sigma[i]) == compose(R.k0_map(t.m[i], t.n[i + 1]), g(t.m[i]));
        out.push_back(r);
    }
    return out;
}

/** Builds rho_1, sigma_1, rho_2, ..., sigma_k, rho_{k+1} from stage data F_n : K0(R_n) -> K0(S_n)
 *  and G_n : K0(S_n) -> K0(R_n) describing mutually inverse colimit maps. */
template <StarScalar F>
IntertwiningTranscript<F> elliott_intertwine(const Chain<F>& R, const Chain<F>& S, const StageKHom& f,
                                             const StageKHom& g, std::size_t rounds, StageBudget budget = {}) {
    detail::StageDataChecker<F> chk(R, S, f, g);
    IntertwiningTranscript<F> t;
    auto first = detail::intertwining_step<F>(R, S, f, 0, 0, nullptr, 0, budget, chk, "rho_1");
    t.n.push_back(0);
    t.m.push_back(first.stage);
    t.rho.push_back(std::move(first.map));
    t.rho_correction.push_back(std::move(first.correction));
    for (std::size_t i = 0; i < rounds; ++i) {
        const auto ni = t.n[i], mi = t.m[i];
        auto sg = detail::intertwining_step<F>(S, R, g, mi, std::max(ni + 1, mi), &t.rho[i], ni, budget, chk,
                                            "sigma_" + std::to_string(i + 1));
        t.n.push_back(sg.stage);
        t.sigma.push_back(std::move(sg.map));
        t.sigma_correction.push_back(std::move(sg.correction));
        auto rh = detail::intertwining_step<F>(R, S, f, sg.stage, std::max(mi + 1, sg.stage), &t.sigma[i], mi,
                                            budget, chk, "rho_" + std::to_string(i + 2));
        t.m.push_back(rh.stage);
        t.rho.push_back(std::move(rh.map));
        t.rho_correction.push_back(std::move(rh.correction));
    }
    return t;
}

}  // namespace grk
