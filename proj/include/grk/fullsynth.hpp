#pragma once
/** @file fullsynth.hpp
 *  @brief From a contractive K-homomorphism f between matricial algebras,
 *  build an explicit graded *-homomorphism phi with K0(phi) = f.
 *
 *  For target block j the source data is laid out as a list of slots
 *  (i, t, k, s): source block i, coefficient term t of f_ji = sum_t a_t alpha_t,
 *  row k of block i and copy s < a_t. Slot order is the row order of
 *  x (tensor) 1_{a_t} inside (+)_{i,t}, so the shift of slot (i,t,k,s) is
 *  g^i_k - alpha_t. Each slot is placed on a target row whose shift lies in
 *  the same coset of G_A; the remaining target rows stay zero.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "grk/k0gr.hpp"

namespace grk {

struct CoefficientTerm {
    std::int64_t a = 0;
    Vec alpha;
};

/** terms[j][i] lists (a_jit, alpha_jit) for t = 1..k_ji in ascending representative order. */
struct FCoefficients {
    std::vector<std::vector<std::vector<CoefficientTerm>>> terms;

    std::size_t k(std::size_t j, std::size_t i) const { return terms.at(j).at(i).size(); }
};

inline FCoefficients decompose_khom(const KHomMatrix& f) {
    FCoefficients out;
    for (std::size_t j = 0; j < f.rows(); ++j) {
        out.terms.emplace_back();
        for (std::size_t i = 0; i < f.cols(); ++i) {
            out.terms[j].emplace_back();
            for (auto& [g, c] : f.entries[j][i].terms()) {
                if (c < 0)
                    throw NegativeCoefficient("entry (" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                                              ") has coefficient " + std::to_string(c) + " at [" + format_vec(g) + "]");
                out.terms[j][i].push_back({c, g});
            }
        }
    }
    return out;
}

/** One row of (+)_{i,t} x (tensor) 1_{a_t}, indices 0-based. */
struct SlotIndex {
    std::size_t i = 0, t = 0, k = 0, s = 0;
    Vec shift;  ///< g^i_k - alpha_t
    Vec key;    ///< canonical coset of -shift, i.e. the K0 class of the slot
};

namespace detail {

template <StarScalar F>
std::vector<SlotIndex> enumerate_slots(const FCoefficients& c, std::size_t j, const MatricialAlgebra<F>& R) {
    const auto& G = R.field()->grading();
    const auto& sp = R.field()->support;
    std::vector<SlotIndex> out;
    for (std::size_t i = 0; i < R.num_blocks(); ++i)
        for (std::size_t t = 0; t < c.k(j, i); ++t) {
            const auto& term = c.terms[j][i][t];
            for (std::size_t k = 0; k < R.block_size(i); ++k) {
                Vec shift = G.sub(R.shifts(i)[k], term.alpha);
                Vec key = sp->reduce(G.neg(shift));
                for (std::int64_t s = 0; s < term.a; ++s)
                    out.push_back({i, t, k, static_cast<std::size_t>(s), shift, key});
            }
        }
    return out;
}

template <StarScalar F>
void check_khom_against(const KHomMatrix& f, const MatricialAlgebra<F>& R, const MatricialAlgebra<F>& S) {
    if (f.cols() != R.num_blocks() || f.rows() != S.num_blocks())
        throw ShapeMismatch("K-hom is " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                            " but the algebras have " + std::to_string(S.num_blocks()) + " and " +
                            std::to_string(R.num_blocks()) + " blocks");
    if (!same_field(R.field(), S.field())) throw SpaceMismatch("source and target use different graded fields");
    for (auto& row : f.entries)
        for (auto& x : row)
            if (!x.is_zero() && !same_space(x.space(), R.field()->support))
                throw SpaceMismatch("K-hom entries are not over Z[G/G_A] of the algebras");
}

}  // namespace detail

struct DimensionReport {
    struct Block {
        std::vector<SlotIndex> slots;     ///< S_j
        std::int64_t N = 0;               ///< |S_j| = sum a_jit p(i)
        std::int64_t q = 0;               ///< target block size
        std::vector<Vec> classes;         ///< distinct cosets -delta of the target shifts
        std::vector<std::int64_t> N_class;  ///< N_jj'
        std::vector<std::int64_t> s_class;  ///< s^j_j'
        std::vector<std::size_t> unmatched;  ///< slots whose coset is no target class
        bool coset_equations = true;
        bool dimension_formulas = true;
        bool predimension = true;
        bool equality = true;
    };
    std::vector<Block> blocks;
    bool coset_equations = true;
    bool dimension_formulas = true;
    bool predimension = true;
    bool equalities = true;
};

/** Evaluates the three formula families. The pre-dimension formulas are read off
 *  f([1_R]) <= [1_S] in group-ring arithmetic; the coset equations and dimension
 *  formulas come from the slot census. */
template <StarScalar F>
DimensionReport dimension_report(const KHomMatrix& f, const MatricialAlgebra<F>& R, const MatricialAlgebra<F>& S) {
    detail::check_khom_against(f, R, S);
    const auto coeffs = decompose_khom(f);
    const auto& G = S.field()->grading();
    const auto& sp = S.field()->support;
    const auto image_unit = f.apply(unit_class(R));
    const auto target_unit = unit_class(S);
    DimensionReport rep;
    for (std::size_t j = 0; j < S.num_blocks(); ++j) {
        DimensionReport::Block b;
        b.slots = detail::enumerate_slots(coeffs, j, R);
        b.N = static_cast<std::int64_t>(b.slots.size());
        b.q = static_cast<std::int64_t>(S.block_size(j));
        std::map<Vec, std::int64_t> target_count;
        for (auto& d : S.shifts(j)) ++target_count[sp->reduce(G.neg(d))];
        std::map<Vec, std::int64_t> slot_count;
        for (std::size_t x = 0; x < b.slots.size(); ++x) {
            if (!target_count.count(b.slots[x].key)) b.unmatched.push_back(x);
            else ++slot_count[b.slots[x].key];
        }
        for (auto& [key, s] : target_count) {
            b.classes.push_back(key);
            b.s_class.push_back(s);
            b.N_class.push_back(slot_count[key]);
        }
        b.coset_equations = b.unmatched.empty();
        for (std::size_t c = 0; c < b.classes.size(); ++c)
            if (b.N_class[c] > b.s_class[c]) b.dimension_formulas = false;
        const auto gap = target_unit.coords[j] - image_unit.coords[j];
        b.predimension = gap.is_nonnegative();
        b.equality = gap.is_zero();
        rep.coset_equations = rep.coset_equations && b.coset_equations;
        rep.dimension_formulas = rep.dimension_formulas && b.dimension_formulas;
        rep.predimension = rep.predimension && b.predimension;
        rep.equalities = rep.equalities && b.equality;
        rep.blocks.push_back(std::move(b));
    }
    return rep;
}

struct Slot {
    std::size_t source_block = 0, term = 0, row = 0, copy = 0;
    Vec alpha;
    std::size_t target = 0;  ///< target row index (0-based)
    Vec epsilon;             ///< target shift - slot shift, an element of G_A
};

struct TargetBlockPlan {
    std::vector<Slot> slots;
    /** One-line placement: rho[x] is the target row of slot x for x < N; the
     *  remaining entries extend it to a permutation of the target rows. */
    std::vector<std::size_t> rho;
    std::size_t padding = 0;
};

template <StarScalar F>
struct GradedHomSpec {
    MatricialAlgebra<F> source, target;
    FCoefficients coefficients;
    std::vector<TargetBlockPlan> blocks;

    bool is_unital() const {
        return std::all_of(blocks.begin(), blocks.end(), [](auto& b) { return b.padding == 0; });
    }
};

struct SynthesisOptions {
    /** When set, compatible target rows and the complement order are chosen at random. */
    std::optional<std::uint64_t> seed;
};

template <StarScalar F>
GradedHomSpec<F> synthesize(const KHomMatrix& f, const MatricialAlgebra<F>& R, const MatricialAlgebra<F>& S,
                            const SynthesisOptions& opt = {}) {
    detail::check_khom_against(f, R, S);
    if (!is_order_preserving(f)) throw NotOrderPreserving("K-hom has a negative coefficient");
    if (!leq(f.apply(unit_class(R)), unit_class(S)))
        throw NotContractive("f([1_R]) = " + f.apply(unit_class(R)).to_string() + " is not <= [1_S] = " +
                             unit_class(S).to_string());
    const auto& G = S.field()->grading();
    const auto& sp = S.field()->support;
    std::optional<std::mt19937_64> rng;
    if (opt.seed) rng.emplace(*opt.seed);

    GradedHomSpec<F> spec{R, S, decompose_khom(f), {}};
    for (std::size_t j = 0; j < S.num_blocks(); ++j) {
        const auto q = S.block_size(j);
        std::map<Vec, std::vector<std::size_t>> free_rows;  // ascending per coset
        for (std::size_t r = 0; r < q; ++r) free_rows[sp->reduce(G.neg(S.shifts(j)[r]))].push_back(r);
        TargetBlockPlan plan;
        std::vector<bool> used(q, false);
        for (auto& si : detail::enumerate_slots(spec.coefficients, j, R)) {
            auto it = free_rows.find(si.key);
            if (it == free_rows.end() || it->second.empty())
                throw NotContractive("no free target row for a slot of target block " + std::to_string(j + 1));
            auto& rows = it->second;
            std::size_t pick = 0;
            if (rng) pick = std::uniform_int_distribution<std::size_t>(0, rows.size() - 1)(*rng);
            const auto r = rows[pick];
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pick));
            used[r] = true;
            Vec eps = G.sub(S.shifts(j)[r], si.shift);
            if (!sp->contains(eps)) throw SpecCorrupt("twist degree outside the support");
            plan.slots.push_back({si.i, si.t, si.k, si.s, spec.coefficients.terms[j][si.i][si.t].alpha, r, eps});
            plan.rho.push_back(r);
        }
        std::vector<std::size_t> rest;
        for (std::size_t r = 0; r < q; ++r)
            if (!used[r]) rest.push_back(r);
        plan.padding = rest.size();
        if (rng) std::shuffle(rest.begin(), rest.end(), *rng);
        plan.rho.insert(plan.rho.end(), rest.begin(), rest.end());
        spec.blocks.push_back(std::move(plan));
    }
    return spec;
}

/** Images of all matrix units. Entry coefficients are copied; their degrees follow
 *  from the target shifts (the epsilon twists). */
template <StarScalar F>
ExplicitHom<F> evaluate_hom(const GradedHomSpec<F>& spec) {
    const auto& R = spec.source;
    const auto& S = spec.target;
    const auto& G = R.field()->grading();
    // rows[j][(i,t,s)][k] = target row
    std::vector<std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::size_t>>> rows(
        S.num_blocks());
    for (std::size_t j = 0; j < spec.blocks.size(); ++j)
        for (auto& sl : spec.blocks[j].slots) {
            auto& v = rows[j][{sl.source_block, sl.term, sl.copy}];
            if (v.size() <= sl.row) v.resize(sl.row + 1, SIZE_MAX);
            v[sl.row] = sl.target;
        }
    ExplicitHom<F> h{R, S, {}};
    for (std::size_t i = 0; i < R.num_blocks(); ++i) {
        const auto p = R.block_size(i);
        h.images.emplace_back();
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < p; ++l) {
                auto x = zero_element(S, G.sub(R.shifts(i)[k], R.shifts(i)[l]));
                for (std::size_t j = 0; j < S.num_blocks(); ++j)
                    for (auto& [key, pos] : rows[j]) {
                        if (std::get<0>(key) != i) continue;
                        if (pos.size() != p || pos[k] == SIZE_MAX || pos[l] == SIZE_MAX)
                            throw SpecCorrupt("incomplete slot list in target block " + std::to_string(j + 1));
                        x.blocks[j].set(pos[k], pos[l], R.field()->base.one());
                    }
                h.images[i].push_back(std::move(x));
            }
    }
    return h;
}

template <StarScalar F>
Homogeneous<F> evaluate_hom(const GradedHomSpec<F>& spec, const Homogeneous<F>& x) {
    return evaluate_hom(spec).apply(x);
}

template <StarScalar F>
MatricialElement<F> evaluate_hom(const GradedHomSpec<F>& spec, const MatricialElement<F>& x) {
    return evaluate_hom(spec).apply(x);
}

template <StarScalar F>
KHomMatrix k0_of_hom(const GradedHomSpec<F>& spec) {
    return k0_of_hom(evaluate_hom(spec));
}

}  // namespace grk
