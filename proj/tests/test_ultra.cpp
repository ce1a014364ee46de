#include <gtest/gtest.h>

#include "grk/ultra.hpp"

using namespace grk;

namespace {

using Alg = MatricialAlgebra<Rational>;

FieldPtr<Rational> ungraded() { return make_field(rationals(), FGAbelianGroup::trivial(), {}); }

ExplicitHom<Rational> corner(const Alg& R, const Alg& S) {
    ExplicitHom<Rational> h{R, S, {{}}};
    const auto& G = R.field()->grading();
    for (std::size_t k = 0; k < R.block_size(0); ++k)
        for (std::size_t l = 0; l < R.block_size(0); ++l) {
            auto x = zero_element(S, G.sub(R.shifts(0)[k], R.shifts(0)[l]));
            x.blocks[0].set(k, l, Rational(1));
            h.images[0].push_back(x);
        }
    return h;
}

/** S_n = M_{n+1}(K), trivially graded, corner inclusions. */
std::shared_ptr<Chain<Rational>> growing_chain() {
    const auto A = ungraded();
    return std::make_shared<Chain<Rational>>(
        "growing", [A](std::size_t n) { return Alg(A, {std::vector<Vec>(n + 1)}); },
        [](std::size_t, const Alg& R, const Alg& S) { return corner(R, S); });
}

/** M1(K) -> M1(K) -> M1(K) where the second map is zero. */
std::shared_ptr<Chain<Rational>> killing_chain() {
    const Alg M(ungraded(), {{{}}});
    return Chain<Rational>::finite("kill", {M, M, M}, {identity_hom(M), ExplicitHom<Rational>{M, M, {{zero_element(M, {})}}}});
}

}  // namespace

TEST(Chain, FiniteChainValidatesMaps) {
    const Alg M1(ungraded(), {{{}}});
    const Alg M2(ungraded(), {{{}, {}}});
    EXPECT_THROW(Chain<Rational>::finite("x", {M1, M2}, {}), ShapeMismatch);
    EXPECT_THROW(Chain<Rational>::finite("x", {M1, M2}, {identity_hom(M1)}), ShapeMismatch);
    const auto c = Chain<Rational>::finite("x", {M1, M2}, {corner(M1, M2)});
    EXPECT_EQ(c->length(), 2u);
    EXPECT_THROW(c->algebra(2), BudgetExhausted);
}

TEST(Chain, PresetShortcutsAgreeWithMaps) {
    for (bool rev : {false, true}) {
        const auto c = corner_doubling_chain(rationals(), rev);
        EXPECT_EQ(c->algebra(3).block_size(0), 8u);
        for (std::size_t n = 0; n < 4; ++n) {
            EXPECT_TRUE(verify_graded_star_hom(c->map(n), true).ok());
            EXPECT_EQ(c->k0_map(n), k0_of_hom(c->map(n)));
        }
        EXPECT_EQ(c->k0_map(0, 3), k0_of_hom(c->map(0, 3)));
    }
    for (const auto& c : {line_truncation_chain(rationals()), clock_truncation_chain(rationals())})
        for (std::size_t n = 0; n < 5; ++n) {
            EXPECT_TRUE(verify_graded_star_hom(c->map(n)).ok());
            EXPECT_EQ(c->k0_map(n), k0_of_hom(c->map(n)));
        }
    EXPECT_EQ(corner_doubling_chain(rationals())->algebra(2).shifts(0), (std::vector<Vec>{{0}, {1}, {1}, {2}}));
    EXPECT_EQ(corner_doubling_chain(rationals(), true)->algebra(2).shifts(0),
              (std::vector<Vec>{{2}, {1}, {1}, {0}}));
    EXPECT_EQ(clock_truncation_chain(rationals())->algebra(3).shifts(0), (std::vector<Vec>{{0}, {1}, {1}, {1}}));
}

TEST(Colimit, StageSearchZero) {
    const auto k = killing_chain();
    const auto gen = k->k0(0).generator(0);
    EXPECT_EQ(stage_search_zero(*k, 0, {k->k0(0).zero()}), 0u);
    EXPECT_EQ(stage_search_zero(*k, 0, {gen}), 2u);
    EXPECT_EQ(stage_search_zero(*k, 1, {gen}), 2u);
    const auto d = corner_doubling_chain(rationals());
    EXPECT_THROW(stage_search_zero(*d, 0, {d->k0(0).generator(0)}, StageBudget{3}), BudgetExhausted);
    const Alg M(ungraded(), {{{}}});
    const auto id = Chain<Rational>::finite("id", {M, M}, {identity_hom(M)});
    EXPECT_THROW(stage_search_zero(*id, 0, {gen}), BudgetExhausted);
}

TEST(Colimit, EqualStageAndPushForward) {
    const auto k = killing_chain();
    const auto g = k->k0(0).generator(0);
    EXPECT_EQ(push_forward(*k, {0, g}, 1), g);
    EXPECT_TRUE(push_forward(*k, {0, g}, 2).is_zero());
    EXPECT_EQ(colimit_equal_stage(*k, {0, g}, {1, k->k0(1).zero()}), 2u);
    EXPECT_EQ(colimit_equal_stage(*k, {0, g}, {1, g}), 1u);
    EXPECT_THROW(push_forward(*k, {2, g}, 1), IndexOutOfRange);
}

TEST(Factorization, SmallestReceivingStage) {
    const auto S = growing_chain();
    const Alg R(ungraded(), {std::vector<Vec>(4)});
    const auto one = GroupRingElem::constant(S->k0(0).space, 1);
    const ColimitKHom f{0, make_khom(k0_module(R), S->k0(0), {{one}})};
    const auto fac = factor_through_stage(R, *S, f);
    EXPECT_EQ(fac.stage, 3u);
    const auto h = evaluate_hom(fac.spec);
    EXPECT_TRUE(verify_graded_star_hom(h, true).ok());
    EXPECT_EQ(k0_of_hom(h), compose(S->k0_map(0, 3), f.map));
    EXPECT_THROW(factor_through_stage(R, *S, f, StageBudget{2}), BudgetExhausted);
}

TEST(Factorization, NegativeOrTooSmallIsNotContractive) {
    const auto S = growing_chain();
    const Alg R(ungraded(), {{{}}});
    const ColimitKHom neg{0, make_khom(k0_module(R), S->k0(0), {{GroupRingElem::constant(S->k0(0).space, -1)}})};
    EXPECT_THROW(factor_through_stage(R, *S, neg, StageBudget{6}), NotContractive);

    const Alg M(ungraded(), {{{}}});
    const auto fin = Chain<Rational>::finite("fin", {M, M}, {identity_hom(M)});
    const ColimitKHom two{0, make_khom(k0_module(R), fin->k0(0), {{GroupRingElem::constant(fin->k0(0).space, 2)}})};
    EXPECT_THROW(factor_through_stage(R, *fin, two), NotContractive);
    const Alg R2(ungraded(), {{{}}, {{}}});
    EXPECT_THROW(factor_through_stage(R2, *fin, two), ShapeMismatch);
}

TEST(Elliott, DoublingChainsIntertwine) {
    const ChainPtr<Rational> R = corner_doubling_chain(rationals());
    const ChainPtr<Rational> S = corner_doubling_chain(rationals(), true);
    const auto f = identity_stage_khom<Rational>(R, S), g = identity_stage_khom<Rational>(S, R);
    const auto t = elliott_intertwine(*R, *S, f, g, 3, StageBudget{12});
    ASSERT_EQ(t.depth(), 3u);
    for (std::size_t i = 0; i + 1 < t.n.size(); ++i) {
        EXPECT_LT(t.n[i], t.n[i + 1]);
        EXPECT_LT(t.m[i], t.m[i + 1]);
    }
    for (auto& r : verify_transcript(t, *R, *S, f, g)) EXPECT_TRUE(r.all());
    for (auto& h : t.rho) EXPECT_TRUE(verify_graded_star_hom(h, true).ok());
    for (auto& h : t.sigma) EXPECT_TRUE(verify_graded_star_hom(h, true).ok());
    for (std::size_t i = 0; i < t.sigma_correction.size(); ++i)
        EXPECT_TRUE(is_unitary(t.sigma_correction[i], R->algebra(t.n[i + 1])));
}

TEST(Elliott, LineAndClockDoNotIntertwine) {
    const ChainPtr<Rational> R = line_truncation_chain(rationals());
    const ChainPtr<Rational> S = clock_truncation_chain(rationals());
    const auto f = identity_stage_khom<Rational>(R, S), g = identity_stage_khom<Rational>(S, R);
    bool obstructed = false;
    try {
        elliott_intertwine(*R, *S, f, g, 4, StageBudget{16});
    } catch (const BudgetExhausted&) {
        obstructed = true;
    } catch (const KHomInconsistent&) {
        obstructed = true;
    }
    EXPECT_TRUE(obstructed);
}

TEST(Elliott, NonCommutingStageDataIsInconsistent) {
    const ChainPtr<Rational> R = line_truncation_chain(rationals());
    const ChainPtr<Rational> S = corner_doubling_chain(rationals());
    const auto f = identity_stage_khom<Rational>(R, S), g = identity_stage_khom<Rational>(S, R);
    EXPECT_THROW(elliott_intertwine(*R, *S, f, g, 2, StageBudget{8}), KHomInconsistent);
}
