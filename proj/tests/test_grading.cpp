#include <gtest/gtest.h>

#include <random>

#include "grk/grading.hpp"
#include "oracles.hpp"

using namespace grk;

namespace {

FGAbelianGroup Z2() { return FGAbelianGroup::free(2); }

}  // namespace

TEST(Group, ReduceAndArithmetic) {
    const FGAbelianGroup G(1, {3});
    EXPECT_EQ(G.dim(), 2u);
    EXPECT_EQ(G.reduce({5, 7}), (Vec{5, 1}));
    EXPECT_EQ(G.add({1, 2}, {1, 2}), (Vec{2, 1}));
    EXPECT_EQ(G.neg({1, 1}), (Vec{-1, 2}));
    EXPECT_THROW(G.check({1}), ShapeMismatch);
}

TEST(Subgroup, MembershipExamples) {
    const Subgroup H(Z2(), {{2, 0}, {0, 3}});
    EXPECT_TRUE(subgroup_member({0, 0}, H));
    EXPECT_TRUE(subgroup_member({4, 6}, H));
    EXPECT_FALSE(subgroup_member({1, 0}, H));
    const Subgroup E(FGAbelianGroup::free(1), {{2}});
    EXPECT_FALSE(subgroup_member({1}, E));
}

TEST(Subgroup, CosetReduceExamples) {
    auto H = make_space(Z2(), {{2, 0}, {0, 3}});
    EXPECT_EQ(coset_reduce({3, 7}, H).representative, (Vec{1, 1}));
    EXPECT_EQ(coset_reduce({4, 6}, H).representative, (Vec{0, 0}));
    auto E = make_space(FGAbelianGroup::free(1), {{2}});
    EXPECT_EQ(coset_reduce({5}, E).representative, (Vec{1}));
}

TEST(Subgroup, IndexAndRepresentatives) {
    const Subgroup H(Z2(), {{2, 0}, {0, 3}});
    EXPECT_EQ(H.index(), 6);
    EXPECT_EQ(H.coset_representatives().size(), 6u);
    const Subgroup T = Subgroup::trivial(FGAbelianGroup::cyclic(3));
    EXPECT_EQ(T.index(), 3);
    EXPECT_EQ(Subgroup(Z2(), {{1, 1}}).index(), 0);
}

TEST(Subgroup, NonDiagonalGenerators) {
    const Subgroup H(Z2(), {{2, 4}, {0, 6}, {1, 1}});
    for (std::int64_t a = -6; a <= 6; ++a)
        for (std::int64_t b = -6; b <= 6; ++b)
            EXPECT_EQ(H.contains({a, b}), oracle::member(Z2(), {{2, 4}, {0, 6}, {1, 1}}, {a, b}, 8)) << a << "," << b;
}

TEST(Subgroup, TorsionAmbient) {
    const FGAbelianGroup G(1, {4});
    const std::vector<Vec> gens{{2, 1}};
    const Subgroup H(G, gens);
    for (std::int64_t a = -5; a <= 5; ++a)
        for (std::int64_t b = 0; b < 4; ++b) EXPECT_EQ(H.contains({a, b}), oracle::member(G, gens, {a, b}, 10));
}

TEST(SubgroupProperty, ReduceIsIdempotentAndDecidesCosets) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const FGAbelianGroup G(1 + rng() % 2, rng() % 2 ? std::vector<std::int64_t>{} : std::vector<std::int64_t>{3});
        std::vector<Vec> gens;
        const auto k = rng() % 3;
        for (std::size_t i = 0; i < k; ++i) {
            Vec g(G.dim());
            for (auto& x : g) x = static_cast<std::int64_t>(rng() % 7) - 3;
            gens.push_back(g);
        }
        auto H = make_space(G, gens);
        for (int s = 0; s < 30; ++s) {
            Vec a(G.dim()), b(G.dim());
            for (auto& x : a) x = static_cast<std::int64_t>(rng() % 13) - 6;
            for (auto& x : b) x = static_cast<std::int64_t>(rng() % 13) - 6;
            const auto r = H->reduce(a);
            EXPECT_EQ(H->reduce(r), r);
            const bool same = H->reduce(a) == H->reduce(b);
            EXPECT_EQ(same, subgroup_member(G.sub(a, b), *H));
            EXPECT_EQ(same, oracle::member(G, gens, G.sub(a, b), 40));
        }
    }
}

TEST(GroupRing, ExamplesOverZ3) {
    auto sp = make_space(FGAbelianGroup::cyclic(3), {});
    const auto a = GroupRingElem::parse("1+x", sp);
    const auto b = GroupRingElem::parse("1+x+x^2", sp);
    EXPECT_EQ(ring_mul(a, b), 2 * b);
    EXPECT_EQ(GroupRingElem::constant(sp, 1) * a, a);
}

TEST(GroupRing, ActionOnLaurent) {
    auto sp = make_space(FGAbelianGroup::free(1), {});
    const auto a = GroupRingElem::parse("1+x^-1", sp);
    EXPECT_EQ(act({1}, a), GroupRingElem::parse("x+1", sp));
    EXPECT_EQ(a.to_laurent(), "1 + x^-1");
}

TEST(GroupRing, ParseForms) {
    auto sp = make_space(FGAbelianGroup::free(1), {});
    EXPECT_EQ(GroupRingElem::parse("3*x^2", sp), GroupRingElem::monomial(sp, {2}, 3));
    EXPECT_EQ(GroupRingElem::parse("2x^-1", sp), GroupRingElem::monomial(sp, {-1}, 2));
    EXPECT_EQ(GroupRingElem::parse("2*[1] - 1*[0]", sp),
              GroupRingElem::monomial(sp, {1}, 2) - GroupRingElem::constant(sp, 1));
    EXPECT_THROW(GroupRingElem::parse("2*[1", sp), ParseError);
    EXPECT_THROW(GroupRingElem::parse("y", sp), ParseError);
    auto sp2 = make_space(Z2(), {});
    EXPECT_EQ(GroupRingElem::parse("1*[(1,2)]", sp2), GroupRingElem::monomial(sp2, {1, 2}));
}

TEST(GroupRing, TrivialGroupPrintsIntegers) {
    auto sp = make_space(FGAbelianGroup::trivial(), {});
    EXPECT_EQ(GroupRingElem::constant(sp, 4).to_string(), "4");
    EXPECT_EQ(GroupRingElem(sp).to_string(), "0");
}

TEST(GroupRing, CosetSpaceMismatchThrows) {
    auto a = GroupRingElem::constant(make_space(FGAbelianGroup::free(1), {}), 1);
    auto b = GroupRingElem::constant(make_space(FGAbelianGroup::free(1), {{2}}), 1);
    EXPECT_THROW(a * b, SpaceMismatch);
    EXPECT_THROW(a + b, SpaceMismatch);
}

TEST(GroupRingProperty, CommutativeRingAxioms) {
    std::mt19937_64 rng(5);
    const std::vector<CosetSpace> spaces{make_space(FGAbelianGroup::free(1), {}),
                                         make_space(FGAbelianGroup::free(1), {{3}}),
                                         make_space(FGAbelianGroup::cyclic(3), {}), make_space(Z2(), {{2, 0}})};
    for (auto& sp : spaces) {
        auto rnd = [&] {
            GroupRingElem x(sp);
            for (int t = 0; t < 3; ++t) {
                Vec g(sp->ambient().dim());
                for (auto& c : g) c = static_cast<std::int64_t>(rng() % 5) - 2;
                x.add_term(g, static_cast<std::int64_t>(rng() % 7) - 3);
            }
            return x;
        };
        for (int trial = 0; trial < 40; ++trial) {
            const auto a = rnd(), b = rnd(), c = rnd();
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            EXPECT_EQ(a + b - b, a);
            Vec g(sp->ambient().dim()), h(sp->ambient().dim());
            for (auto& x : g) x = static_cast<std::int64_t>(rng() % 5) - 2;
            for (auto& x : h) x = static_cast<std::int64_t>(rng() % 5) - 2;
            EXPECT_EQ(act(sp->ambient().add(g, h), a), act(g, act(h, a)));
        }
    }
}

TEST(GroupRingProperty, MatchesDenseCyclicModel) {
    std::mt19937_64 rng(9);
    for (std::int64_t n : {2, 3, 5}) {
        auto sp = make_space(FGAbelianGroup::cyclic(n), {});
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::int64_t> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
            GroupRingElem x(sp), y(sp);
            for (std::int64_t r = 0; r < n; ++r) {
                a[r] = static_cast<std::int64_t>(rng() % 7) - 3;
                b[r] = static_cast<std::int64_t>(rng() % 7) - 3;
                x.add_term({r}, a[r]);
                y.add_term({r}, b[r]);
            }
            const auto dense = oracle::cyclic_mul(a, b);
            const auto prod = x * y;
            for (std::int64_t r = 0; r < n; ++r) EXPECT_EQ(prod.coefficient({r}), dense[r]);
        }
    }
}
