#pragma once
/** @file faithful.hpp
 *  @brief Unitary equivalence of monomial graded *-homomorphisms with equal K0.
 */

#include <map>
#include <random>
#include <vector>

#include "grk/fullsynth.hpp"

namespace grk {

/** Degree-zero projection whose every block is diagonal with entries 1. */
template <StarScalar F>
bool is_monomial_projection(const Homogeneous<F>& p) {
    if (p.is_zero()) return true;
    for (auto& d : p.degree)
        if (d != 0) return false;
    for (auto& b : p.blocks)
        for (auto& [ij, c] : b.entries())
            if (ij.first != ij.second || !(c == b.field()->base.one())) return false;
    return true;
}

/** Every matrix-unit image is a monomial matrix whose entries are unitaries c u_d (c c* = 1). */
template <StarScalar F>
bool is_monomial_hom(const ExplicitHom<F>& h) {
    for (auto& block : h.images)
        for (auto& img : block)
            for (auto& b : img.blocks) {
                std::map<std::size_t, int> rows, cols;
                for (auto& [ij, c] : b.entries()) {
                    if (++rows[ij.first] > 1 || ++cols[ij.second] > 1) return false;
                    if (!(F(c * ScalarOps<F>::conj(c)) == b.field()->base.one())) return false;
                }
            }
    return true;
}

/** Partial isometry x in g S_0 h with x x* = g and x* x = h, matching the diagonal
 *  supports of g and h coset by coset in ascending order. */
template <StarScalar F>
Homogeneous<F> projection_star_equivalence(const MatricialAlgebra<F>& S, const Homogeneous<F>& g,
                                           const Homogeneous<F>& h) {
    if (!is_monomial_projection(g) || !is_monomial_projection(h))
        throw NonMonomial("projection_star_equivalence needs monomial projections; the general case needs a "
                          "*-pythagorean base field");
    if (!(class_of_projection(S, g) == class_of_projection(S, h)))
        throw ClassMismatch("projections have different K0 classes");
    const auto& G = S.field()->grading();
    const auto& sp = S.field()->support;
    auto x = zero_element(S, G.zero());
    for (std::size_t j = 0; j < S.num_blocks(); ++j) {
        std::map<Vec, std::vector<std::size_t>> gs, hs;
        for (auto& [ij, c] : g.blocks[j].entries()) gs[sp->reduce(G.neg(S.shifts(j)[ij.first]))].push_back(ij.first);
        for (auto& [ij, c] : h.blocks[j].entries()) hs[sp->reduce(G.neg(S.shifts(j)[ij.first]))].push_back(ij.first);
        for (auto& [key, rows] : gs) {
            const auto& cols = hs.at(key);
            for (std::size_t a = 0; a < rows.size(); ++a) x.blocks[j].set(rows[a], cols[a], S.field()->base.one());
        }
    }
    return x;
}

/** x = sum_i sum_k phi(e^i_k1) x_i psi(e^i_1k), with x_i from phi(e^i_11) ~ psi(e^i_11). */
template <StarScalar F>
Homogeneous<F> build_intertwiner(const ExplicitHom<F>& phi, const ExplicitHom<F>& psi) {
    if (!(phi.source == psi.source) || !(phi.target == psi.target))
        throw ShapeMismatch("intertwiner needs maps with the same source and target");
    if (!(k0_of_hom(phi) == k0_of_hom(psi))) throw KHomMismatch("K0(phi) != K0(psi)");
    const auto& R = phi.source;
    const auto& S = phi.target;
    auto x = zero_element(S, S.field()->grading().zero());
    for (std::size_t i = 0; i < R.num_blocks(); ++i) {
        const auto xi = projection_star_equivalence(S, phi.image(i, 0, 0), psi.image(i, 0, 0));
        for (std::size_t k = 0; k < R.block_size(i); ++k) x += phi.image(i, k, 0) * xi * psi.image(i, 0, k);
    }
    return x;
}

/** u = x + y where y matches 1 - phi(1) with 1 - psi(1). */
template <StarScalar F>
Homogeneous<F> unitary_completion(const Homogeneous<F>& x, const ExplicitHom<F>& phi, const ExplicitHom<F>& psi) {
    const auto& S = phi.target;
    const auto one = unit_element(S);
    const auto p = one - phi.image_of_unit();
    const auto q = one - psi.image_of_unit();
    Homogeneous<F> y;
    try {
        y = projection_star_equivalence(S, p, q);
    } catch (const ClassMismatch&) {
        throw ComplementClassMismatch("1 - phi(1) and 1 - psi(1) have different K0 classes");
    }
    return x + y;
}

template <StarScalar F>
bool is_unitary(const Homogeneous<F>& u, const MatricialAlgebra<F>& S) {
    const auto one = unit_element(S);
    return u * u.star() == one && u.star() * u == one;
}

/** phi(e) == u psi(e) u* for every matrix unit e. */
template <StarScalar F>
bool verify_conjugation(const Homogeneous<F>& u, const ExplicitHom<F>& phi, const ExplicitHom<F>& psi) {
    const auto us = u.star();
    for (std::size_t i = 0; i < phi.images.size(); ++i)
        for (std::size_t x = 0; x < phi.images[i].size(); ++x)
            if (!(phi.images[i][x] == u * psi.images[i][x] * us)) return false;
    return true;
}

/** A degree-zero unitary of S: a coset-preserving signed permutation followed by
 *  rational rotations ((1-t^2)/(1+t^2), 2t/(1+t^2)) on random pairs of rows with equal coset. */
template <StarScalar F>
Homogeneous<F> random_degree_zero_unitary(const MatricialAlgebra<F>& S, std::mt19937_64& rng, int rotations = 3) {
    const auto& G = S.field()->grading();
    const auto& sp = S.field()->support;
    const auto& K = S.field()->base;
    auto u = zero_element(S, G.zero());
    std::vector<std::map<Vec, std::vector<std::size_t>>> groups(S.num_blocks());
    for (std::size_t j = 0; j < S.num_blocks(); ++j) {
        for (std::size_t r = 0; r < S.block_size(j); ++r) groups[j][sp->reduce(G.neg(S.shifts(j)[r]))].push_back(r);
        for (auto& [key, rows] : groups[j]) {
            auto perm = rows;
            std::shuffle(perm.begin(), perm.end(), rng);
            for (std::size_t a = 0; a < rows.size(); ++a)
                u.blocks[j].set(rows[a], perm[a], rng() % 2 ? K.one() : F(K.zero() - K.one()));
        }
    }
    for (int n = 0; n < rotations; ++n) {
        const auto j = rng() % S.num_blocks();
        std::vector<const std::vector<std::size_t>*> big;
        for (auto& [key, rows] : groups[j])
            if (rows.size() >= 2) big.push_back(&rows);
        if (big.empty()) continue;
        const auto& rows = *big[rng() % big.size()];
        const auto a = rows[rng() % rows.size()];
        auto b = rows[rng() % rows.size()];
        if (a == b) b = rows[(std::find(rows.begin(), rows.end(), a) - rows.begin() + 1) % rows.size()];
        const auto t = K.from_int(static_cast<long>(1 + rng() % 5));
        const F den = F(K.one() + t * t);
        if (ScalarOps<F>::is_zero(den)) continue;
        const F c = F(F(K.one() - t * t) / den), s = F(F(t + t) / den);
        auto rot = unit_element(S);
        rot.blocks[j].set(a, a, c);
        rot.blocks[j].set(b, b, c);
        rot.blocks[j].set(a, b, F(K.zero() - s));
        rot.blocks[j].set(b, a, s);
        u = rot * u;
    }
    return u;
}

}  // namespace grk
