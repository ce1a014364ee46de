#pragma once
// Random (R, S, f) triples over the grading groups trivial, Z, Z/3 and Z^2 with
// support 0, 3*Gamma or Gamma. S is built around f([1_R]) so that most
// samples are contractive; a fraction gets padding (non-unital) or loses a row
// (not contractive).

#include <random>
#include <string>
#include <vector>

#include "grk/grk.hpp"

namespace corpus {

using grk::Rational;
using grk::Vec;

struct Sample {
    grk::MatricialAlgebra<Rational> R, S;
    grk::KHomMatrix f;
    std::string label;
};

inline grk::FieldPtr<Rational> random_field(std::mt19937_64& rng, std::string& label) {
    const int g = static_cast<int>(rng() % 4);
    const int h = static_cast<int>(rng() % 3);
    grk::FGAbelianGroup G;
    switch (g) {
        case 0: G = grk::FGAbelianGroup::trivial(); break;
        case 1: G = grk::FGAbelianGroup::free(1); break;
        case 2: G = grk::FGAbelianGroup::cyclic(3); break;
        default: G = grk::FGAbelianGroup::free(2); break;
    }
    std::vector<Vec> gens;
    if (h == 1) {
        for (std::size_t i = 0; i < G.dim(); ++i) {
            Vec e = G.zero();
            e[i] = 3;
            gens.push_back(e);
        }
    } else if (h == 2) {
        for (std::size_t i = 0; i < G.dim(); ++i) {
            Vec e = G.zero();
            e[i] = 1;
            gens.push_back(e);
        }
    }
    label = G.to_string() + (h == 0 ? " / 0" : h == 1 ? " / 3G" : " / G");
    return grk::make_field(grk::rationals(), G, gens);
}

inline Vec random_vec(std::mt19937_64& rng, const grk::FGAbelianGroup& G, int range = 2) {
    Vec v(G.dim());
    for (auto& x : v) x = static_cast<std::int64_t>(rng() % (2 * range + 1)) - range;
    return G.reduce(v);
}

/** mode 0: S matches f([1_R]) exactly, 1: padded, 2: one class short (when possible). */
inline Sample random_sample(std::mt19937_64& rng, int mode = -1) {
    if (mode < 0) mode = static_cast<int>(rng() % 10 < 5 ? 0 : rng() % 10 < 7 ? 1 : 2);
    std::string label;
    auto A = random_field(rng, label);
    const auto& G = A->grading();
    const auto& sp = A->support;

    const std::size_t nr = 1 + rng() % 4;
    std::vector<std::vector<Vec>> rb;
    for (std::size_t i = 0; i < nr; ++i) {
        const std::size_t p = 1 + rng() % 5;
        std::vector<Vec> sh;
        for (std::size_t k = 0; k < p; ++k) sh.push_back(random_vec(rng, G));
        rb.push_back(sh);
    }
    grk::MatricialAlgebra<Rational> R(A, rb);
    const auto kr = grk::k0_module(R);

    // f: each entry gets up to two terms with coefficient 1..3, sparse overall
    const std::size_t ns = 1 + rng() % 4;
    std::vector<std::vector<grk::GroupRingElem>> e(ns, std::vector<grk::GroupRingElem>(nr, grk::GroupRingElem(sp)));
    for (auto& row : e)
        for (auto& x : row) {
            const int terms = static_cast<int>(rng() % 4 == 0 ? 0 : 1 + rng() % 2);
            for (int t = 0; t < terms; ++t)
                x.add_term(random_vec(rng, G), static_cast<std::int64_t>(1 + rng() % 3));
            // keep the target blocks moderate
            if (x.augmentation() > 3) x = grk::GroupRingElem::constant(sp, 1);
        }
    // image of the unit, block by block
    std::vector<std::vector<Vec>> sb(ns);
    for (std::size_t j = 0; j < ns; ++j) {
        grk::GroupRingElem img(sp);
        for (std::size_t i = 0; i < nr; ++i) img += e[j][i] * kr.unit.coords[i];
        for (auto& [g, c] : img.terms())
            for (std::int64_t k = 0; k < c; ++k) {
                // a shift whose class is g, moved by a random element of the support
                Vec d = G.neg(g);
                if (!sp->generators().empty() && rng() % 2) {
                    const auto& gen = sp->generators()[rng() % sp->generators().size()];
                    d = G.add(d, gen);
                }
                sb[j].push_back(d);
            }
    }
    if (mode == 1) {
        const auto j = rng() % ns;
        const auto extra = 1 + rng() % 2;
        for (std::size_t k = 0; k < extra; ++k) sb[j].push_back(random_vec(rng, G));
    } else if (mode == 2) {
        std::vector<std::size_t> nonempty;
        for (std::size_t j = 0; j < ns; ++j)
            if (!sb[j].empty()) nonempty.push_back(j);
        if (!nonempty.empty()) {
            auto& b = sb[nonempty[rng() % nonempty.size()]];
            b.erase(b.begin() + static_cast<std::ptrdiff_t>(rng() % b.size()));
        }
    }
    for (auto& b : sb) {
        if (b.empty()) b.push_back(random_vec(rng, G));
        std::shuffle(b.begin(), b.end(), rng);
    }
    grk::MatricialAlgebra<Rational> S(A, sb);
    auto f = grk::make_khom(kr, grk::k0_module(S), std::move(e));
    return {R, S, f, label};
}

}  // namespace corpus
