#pragma once
/** @file k0gr.hpp
 *  @brief Graded Grothendieck groups of matricial algebras as ordered
 *  Z[G/G_A]-modules, K-homomorphism matrices, contractivity, and the
 *  generating intervals of M_omega(K) for the two supported shift archetypes.
 *
 *  Basis convention: generator i of K0(R) is g^i_1 [e^i_11], so
 *  [e^i_kk] = (-g^i_k) * generator i for the shifts exactly as given.
 */

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grk/gralg.hpp"

namespace grk {

struct K0Elem {
    std::vector<GroupRingElem> coords;

    K0Elem& operator+=(const K0Elem& o) {
        check(o);
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
        return *this;
    }
    K0Elem& operator-=(const K0Elem& o) {
        check(o);
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
        return *this;
    }
    friend K0Elem operator+(K0Elem a, const K0Elem& b) { return a += b; }
    friend K0Elem operator-(K0Elem a, const K0Elem& b) { return a -= b; }
    bool operator==(const K0Elem& o) const { return coords == o.coords; }
    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](auto& c) { return c.is_zero(); });
    }
    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? ", " : "") + coords[i].to_string();
        return s + ")";
    }

private:
    void check(const K0Elem& o) const {
        if (coords.size() != o.coords.size()) throw SpaceMismatch("K0 elements of different rank");
    }
};

/** Free Z[G/G_A]-module of rank = block count, with its order-unit. */
struct K0Module {
    CosetSpace space;
    std::size_t rank = 0;
    K0Elem unit;
    /** g^i_1 per block: the shift that a normalized presentation would subtract. */
    std::vector<Vec> normalization;

    K0Elem zero() const { return {std::vector<GroupRingElem>(rank, GroupRingElem(space))}; }
    K0Elem generator(std::size_t i) const {
        auto z = zero();
        z.coords.at(i) = GroupRingElem::constant(space, 1);
        return z;
    }
};

/** Coordinate i is sum_k coset(-g^i_k). */
template <StarScalar F>
K0Elem unit_class(const MatricialAlgebra<F>& R) {
    const auto& sp = R.field()->support;
    const auto& G = R.field()->grading();
    K0Elem u;
    for (std::size_t i = 0; i < R.num_blocks(); ++i) {
        GroupRingElem c(sp);
        for (auto& g : R.shifts(i)) c.add_term(G.neg(g), 1);
        u.coords.push_back(c);
    }
    return u;
}

template <StarScalar F>
K0Module k0_module(const MatricialAlgebra<F>& R) {
    K0Module M{R.field()->support, R.num_blocks(), unit_class(R), {}};
    for (std::size_t i = 0; i < R.num_blocks(); ++i) M.normalization.push_back(R.shifts(i).front());
    return M;
}

namespace detail {

/** Rank of a small dense matrix by Gaussian elimination. */
template <StarScalar F>
std::size_t dense_rank(std::vector<std::vector<F>> a, const F& zero) {
    std::size_t rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && ScalarOps<F>::is_zero(a[piv][c])) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (ScalarOps<F>::is_zero(a[r][c])) continue;
            F f = F(a[r][c] / a[rank][c]);
            for (std::size_t k = c; k < cols; ++k) a[r][k] = F(a[r][k] - f * a[rank][k]);
        }
        ++rank;
    }
    (void)zero;
    return rank;
}

}  // namespace detail

/** [p] for a degree-zero projection p in R. Positions are grouped by the coset
 *  of their shift; each group contributes rank(sub-block) * coset(-shift). */
template <StarScalar F>
K0Elem class_of_projection(const MatricialAlgebra<F>& R, const Homogeneous<F>& p) {
    const auto& G = R.field()->grading();
    const auto& sp = R.field()->support;
    if (p.blocks.size() != R.num_blocks()) throw ShapeMismatch("projection has the wrong block count");
    if (!p.is_zero() && p.degree != G.zero()) throw NotAProjection("projection must be homogeneous of degree 0");
    if (!(p * p == p)) throw NotAProjection("p^2 != p");
    if (!(p.star() == p)) throw NotAProjection("p* != p");
    K0Elem out;
    for (std::size_t j = 0; j < R.num_blocks(); ++j) {
        const auto& m = p.blocks[j];
        GroupRingElem c(sp);
        // fast path: diagonal matrix, rank = number of nonzero entries
        bool diagonal = true;
        for (auto& [ij, v] : m.entries())
            if (ij.first != ij.second) diagonal = false;
        if (diagonal) {
            for (auto& [ij, v] : m.entries()) c.add_term(G.neg(R.shifts(j)[ij.first]), 1);
            out.coords.push_back(c);
            continue;
        }
        std::map<Vec, std::vector<std::size_t>> groups;
        for (std::size_t r = 0; r < R.block_size(j); ++r)
            groups[sp->reduce(G.neg(R.shifts(j)[r]))].push_back(r);
        for (auto& [key, pos] : groups) {
            std::vector<std::vector<F>> sub(pos.size(), std::vector<F>(pos.size(), R.field()->base.zero()));
            bool any = false;
            for (std::size_t a = 0; a < pos.size(); ++a)
                for (std::size_t b = 0; b < pos.size(); ++b) {
                    sub[a][b] = m.get(pos[a], pos[b]);
                    any = any || !ScalarOps<F>::is_zero(sub[a][b]);
                }
            if (!any) continue;
            c.add_term(key, static_cast<std::int64_t>(detail::dense_rank(sub, R.field()->base.zero())));
        }
        out.coords.push_back(c);
    }
    return out;
}

inline bool is_positive(const K0Elem& v) {
    return std::all_of(v.coords.begin(), v.coords.end(), [](auto& c) { return c.is_nonnegative(); });
}

inline bool leq(const K0Elem& v, const K0Elem& w) { return is_positive(w - v); }

/** m x n matrix of group-ring elements; entries[j][i] is the image of generator i in coordinate j. */
struct KHomMatrix {
    K0Module source, target;
    std::vector<std::vector<GroupRingElem>> entries;

    std::size_t rows() const { return target.rank; }
    std::size_t cols() const { return source.rank; }

    K0Elem apply(const K0Elem& v) const {
        if (v.coords.size() != cols()) throw ShapeMismatch("K0 element rank differs from the map's source rank");
        K0Elem r = target.zero();
        for (std::size_t j = 0; j < rows(); ++j)
            for (std::size_t i = 0; i < cols(); ++i) r.coords[j] += entries[j][i] * v.coords[i];
        return r;
    }

    bool operator==(const KHomMatrix& o) const {
        return rows() == o.rows() && cols() == o.cols() && entries == o.entries;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t j = 0; j < rows(); ++j) {
            s += (j ? ", [" : "[");
            for (std::size_t i = 0; i < cols(); ++i) s += (i ? ", " : "") + entries[j][i].to_string();
            s += "]";
        }
        return s + "]";
    }
};

inline KHomMatrix make_khom(const K0Module& src, const K0Module& tgt, std::vector<std::vector<GroupRingElem>> e) {
    if (e.size() != tgt.rank) throw ShapeMismatch("K-hom needs one row per target block");
    for (auto& row : e) {
        if (row.size() != src.rank) throw ShapeMismatch("K-hom needs one column per source block");
        for (auto& x : row) {
            if (!x.space()) x = GroupRingElem(src.space);
            if (!same_space(x.space(), src.space)) throw SpaceMismatch("K-hom entry over a different coset space");
        }
    }
    if (!same_space(src.space, tgt.space)) throw SpaceMismatch("source and target coset spaces differ");
    return {src, tgt, std::move(e)};
}

inline KHomMatrix zero_khom(const K0Module& src, const K0Module& tgt) {
    return make_khom(src, tgt, std::vector<std::vector<GroupRingElem>>(
                                   tgt.rank, std::vector<GroupRingElem>(src.rank, GroupRingElem(src.space))));
}

inline KHomMatrix identity_khom(const K0Module& m) {
    auto f = zero_khom(m, m);
    for (std::size_t i = 0; i < m.rank; ++i) f.entries[i][i] = GroupRingElem::constant(m.space, 1);
    return f;
}

/** g after f. */
inline KHomMatrix compose(const KHomMatrix& g, const KHomMatrix& f) {
    if (g.cols() != f.rows()) throw ShapeMismatch("composition of K-homs with mismatched middle rank");
    auto h = zero_khom(f.source, g.target);
    for (std::size_t j = 0; j < g.rows(); ++j)
        for (std::size_t i = 0; i < f.cols(); ++i)
            for (std::size_t k = 0; k < g.cols(); ++k) h.entries[j][i] += g.entries[j][k] * f.entries[k][i];
    return h;
}

inline bool is_order_preserving(const KHomMatrix& f) {
    for (auto& row : f.entries)
        for (auto& x : row)
            if (!x.is_nonnegative()) return false;
    return true;
}

inline bool is_contractive(const KHomMatrix& f) {
    return is_order_preserving(f) && leq(f.apply(f.source.unit), f.target.unit);
}

inline bool is_unit_preserving(const KHomMatrix& f) {
    return is_order_preserving(f) && f.apply(f.source.unit) == f.target.unit;
}

/** Image of e^i_11 classes: column i is g^i_1 * [h(e^i_11)]. */
template <StarScalar F>
KHomMatrix k0_of_hom(const ExplicitHom<F>& h) {
    if (!same_space(h.source.field()->support, h.target.field()->support))
        throw SpaceMismatch("source and target fields have different supports");
    const auto src = k0_module(h.source), tgt = k0_module(h.target);
    auto f = zero_khom(src, tgt);
    for (std::size_t i = 0; i < h.source.num_blocks(); ++i) {
        K0Elem col;
        try {
            col = class_of_projection(h.target, h.image(i, 0, 0));
        } catch (const NotAProjection& e) {
            throw SpecCorrupt(std::string("image of a matrix unit is not a projection: ") + e.what());
        }
        for (std::size_t j = 0; j < tgt.rank; ++j) f.entries[j][i] = col.coords[j].act(h.source.shifts(i).front());
    }
    return f;
}

// ---------------------------------------------------------------------------
// Shift multisets of M_omega(K)(g) over G = Z with trivially graded K.

/** Degrees start, start+1, ... each with multiplicity count. */
struct DescendingRay {
    std::int64_t start = 0;
    std::int64_t count = 1;
};
/** Infinitely many copies of one degree. */
struct PointMassOmega {
    std::int64_t degree = 0;
};
using OmegaTail = std::variant<DescendingRay, PointMassOmega>;

struct OmegaShiftMultiset {
    std::map<std::int64_t, std::int64_t> finite_part;
    std::vector<OmegaTail> tails;

    /** (0, 1, 2, ...) */
    static OmegaShiftMultiset line() { return {{}, {DescendingRay{0, 1}}}; }
    /** (0, 1, 1, 1, ...) */
    static OmegaShiftMultiset clock() { return {{{0, 1}}, {PointMassOmega{1}}}; }

    /** Multiplicity of degree d; nullopt means infinite. */
    std::optional<std::int64_t> multiplicity(std::int64_t d) const {
        std::int64_t m = 0;
        auto it = finite_part.find(d);
        if (it != finite_part.end()) m += it->second;
        for (auto& t : tails) {
            if (auto* r = std::get_if<DescendingRay>(&t)) {
                if (d >= r->start) m += r->count;
            } else if (std::get<PointMassOmega>(t).degree == d) {
                return std::nullopt;
            }
        }
        return m;
    }

    /** Smallest degree with positive multiplicity. */
    std::int64_t lowest() const {
        std::int64_t lo = std::numeric_limits<std::int64_t>::max();
        for (auto& [d, c] : finite_part)
            if (c > 0) lo = std::min(lo, d);
        for (auto& t : tails) {
            if (auto* r = std::get_if<DescendingRay>(&t)) lo = std::min(lo, r->start);
            else lo = std::min(lo, std::get<PointMassOmega>(t).degree);
        }
        return lo;
    }
    /** Beyond this degree the multiplicity is constant. */
    std::int64_t horizon() const {
        std::int64_t hi = std::numeric_limits<std::int64_t>::min();
        for (auto& [d, c] : finite_part) hi = std::max(hi, d);
        for (auto& t : tails) {
            if (auto* r = std::get_if<DescendingRay>(&t)) hi = std::max(hi, r->start);
            else hi = std::max(hi, std::get<PointMassOmega>(t).degree);
        }
        return hi;
    }
    /** The constant multiplicity past the horizon. */
    std::int64_t tail_multiplicity() const {
        std::int64_t c = 0;
        for (auto& t : tails)
            if (auto* r = std::get_if<DescendingRay>(&t)) c += r->count;
        return c;
    }

    /** The first n shifts in ascending order. */
    std::vector<std::int64_t> truncate(std::size_t n) const {
        std::vector<std::int64_t> out;
        for (std::int64_t d = lowest(); out.size() < n; ++d) {
            auto m = multiplicity(d);
            if (!m) {
                while (out.size() < n) out.push_back(d);
                break;
            }
            for (std::int64_t c = 0; c < *m && out.size() < n; ++c) out.push_back(d);
            if (d > horizon() && tail_multiplicity() == 0) break;
        }
        return out;
    }
};

/** Group ring Z[Z] with the coset space of the trivial subgroup. */
inline CosetSpace laurent_space() {
    static const CosetSpace s = make_space(FGAbelianGroup::free(1), {});
    return s;
}

/** Sum of x^{-d} over a finite list of shifts. */
inline GroupRingElem shift_sum(const std::vector<std::int64_t>& shifts) {
    GroupRingElem r(laurent_space());
    for (auto d : shifts) r.add_term({-d}, 1);
    return r;
}

/** v lies in the generating interval iff each coefficient of x^{-d} is in [0, multiplicity(d)]. */
inline bool omega_interval_member(const GroupRingElem& v, const OmegaShiftMultiset& shifts) {
    if (v.is_zero()) return true;
    const auto& A = v.space()->ambient();
    if (A.dim() != 1 || A.free_rank() != 1 || !v.space()->reduced_basis().empty())
        throw UnsupportedGroup("interval membership needs the group ring Z[Z]");
    for (auto& [g, c] : v.terms()) {
        if (c < 0) return false;
        auto m = shifts.multiplicity(-g[0]);
        if (m && c > *m) return false;
    }
    return true;
}

/** Refutation of every module automorphism +-x^k of Z[x, x^-1] as a
 *  contractive map from interval(A) into interval(B). */
struct DirectionCertificate {
    bool refuted = false;
    std::vector<std::string> lines;
    /** A candidate exponent that survived, when not refuted. */
    std::optional<std::int64_t> survivor;
};

struct NoIsoCertificate {
    bool no_contractive_iso = false;
    DirectionCertificate forward, backward;
};

inline DirectionCertificate refute_direction(const OmegaShiftMultiset& A, const OmegaShiftMultiset& B,
                                             std::size_t witnesses = 8) {
    DirectionCertificate cert;
    const auto d1 = A.lowest();
    const auto loB = B.lowest(), hiB = B.horizon(), cB = B.tail_multiplicity();
    std::vector<GroupRingElem> W;
    for (std::size_t n = 1; n <= witnesses; ++n) W.push_back(shift_sum(A.truncate(n)));
    const auto& u1 = W.front();
    auto image = [](const GroupRingElem& w, std::int64_t k) { return w.act({k}); };

    cert.lines.push_back("sign -1: " + u1.to_laurent() + " maps to a negative element");
    // x^k x^{-d1} = x^{-(d1-k)} has degree below lowest(B) once k > d1 - lowest(B)
    const auto k_hi = d1 - loB;
    cert.lines.push_back("k > " + std::to_string(k_hi) + ": " + u1.to_laurent() + " lands below degree " +
                         std::to_string(loB) + " where B is empty");
    std::optional<GroupRingElem> w_low;
    std::int64_t k_lo = 0;
    if (cB == 0) {
        w_low = u1;
        k_lo = d1 - hiB;
    } else {
        for (std::int64_t d = A.lowest(); d <= A.horizon() + 1; ++d) {
            auto m = A.multiplicity(d);
            if (!m || *m > cB) {
                w_low = GroupRingElem::monomial(laurent_space(), {-d}, cB + 1);
                k_lo = d - hiB;
                break;
            }
        }
    }
    if (!w_low) {
        cert.lines.push_back("no witness exceeds the tail multiplicity of B; large negative k are not refuted");
        cert.survivor = std::numeric_limits<std::int64_t>::min();
        return cert;
    }
    cert.lines.push_back("k < " + std::to_string(k_lo) + ": " + w_low->to_laurent() +
                         " lands past the horizon where B has multiplicity " + std::to_string(cB));
    W.push_back(*w_low);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        bool killed = false;
        for (auto& w : W)
            if (!omega_interval_member(image(w, k), B)) {
                cert.lines.push_back("k = " + std::to_string(k) + ": x^" + std::to_string(k) + " * (" +
                                     w.to_laurent() + ") = " + image(w, k).to_laurent() + " is outside interval(B)");
                killed = true;
                break;
            }
        if (!killed) {
            cert.survivor = k;
            return cert;
        }
    }
    cert.refuted = true;
    return cert;
}

/** Certifies that no contractive module isomorphism exists between the generating
 *  intervals of M_omega(K)(A) and M_omega(K)(B) (rank one, G = Z, trivial support). */
inline NoIsoCertificate certify_no_contractive_iso(const OmegaShiftMultiset& A, const OmegaShiftMultiset& B,
                                                   std::size_t witnesses = 8) {
    NoIsoCertificate c;
    c.forward = refute_direction(A, B, witnesses);
    c.backward = refute_direction(B, A, witnesses);
    c.no_contractive_iso = c.forward.refuted || c.backward.refuted;
    return c;
}

}  // namespace grk
