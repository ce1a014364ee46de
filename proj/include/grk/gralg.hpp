#pragma once
/** @file gralg.hpp
 *  @brief Monomial graded *-fields, homogeneous matrices over them, graded
 *  matricial *-algebras and maps given on matrix units.
 *
 *  The graded field is K[G_A] with u_g u_h = u_{g+h} and u_g* = u_{-g}. A
 *  homogeneous matrix of degree d in M_n(A)(g_1..g_n) therefore only stores
 *  base-field coefficients: the entry at (i,j) is c * u_e with e forced to be
 *  d + g_j - g_i.
 */

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grk/field.hpp"
#include "grk/grading.hpp"

namespace grk {

template <StarScalar F>
struct GradedStarField {
    BaseStarField<F> base;
    CosetSpace support;

    const FGAbelianGroup& grading() const { return support->ambient(); }
};

template <StarScalar F>
using FieldPtr = std::shared_ptr<const GradedStarField<F>>;

template <StarScalar F>
FieldPtr<F> make_field(BaseStarField<F> base, const FGAbelianGroup& grading, std::vector<Vec> support_generators) {
    return std::make_shared<const GradedStarField<F>>(
        GradedStarField<F>{std::move(base), make_space(grading, std::move(support_generators))});
}

template <StarScalar F>
bool same_field(const FieldPtr<F>& a, const FieldPtr<F>& b) {
    return a == b || (a && b && a->base.name == b->base.name && a->base.modulus == b->base.modulus &&
                      *a->support == *b->support);
}

/** c * u_d with c != 0 and d in the support. */
template <StarScalar F>
struct HomogeneousScalar {
    F coefficient;
    Vec degree;

    friend HomogeneousScalar operator*(const HomogeneousScalar& a, const HomogeneousScalar& b) {
        Vec d(a.degree);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += b.degree[i];
        return {F(a.coefficient * b.coefficient), d};
    }
    HomogeneousScalar star() const {
        Vec d(degree);
        for (auto& x : d) x = -x;
        return {ScalarOps<F>::conj(coefficient), d};
    }
};

template <StarScalar F>
class GradedMatrix {
public:
    using Index = std::pair<std::size_t, std::size_t>;

    using Shifts = std::shared_ptr<const std::vector<Vec>>;

    GradedMatrix(FieldPtr<F> field, std::vector<Vec> row_shifts, std::vector<Vec> col_shifts, Vec degree)
        : field_(std::move(field)) {
        const auto& G = field_->grading();
        for (auto& s : row_shifts) s = G.reduce(s);
        for (auto& s : col_shifts) s = G.reduce(s);
        rows_ = std::make_shared<const std::vector<Vec>>(std::move(row_shifts));
        cols_ = std::make_shared<const std::vector<Vec>>(std::move(col_shifts));
        degree_ = G.reduce(std::move(degree));
    }
    /** Shares already reduced shift vectors. */
    GradedMatrix(FieldPtr<F> field, Shifts rows, Shifts cols, Vec degree)
        : field_(std::move(field)), rows_(std::move(rows)), cols_(std::move(cols)) {
        degree_ = field_->grading().reduce(std::move(degree));
    }

    static GradedMatrix square(FieldPtr<F> field, const std::vector<Vec>& shifts, Vec degree) {
        return GradedMatrix(std::move(field), shifts, shifts, std::move(degree));
    }
    static GradedMatrix square(FieldPtr<F> field, const Shifts& shifts, Vec degree) {
        return GradedMatrix(std::move(field), shifts, shifts, std::move(degree));
    }
    static GradedMatrix identity(FieldPtr<F> field, const Shifts& shifts) {
        GradedMatrix m(field, shifts, shifts, field->grading().zero());
        for (std::size_t i = 0; i < shifts->size(); ++i) m.set(i, i, field->base.one());
        return m;
    }

    const FieldPtr<F>& field() const { return field_; }
    std::size_t rows() const { return rows_->size(); }
    std::size_t cols() const { return cols_->size(); }
    const std::vector<Vec>& row_shifts() const { return *rows_; }
    const std::vector<Vec>& col_shifts() const { return *cols_; }
    const Shifts& row_shift_ptr() const { return rows_; }
    const Shifts& col_shift_ptr() const { return cols_; }
    const Vec& degree() const { return degree_; }
    const std::map<Index, F>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    /** Degree carried by a nonzero entry at (i, j). */
    Vec entry_degree(std::size_t i, std::size_t j) const {
        bounds(i, j);
        const auto& G = field_->grading();
        return G.sub(G.add(degree_, (*cols_)[j]), (*rows_)[i]);
    }
    bool admissible(std::size_t i, std::size_t j) const { return field_->support->contains(entry_degree(i, j)); }

    void set(std::size_t i, std::size_t j, const F& c) {
        if (ScalarOps<F>::is_zero(c)) {
            bounds(i, j);
            entries_.erase({i, j});
            return;
        }
        require_admissible(i, j);
        entries_[{i, j}] = c;
    }
    void set(std::size_t i, std::size_t j, const HomogeneousScalar<F>& h) {
        const auto& G = field_->grading();
        if (G.reduce(h.degree) != entry_degree(i, j))
            throw DegreeMismatch("entry degree " + format_vec(h.degree) + " but position (" + std::to_string(i) +
                                 "," + std::to_string(j) + ") needs " + format_vec(entry_degree(i, j)));
        set(i, j, h.coefficient);
    }
    void add_to(std::size_t i, std::size_t j, const F& c) {
        if (ScalarOps<F>::is_zero(c)) return;
        auto it = entries_.find({i, j});
        if (it == entries_.end()) {
            require_admissible(i, j);
            entries_.emplace(Index{i, j}, c);
            return;
        }
        it->second = F(it->second + c);
        if (ScalarOps<F>::is_zero(it->second)) entries_.erase(it);
    }

    F get(std::size_t i, std::size_t j) const {
        bounds(i, j);
        auto it = entries_.find({i, j});
        return it == entries_.end() ? field_->base.zero() : it->second;
    }
    std::optional<HomogeneousScalar<F>> entry(std::size_t i, std::size_t j) const {
        auto it = entries_.find({i, j});
        if (it == entries_.end()) return std::nullopt;
        return HomogeneousScalar<F>{it->second, entry_degree(i, j)};
    }

    /** Multiplication by the unitary u_{d - degree}; d - degree must lie in the support. */
    GradedMatrix with_degree(const Vec& d) const {
        const auto& G = field_->grading();
        if (!field_->support->contains(G.sub(d, degree_)))
            throw NotInSupport("degree change " + format_vec(G.sub(d, degree_)) + " is outside the support");
        GradedMatrix r(*this);
        r.degree_ = G.reduce(d);
        return r;
    }

    /** Stored entries that break the degree rule (empty for any matrix built through set()). */
    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        for (auto& [ij, c] : entries_)
            if (!admissible(ij.first, ij.second))
                out.push_back("entry (" + std::to_string(ij.first) + "," + std::to_string(ij.second) +
                              ") has degree " + format_vec(entry_degree(ij.first, ij.second)) + " outside the support");
        return out;
    }

    bool same_shape(const GradedMatrix& o) const {
        return (rows_ == o.rows_ || *rows_ == *o.rows_) && (cols_ == o.cols_ || *cols_ == *o.cols_);
    }

    bool operator==(const GradedMatrix& o) const {
        return same_shape(o) && (entries_.empty() && o.entries_.empty() ? true : degree_ == o.degree_) &&
               entries_ == o.entries_;
    }

    GradedMatrix& operator+=(const GradedMatrix& o) {
        check_sum(o);
        if (entries_.empty()) degree_ = o.degree_;
        for (auto& [ij, c] : o.entries_) add_to(ij.first, ij.second, c);
        return *this;
    }
    GradedMatrix& operator-=(const GradedMatrix& o) {
        check_sum(o);
        if (entries_.empty()) degree_ = o.degree_;
        for (auto& [ij, c] : o.entries_) add_to(ij.first, ij.second, F(-c));
        return *this;
    }
    friend GradedMatrix operator+(GradedMatrix a, const GradedMatrix& b) { return a += b; }
    friend GradedMatrix operator-(GradedMatrix a, const GradedMatrix& b) { return a -= b; }

    friend GradedMatrix operator*(const GradedMatrix& a, const GradedMatrix& b) {
        if (a.cols_ != b.rows_ && *a.cols_ != *b.rows_) throw ShapeMismatch("column shifts of the left factor differ from row shifts of the right");
        const auto& G = a.field_->grading();
        GradedMatrix r(a.field_, a.rows_, b.cols_, G.add(a.degree_, b.degree_));
        for (auto& [ij, c] : a.entries_) {
            auto lo = b.entries_.lower_bound({ij.second, 0});
            for (auto it = lo; it != b.entries_.end() && it->first.first == ij.second; ++it)
                r.add_to(ij.first, it->first.second, F(c * it->second));
        }
        return r;
    }
    friend GradedMatrix operator*(const F& s, const GradedMatrix& a) {
        GradedMatrix r(a.field_, a.rows_, a.cols_, a.degree_);
        if (ScalarOps<F>::is_zero(s)) return r;
        for (auto& [ij, c] : a.entries_) r.entries_.emplace(ij, F(s * c));
        return r;
    }

    /** Conjugate transpose; the degree is negated. */
    GradedMatrix star() const {
        GradedMatrix r(field_, cols_, rows_, field_->grading().neg(degree_));
        for (auto& [ij, c] : entries_) r.entries_.emplace(Index{ij.second, ij.first}, ScalarOps<F>::conj(c));
        return r;
    }

private:
    void bounds(std::size_t i, std::size_t j) const {
        if (i >= rows_->size() || j >= cols_->size())
            throw IndexOutOfRange("matrix index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    }
    void require_admissible(std::size_t i, std::size_t j) const {
        if (!admissible(i, j))
            throw NotInSupport("entry (" + std::to_string(i) + "," + std::to_string(j) + ") would need degree " +
                               format_vec(entry_degree(i, j)) + " outside the support");
    }
    void check_sum(const GradedMatrix& o) const {
        if (!same_shape(o)) throw ShapeMismatch("matrix sum with different shifts");
        if (degree_ != o.degree_ && !entries_.empty() && !o.entries_.empty())
            throw DegreeMismatch("sum of matrices of degrees " + format_vec(degree_) + " and " + format_vec(o.degree_));
    }

    FieldPtr<F> field_;
    Shifts rows_, cols_;
    Vec degree_;
    std::map<Index, F> entries_;
};

template <StarScalar F>
GradedMatrix<F> star_transpose(const GradedMatrix<F>& m) {
    return m.star();
}

/** Direct sum of graded matrix algebras M_{p(i)}(A)(shift vector i). */
template <StarScalar F>
class MatricialAlgebra {
public:
    MatricialAlgebra() = default;
    MatricialAlgebra(FieldPtr<F> field, std::vector<std::vector<Vec>> block_shifts)
        : field_(std::move(field)), blocks_(std::move(block_shifts)) {
        const auto& G = field_->grading();
        for (auto& b : blocks_) {
            if (b.empty()) throw Error("matrix blocks must have size >= 1");
            for (auto& s : b) s = G.reduce(s);
            ptrs_.push_back(std::make_shared<const std::vector<Vec>>(b));
        }
    }

    const FieldPtr<F>& field() const { return field_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    std::size_t block_size(std::size_t i) const { return blocks_.at(i).size(); }
    const std::vector<Vec>& shifts(std::size_t i) const { return blocks_.at(i); }
    const std::vector<std::vector<Vec>>& all_shifts() const { return blocks_; }
    const std::shared_ptr<const std::vector<Vec>>& shift_ptr(std::size_t i) const { return ptrs_.at(i); }

    bool operator==(const MatricialAlgebra& o) const {
        return same_field(field_, o.field_) && blocks_ == o.blocks_;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            s += (i ? " + " : "") + ("M" + std::to_string(blocks_[i].size()));
            if (field_->grading().dim() == 0) continue;
            s += "(";
            for (std::size_t k = 0; k < blocks_[i].size(); ++k) s += (k ? "," : "") + format_vec(blocks_[i][k]);
            s += ")";
        }
        return s.empty() ? "0" : s;
    }

private:
    FieldPtr<F> field_;
    std::vector<std::vector<Vec>> blocks_;
    std::vector<std::shared_ptr<const std::vector<Vec>>> ptrs_;
};

/** Homogeneous element of a matricial algebra: one square matrix per block. */
template <StarScalar F>
struct Homogeneous {
    Vec degree;
    std::vector<GradedMatrix<F>> blocks;

    bool is_zero() const {
        for (auto& b : blocks)
            if (!b.is_zero()) return false;
        return true;
    }
    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& b : blocks) n += b.nnz();
        return n;
    }
    bool operator==(const Homogeneous& o) const {
        if (blocks.size() != o.blocks.size()) return false;
        if (is_zero() && o.is_zero()) {
            for (std::size_t j = 0; j < blocks.size(); ++j)
                if (!blocks[j].same_shape(o.blocks[j])) return false;
            return true;
        }
        return degree == o.degree && blocks == o.blocks;
    }

    Homogeneous& operator+=(const Homogeneous& o) {
        check(o);
        if (o.is_zero()) return *this;
        if (is_zero()) {
            *this = o;
            return *this;
        }
        if (degree != o.degree) throw DegreeMismatch("sum of elements of different degrees");
        for (std::size_t j = 0; j < blocks.size(); ++j) blocks[j] += o.blocks[j];
        return *this;
    }
    Homogeneous& operator-=(const Homogeneous& o) {
        Homogeneous n(o);
        for (auto& b : n.blocks) b = F(-1) * b;
        return *this += n;
    }
    friend Homogeneous operator+(Homogeneous a, const Homogeneous& b) { return a += b; }
    friend Homogeneous operator-(Homogeneous a, const Homogeneous& b) { return a -= b; }
    friend Homogeneous operator*(const Homogeneous& a, const Homogeneous& b) {
        a.check(b);
        Homogeneous r;
        for (std::size_t j = 0; j < a.blocks.size(); ++j) r.blocks.push_back(a.blocks[j] * b.blocks[j]);
        r.degree = r.blocks.empty() ? a.degree : r.blocks.front().degree();
        return r;
    }
    friend Homogeneous operator*(const F& s, const Homogeneous& a) {
        Homogeneous r{a.degree, {}};
        for (auto& b : a.blocks) r.blocks.push_back(s * b);
        return r;
    }
    Homogeneous star() const {
        Homogeneous r;
        for (auto& b : blocks) r.blocks.push_back(b.star());
        r.degree = r.blocks.empty() ? degree : r.blocks.front().degree();
        return r;
    }
    /** Multiplication by the central unitary u_{d - degree}. */
    Homogeneous with_degree(const Vec& d) const {
        Homogeneous r;
        for (auto& b : blocks) r.blocks.push_back(b.with_degree(d));
        r.degree = r.blocks.empty() ? d : r.blocks.front().degree();
        return r;
    }

private:
    void check(const Homogeneous& o) const {
        if (blocks.size() != o.blocks.size()) throw ShapeMismatch("elements of different algebras");
    }
};

template <StarScalar F>
Homogeneous<F> zero_element(const MatricialAlgebra<F>& R, const Vec& degree) {
    Homogeneous<F> x{R.field()->grading().reduce(degree), {}};
    for (std::size_t i = 0; i < R.num_blocks(); ++i)
        x.blocks.push_back(GradedMatrix<F>::square(R.field(), R.shift_ptr(i), degree));
    return x;
}

template <StarScalar F>
Homogeneous<F> unit_element(const MatricialAlgebra<F>& R) {
    Homogeneous<F> x{R.field()->grading().zero(), {}};
    for (std::size_t i = 0; i < R.num_blocks(); ++i)
        x.blocks.push_back(GradedMatrix<F>::identity(R.field(), R.shift_ptr(i)));
    return x;
}

/** e^i_{kl}: coefficient 1 at (k, l) of block i, degree g^i_k - g^i_l (0-based indices). */
template <StarScalar F>
Homogeneous<F> matrix_unit(const MatricialAlgebra<F>& R, std::size_t i, std::size_t k, std::size_t l) {
    if (i >= R.num_blocks() || k >= R.block_size(i) || l >= R.block_size(i))
        throw IndexOutOfRange("matrix unit index out of range");
    const auto& G = R.field()->grading();
    auto x = zero_element(R, G.sub(R.shifts(i)[k], R.shifts(i)[l]));
    x.blocks[i].set(k, l, R.field()->base.one());
    return x;
}

/** Finite sum of homogeneous elements keyed by degree. */
template <StarScalar F>
class MatricialElement {
public:
    MatricialElement() = default;
    explicit MatricialElement(const Homogeneous<F>& h) { *this += h; }

    const std::map<Vec, Homogeneous<F>>& parts() const { return parts_; }

    MatricialElement& operator+=(const Homogeneous<F>& h) {
        if (h.is_zero()) return *this;
        auto it = parts_.find(h.degree);
        if (it == parts_.end()) {
            parts_.emplace(h.degree, h);
        } else {
            it->second += h;
            if (it->second.is_zero()) parts_.erase(it);
        }
        return *this;
    }
    MatricialElement& operator+=(const MatricialElement& o) {
        for (auto& [d, h] : o.parts_) *this += h;
        return *this;
    }
    friend MatricialElement operator*(const MatricialElement& a, const MatricialElement& b) {
        MatricialElement r;
        for (auto& [d, x] : a.parts_)
            for (auto& [e, y] : b.parts_) r += x * y;
        return r;
    }
    MatricialElement star() const {
        MatricialElement r;
        for (auto& [d, x] : parts_) r += x.star();
        return r;
    }
    bool operator==(const MatricialElement& o) const { return parts_ == o.parts_; }

private:
    std::map<Vec, Homogeneous<F>> parts_;
};

/** A map between matricial algebras given by the images of all matrix units.
 *  It is extended A-linearly, which is how every map built here behaves. */
template <StarScalar F>
struct ExplicitHom {
    MatricialAlgebra<F> source, target;
    /** images[i][k * p(i) + l] = image of e^i_{kl}. */
    std::vector<std::vector<Homogeneous<F>>> images;

    const Homogeneous<F>& image(std::size_t i, std::size_t k, std::size_t l) const {
        return images.at(i).at(k * source.block_size(i) + l);
    }

    Homogeneous<F> apply(const Homogeneous<F>& x) const {
        auto r = zero_element(target, x.degree);
        for (std::size_t i = 0; i < x.blocks.size(); ++i)
            for (auto& [kl, c] : x.blocks[i].entries()) {
                const auto& img = image(i, kl.first, kl.second);
                for (std::size_t j = 0; j < img.blocks.size(); ++j)
                    for (auto& [rs, d] : img.blocks[j].entries()) r.blocks[j].add_to(rs.first, rs.second, F(c * d));
            }
        return r;
    }

    MatricialElement<F> apply(const MatricialElement<F>& x) const {
        MatricialElement<F> r;
        for (auto& [d, h] : x.parts()) r += apply(h);
        return r;
    }

    Homogeneous<F> image_of_unit() const {
        auto r = zero_element(target, target.field()->grading().zero());
        for (std::size_t i = 0; i < source.num_blocks(); ++i)
            for (std::size_t k = 0; k < source.block_size(i); ++k) r += image(i, k, k);
        return r;
    }

    bool operator==(const ExplicitHom& o) const {
        return source == o.source && target == o.target && images == o.images;
    }
};

template <StarScalar F>
ExplicitHom<F> identity_hom(const MatricialAlgebra<F>& R) {
    ExplicitHom<F> h{R, R, {}};
    for (std::size_t i = 0; i < R.num_blocks(); ++i) {
        h.images.emplace_back();
        for (std::size_t k = 0; k < R.block_size(i); ++k)
            for (std::size_t l = 0; l < R.block_size(i); ++l) h.images[i].push_back(matrix_unit(R, i, k, l));
    }
    return h;
}

/** g after f. */
template <StarScalar F>
ExplicitHom<F> compose(const ExplicitHom<F>& g, const ExplicitHom<F>& f) {
    if (!(f.target == g.source)) throw ShapeMismatch("composition of maps with mismatched middle algebra");
    ExplicitHom<F> h{f.source, g.target, {}};
    for (auto& block : f.images) {
        h.images.emplace_back();
        for (auto& img : block) h.images.back().push_back(g.apply(img));
    }
    return h;
}

/** r -> u f(r) u*. */
template <StarScalar F>
ExplicitHom<F> conjugate(const Homogeneous<F>& u, const ExplicitHom<F>& f) {
    const auto us = u.star();
    ExplicitHom<F> h{f.source, f.target, {}};
    for (auto& block : f.images) {
        h.images.emplace_back();
        for (auto& img : block) h.images.back().push_back(u * img * us);
    }
    return h;
}

struct HomReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/** Checks degrees, entry admissibility, the matrix-unit relations, the involution
 *  and optionally unitality. Additivity holds by construction of the linear extension. */
template <StarScalar F>
HomReport verify_graded_star_hom(const ExplicitHom<F>& h, bool require_unital = false) {
    HomReport rep;
    auto& v = rep.violations;
    const auto& R = h.source;
    const auto& S = h.target;
    const auto& G = R.field()->grading();
    auto name = [](std::size_t i, std::size_t k, std::size_t l) {
        return "e^" + std::to_string(i + 1) + "_" + std::to_string(k + 1) + std::to_string(l + 1);
    };
    if (h.images.size() != R.num_blocks()) {
        v.push_back("shape: image list does not match the source blocks");
        return rep;
    }
    for (std::size_t i = 0; i < R.num_blocks(); ++i) {
        const auto p = R.block_size(i);
        if (h.images[i].size() != p * p) {
            v.push_back("shape: block " + std::to_string(i + 1) + " has the wrong number of images");
            return rep;
        }
        for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < p; ++l) {
                const auto& img = h.image(i, k, l);
                if (img.blocks.size() != S.num_blocks()) {
                    v.push_back("shape: image of " + name(i, k, l) + " has the wrong block count");
                    return rep;
                }
                for (std::size_t j = 0; j < S.num_blocks(); ++j) {
                    if (img.blocks[j].row_shifts() != S.shifts(j) || img.blocks[j].col_shifts() != S.shifts(j)) {
                        v.push_back("shape: image of " + name(i, k, l) + " has wrong shifts in target block " +
                                    std::to_string(j + 1));
                        return rep;
                    }
                    for (auto& s : img.blocks[j].violations()) v.push_back("entries: " + name(i, k, l) + ": " + s);
                }
                const auto want = G.sub(R.shifts(i)[k], R.shifts(i)[l]);
                if (!img.is_zero() && img.degree != want)
                    v.push_back("degree: image of " + name(i, k, l) + " has degree " + format_vec(img.degree) +
                                ", expected " + format_vec(want));
                if (!(img.star() == h.image(i, l, k)))
                    v.push_back("involution: image of " + name(i, k, l) + "* differs from image of " + name(i, l, k));
            }
        for (std::size_t k = 0; k < p; ++k) {
            if (!(h.image(i, 0, k) * h.image(i, k, 0) == h.image(i, 0, 0)))
                v.push_back("multiplicativity: " + name(i, 0, k) + name(i, k, 0) + " != " + name(i, 0, 0));
            for (std::size_t l = 0; l < p; ++l) {
                if (!(h.image(i, k, 0) * h.image(i, 0, l) == h.image(i, k, l)))
                    v.push_back("multiplicativity: " + name(i, k, 0) + name(i, 0, l) + " != " + name(i, k, l));
                if (k != l && !(h.image(i, 0, k) * h.image(i, l, 0)).is_zero())
                    v.push_back("multiplicativity: " + name(i, 0, k) + name(i, l, 0) + " != 0");
            }
        }
    }
    for (std::size_t i = 0; i < R.num_blocks(); ++i)
        for (std::size_t i2 = i + 1; i2 < R.num_blocks(); ++i2)
            for (std::size_t k = 0; k < R.block_size(i); ++k)
                for (std::size_t m = 0; m < R.block_size(i2); ++m)
                    if (!(h.image(i, k, k) * h.image(i2, m, m)).is_zero())
                        v.push_back("multiplicativity: " + name(i, k, k) + name(i2, m, m) + " != 0");
    if (require_unital && !(h.image_of_unit() == unit_element(S))) v.push_back("unitality: image of 1 is not 1");
    return rep;
}

/** Relabels M_n(A)(g) by a permutation: source position k lands at target
 *  position perm[k] (0-based one-line form), and the target shift there is g_k + d. */
template <StarScalar F>
ExplicitHom<F> permute_shift_iso(const MatricialAlgebra<F>& R, const std::vector<std::size_t>& perm, const Vec& d) {
    if (R.num_blocks() != 1) throw ShapeMismatch("permute_shift_iso expects a single block");
    const auto n = R.block_size(0);
    if (perm.size() != n) throw ShapeMismatch("permutation size differs from the block size");
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw Error("not a permutation");
        seen[p] = true;
    }
    const auto& G = R.field()->grading();
    std::vector<Vec> tshift(n);
    for (std::size_t k = 0; k < n; ++k) tshift[perm[k]] = G.add(R.shifts(0)[k], d);
    MatricialAlgebra<F> T(R.field(), {tshift});
    ExplicitHom<F> h{R, T, {{}}};
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            auto x = zero_element(T, G.sub(R.shifts(0)[k], R.shifts(0)[l]));
            x.blocks[0].set(perm[k], perm[l], R.field()->base.one());
            h.images[0].push_back(x);
        }
    return h;
}

/** Conjugation by diag(u_{d_1}, ..., u_{d_n}); each d_i must lie in the support. */
template <StarScalar F>
ExplicitHom<F> unitary_twist_iso(const MatricialAlgebra<F>& R, const std::vector<Vec>& d) {
    if (R.num_blocks() != 1) throw ShapeMismatch("unitary_twist_iso expects a single block");
    const auto n = R.block_size(0);
    if (d.size() != n) throw ShapeMismatch("twist list size differs from the block size");
    const auto& G = R.field()->grading();
    std::vector<Vec> tshift(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!R.field()->support->contains(d[k]))
            throw NotInSupport("twist degree " + format_vec(d[k]) + " is outside the support");
        tshift[k] = G.add(R.shifts(0)[k], d[k]);
    }
    MatricialAlgebra<F> T(R.field(), {tshift});
    ExplicitHom<F> h{R, T, {{}}};
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            auto x = zero_element(T, G.sub(R.shifts(0)[k], R.shifts(0)[l]));
            x.blocks[0].set(k, l, R.field()->base.one());
            h.images[0].push_back(x);
        }
    return h;
}

/** x -> x (tensor) 1_k on shifts ((g_1 - a)^k, ..., (g_n - a)^k); row (r, s) sits at r*k + s. */
template <StarScalar F>
GradedMatrix<F> tensor_embed(const GradedMatrix<F>& x, std::size_t k, const Vec& alpha) {
    if (k == 0) throw Error("tensor_embed needs k >= 1");
    if (x.row_shifts() != x.col_shifts()) throw ShapeMismatch("tensor_embed expects a square matrix");
    const auto& G = x.field()->grading();
    std::vector<Vec> shifts;
    for (auto& g : x.row_shifts())
        for (std::size_t s = 0; s < k; ++s) shifts.push_back(G.sub(g, alpha));
    auto r = GradedMatrix<F>::square(x.field(), shifts, x.degree());
    for (auto& [ij, c] : x.entries())
        for (std::size_t s = 0; s < k; ++s) r.set(ij.first * k + s, ij.second * k + s, c);
    return r;
}

/** Matrix whose entries are linear forms in named source coordinates. */
template <StarScalar F>
using SymbolicMatrix = std::map<std::pair<std::size_t, std::size_t>, std::map<std::string, F>>;

/** Image of the generic element sum_{i,k,l} label[i][k][l] e^i_{kl}, one symbolic matrix per target block. */
template <StarScalar F>
std::vector<SymbolicMatrix<F>> symbolic_image(const ExplicitHom<F>& h,
                                              const std::vector<std::vector<std::vector<std::string>>>& labels) {
    std::vector<SymbolicMatrix<F>> out(h.target.num_blocks());
    for (std::size_t i = 0; i < h.source.num_blocks(); ++i)
        for (std::size_t k = 0; k < h.source.block_size(i); ++k)
            for (std::size_t l = 0; l < h.source.block_size(i); ++l) {
                const auto& img = h.image(i, k, l);
                for (std::size_t j = 0; j < img.blocks.size(); ++j)
                    for (auto& [rs, c] : img.blocks[j].entries()) {
                        auto& cell = out[j][rs];
                        auto& coef = cell[labels.at(i).at(k).at(l)];
                        coef = F(coef + c);
                        if (ScalarOps<F>::is_zero(coef)) cell.erase(labels[i][k][l]);
                        if (cell.empty()) out[j].erase(rs);
                    }
            }
    return out;
}

template <StarScalar F>
std::string format_symbolic(const SymbolicMatrix<F>& m, std::size_t n) {
    std::string s;
    for (std::size_t r = 0; r < n; ++r) {
        s += "[";
        for (std::size_t c = 0; c < n; ++c) {
            std::string cell;
            auto it = m.find({r, c});
            if (it == m.end()) {
                cell = "0";
            } else {
                for (auto& [name, coef] : it->second) {
                    auto cs = ScalarOps<F>::to_string(coef);
                    cell += (cell.empty() ? "" : "+") + (cs == "1" ? name : cs + name);
                }
            }
            s += (c ? " " : "") + cell;
        }
        s += "]\n";
    }
    return s;
}

}  // namespace grk
