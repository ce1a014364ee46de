#pragma once
/** @file grading.hpp
 *  @brief Finitely generated abelian grading groups, subgroups in Hermite
 *  normal form, canonical cosets and the group rings Z[G/H].
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grk/errors.hpp"

namespace grk {

/** Coordinates of a group element. */
using Vec = std::vector<std::int64_t>;

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline void axpy(Vec& y, std::int64_t a, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace detail

/** Z^r + Z/d_1 + ... + Z/d_t, torsion moduli kept in the order given. */
class FGAbelianGroup {
public:
    FGAbelianGroup() = default;
    FGAbelianGroup(std::size_t free_rank, std::vector<std::int64_t> torsion_moduli)
        : free_rank_(free_rank), torsion_(std::move(torsion_moduli)) {
        for (auto d : torsion_)
            if (d < 2) throw Error("torsion modulus must be >= 2");
    }

    static FGAbelianGroup trivial() { return {}; }
    static FGAbelianGroup free(std::size_t r) { return {r, {}}; }
    static FGAbelianGroup cyclic(std::int64_t d) { return {0, {d}}; }

    std::size_t free_rank() const { return free_rank_; }
    const std::vector<std::int64_t>& torsion_moduli() const { return torsion_; }
    std::size_t dim() const { return free_rank_ + torsion_.size(); }

    void check(const Vec& v) const {
        if (v.size() != dim())
            throw ShapeMismatch("group element has " + std::to_string(v.size()) +
                                " coordinates, group needs " + std::to_string(dim()));
    }

    Vec zero() const { return Vec(dim(), 0); }

    Vec reduce(Vec v) const {
        check(v);
        for (std::size_t i = 0; i < torsion_.size(); ++i)
            v[free_rank_ + i] = detail::mod_pos(v[free_rank_ + i], torsion_[i]);
        return v;
    }

    Vec add(const Vec& a, const Vec& b) const {
        check(a);
        check(b);
        Vec r(a);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
        return reduce(std::move(r));
    }
    Vec neg(const Vec& a) const {
        check(a);
        Vec r(a);
        for (auto& x : r) x = -x;
        return reduce(std::move(r));
    }
    Vec sub(const Vec& a, const Vec& b) const { return add(a, neg(b)); }

    bool operator==(const FGAbelianGroup&) const = default;

    std::string to_string() const {
        std::string s;
        if (free_rank_ > 0) s = "Z^" + std::to_string(free_rank_);
        for (auto d : torsion_) s += (s.empty() ? "" : " + ") + ("Z/" + std::to_string(d));
        return s.empty() ? "0" : s;
    }

private:
    std::size_t free_rank_ = 0;
    std::vector<std::int64_t> torsion_;
};

/** "3" for rank one, "(1,2)" otherwise, "()" for the trivial group. */
inline std::string format_vec(const Vec& v) {
    if (v.size() == 1) return std::to_string(v[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

inline Vec parse_vec(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')') throw ParseError("unbalanced parenthesis in '" + text + "'");
        t = t.substr(1, t.size() - 2);
        Vec v;
        if (t.empty()) return v;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t pos = 0;
                v.push_back(std::stoll(item, &pos));
                if (pos != item.size()) throw ParseError("bad integer '" + item + "'");
            } catch (const std::logic_error&) {
                throw ParseError("bad integer '" + item + "'");
            }
        }
        return v;
    }
    try {
        std::size_t pos = 0;
        Vec v{std::stoll(t, &pos)};
        if (pos != t.size()) throw ParseError("bad group element '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad group element '" + text + "'");
    }
}

/** Subgroup of an FGAbelianGroup, stored as a Hermite normal form of its
 *  generators together with the torsion relations. */
class Subgroup {
public:
    Subgroup(FGAbelianGroup ambient, std::vector<Vec> generators)
        : ambient_(std::move(ambient)), generators_(std::move(generators)) {
        for (auto& g : generators_) g = ambient_.reduce(g);
        build();
    }

    static Subgroup trivial(const FGAbelianGroup& g) { return {g, {}}; }
    static Subgroup whole(const FGAbelianGroup& g) {
        std::vector<Vec> gens;
        for (std::size_t i = 0; i < g.dim(); ++i) {
            Vec e = g.zero();
            e[i] = 1;
            gens.push_back(e);
        }
        return {g, gens};
    }

    const FGAbelianGroup& ambient() const { return ambient_; }
    const std::vector<Vec>& generators() const { return generators_; }
    const std::vector<Vec>& reduced_basis() const { return basis_; }
    const std::vector<std::size_t>& pivot_columns() const { return pivots_; }

    /** Canonical representative: pivot coordinates reduced into [0, pivot). */
    Vec reduce(const Vec& v) const {
        ambient_.check(v);
        Vec r(v);
        for (std::size_t p = 0; p < basis_.size(); ++p) {
            const auto c = pivots_[p];
            const auto f = detail::floor_div(r[c], basis_[p][c]);
            if (f != 0) detail::axpy(r, -f, basis_[p]);
        }
        return r;
    }

    bool contains(const Vec& v) const {
        const Vec r = reduce(v);
        return std::all_of(r.begin(), r.end(), [](auto x) { return x == 0; });
    }

    bool contains(const Subgroup& other) const {
        if (!(other.ambient_ == ambient_)) return false;
        return std::all_of(other.basis_.begin(), other.basis_.end(),
                           [&](const Vec& b) { return contains(b); });
    }

    /** Order of the quotient, or 0 when it is infinite. */
    std::int64_t index() const {
        if (pivots_.size() < ambient_.dim()) return 0;
        std::int64_t n = 1;
        for (std::size_t p = 0; p < basis_.size(); ++p) n *= basis_[p][pivots_[p]];
        return n;
    }

    /** All canonical representatives when the quotient is finite. */
    std::vector<Vec> coset_representatives() const {
        if (index() == 0) throw Error("quotient is infinite");
        std::vector<Vec> out{ambient_.zero()};
        for (std::size_t p = 0; p < basis_.size(); ++p) {
            std::vector<Vec> next;
            for (const auto& v : out)
                for (std::int64_t a = 0; a < basis_[p][pivots_[p]]; ++a) {
                    Vec w(v);
                    w[pivots_[p]] = a;
                    next.push_back(w);
                }
            out = std::move(next);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool operator==(const Subgroup& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

    std::string to_string() const {
        std::string s = "<";
        for (std::size_t i = 0; i < basis_.size(); ++i) s += (i ? "," : "") + format_vec(basis_[i]);
        return s + "> in " + ambient_.to_string();
    }

private:
    void build() {
        const std::size_t n = ambient_.dim();
        std::vector<Vec> rows = generators_;
        for (std::size_t i = 0; i < ambient_.torsion_moduli().size(); ++i) {
            Vec t(n, 0);
            t[ambient_.free_rank() + i] = ambient_.torsion_moduli()[i];
            rows.push_back(t);
        }
        std::size_t top = 0;
        for (std::size_t c = 0; c < n && top < rows.size(); ++c) {
            bool found = false;
            for (;;) {
                std::size_t best = rows.size();
                for (std::size_t r = top; r < rows.size(); ++r)
                    if (rows[r][c] != 0 &&
                        (best == rows.size() || std::llabs(rows[r][c]) < std::llabs(rows[best][c])))
                        best = r;
                if (best == rows.size()) break;
                found = true;
                std::swap(rows[top], rows[best]);
                bool clean = true;
                for (std::size_t r = top + 1; r < rows.size(); ++r) {
                    if (rows[r][c] == 0) continue;
                    detail::axpy(rows[r], -detail::floor_div(rows[r][c], rows[top][c]), rows[top]);
                    if (rows[r][c] != 0) clean = false;
                }
                if (clean) break;
            }
            if (!found) continue;
            if (rows[top][c] < 0)
                for (auto& x : rows[top]) x = -x;
            pivots_.push_back(c);
            ++top;
        }
        rows.resize(top);
        for (std::size_t p = 0; p < rows.size(); ++p)
            for (std::size_t q = 0; q < p; ++q) {
                const auto f = detail::floor_div(rows[q][pivots_[p]], rows[p][pivots_[p]]);
                if (f != 0) detail::axpy(rows[q], -f, rows[p]);
            }
        basis_ = std::move(rows);
    }

    FGAbelianGroup ambient_;
    std::vector<Vec> generators_;
    std::vector<Vec> basis_;
    std::vector<std::size_t> pivots_;
};

/** Coset space G/H; shared between all group-ring elements over it. */
using CosetSpace = std::shared_ptr<const Subgroup>;

inline CosetSpace make_space(const FGAbelianGroup& g, std::vector<Vec> gens) {
    return std::make_shared<const Subgroup>(g, std::move(gens));
}

inline bool same_space(const CosetSpace& a, const CosetSpace& b) {
    return a == b || (a && b && *a == *b);
}

struct Coset {
    CosetSpace subgroup;
    Vec representative;

    bool operator==(const Coset& o) const {
        return same_space(subgroup, o.subgroup) && representative == o.representative;
    }
};

inline bool subgroup_member(const Vec& g, const Subgroup& h) { return h.contains(g); }

inline Coset coset_reduce(const Vec& g, const CosetSpace& h) { return {h, h->reduce(g)}; }

/** Finite integer combination of cosets in G/H; zero coefficients are never stored. */
class GroupRingElem {
public:
    GroupRingElem() = default;
    explicit GroupRingElem(CosetSpace space) : space_(std::move(space)) {}

    static GroupRingElem monomial(const CosetSpace& s, const Vec& g, std::int64_t c = 1) {
        GroupRingElem r(s);
        r.add_term(g, c);
        return r;
    }
    static GroupRingElem constant(const CosetSpace& s, std::int64_t c) {
        return monomial(s, s->ambient().zero(), c);
    }

    const CosetSpace& space() const { return space_; }
    const std::map<Vec, std::int64_t>& terms() const { return terms_; }

    void add_term(const Vec& g, std::int64_t c) {
        if (c == 0) return;
        auto key = space_->reduce(g);
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), c);
        } else if ((it->second += c) == 0) {
            terms_.erase(it);
        }
    }

    std::int64_t coefficient(const Vec& g) const {
        auto it = terms_.find(space_->reduce(g));
        return it == terms_.end() ? 0 : it->second;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_nonnegative() const {
        return std::all_of(terms_.begin(), terms_.end(), [](auto& t) { return t.second > 0; });
    }
    std::int64_t augmentation() const {
        std::int64_t s = 0;
        for (auto& [g, c] : terms_) s += c;
        return s;
    }

    GroupRingElem operator-() const {
        GroupRingElem r(*this);
        for (auto& [g, c] : r.terms_) c = -c;
        return r;
    }
    GroupRingElem& operator+=(const GroupRingElem& o) {
        adopt(o);
        for (auto& [g, c] : o.terms_) add_reduced(g, c);
        return *this;
    }
    GroupRingElem& operator-=(const GroupRingElem& o) {
        adopt(o);
        for (auto& [g, c] : o.terms_) add_reduced(g, -c);
        return *this;
    }
    friend GroupRingElem operator+(GroupRingElem a, const GroupRingElem& b) { return a += b; }
    friend GroupRingElem operator-(GroupRingElem a, const GroupRingElem& b) { return a -= b; }

    friend GroupRingElem operator*(const GroupRingElem& a, const GroupRingElem& b) {
        GroupRingElem r(a.space_ ? a.space_ : b.space_);
        if (a.is_zero() || b.is_zero()) return r;
        check(a, b);
        const auto& G = r.space_->ambient();
        for (auto& [g, c] : a.terms_)
            for (auto& [h, d] : b.terms_) r.add_term(G.add(g, h), c * d);
        return r;
    }
    friend GroupRingElem operator*(std::int64_t k, GroupRingElem a) {
        if (k == 0) return GroupRingElem(a.space_);
        for (auto& [g, c] : a.terms_) c *= k;
        return a;
    }

    /** Multiplication by the image of g. */
    GroupRingElem act(const Vec& g) const {
        GroupRingElem r(space_);
        const auto& G = space_->ambient();
        for (auto& [h, c] : terms_) r.add_term(G.add(g, h), c);
        return r;
    }

    bool operator==(const GroupRingElem& o) const {
        if (terms_.empty() && o.terms_.empty()) return true;
        return same_space(space_, o.space_) && terms_ == o.terms_;
    }

    /** "2*[0] + 1*[(1,2)]", "0" for zero, plain integers over the trivial group. */
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [g, c] : terms_) {
            if (first) {
                s += (c < 0 ? "-" : "");
            } else {
                s += (c < 0 ? " - " : " + ");
            }
            s += std::to_string(c < 0 ? -c : c);
            if (!g.empty()) s += "*[" + format_vec(g) + "]";
            first = false;
        }
        return s;
    }

    /** Laurent-style display for rank-one groups: "1 + x^-1". */
    std::string to_laurent(const std::string& var = "x") const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [g, c] = *it;
            const auto a = c < 0 ? -c : c;
            s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            std::string mono;
            if (g.size() == 1 && g[0] == 0) {
                mono = "";
            } else if (g.size() == 1 && g[0] == 1) {
                mono = var;
            } else if (g.size() == 1) {
                mono = var + "^" + std::to_string(g[0]);
            } else {
                mono = var + "^" + format_vec(g);
            }
            if (mono.empty()) s += std::to_string(a);
            else s += (a == 1 ? "" : std::to_string(a)) + mono;
            first = false;
        }
        return s;
    }

    static GroupRingElem parse(const std::string& text, const CosetSpace& space) {
        std::string t;
        for (std::size_t i = 0; i < text.size(); ++i) {
            // accept U+2212 as a minus sign
            if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
                static_cast<unsigned char>(text[i + 1]) == 0x88 &&
                static_cast<unsigned char>(text[i + 2]) == 0x92) {
                t += '-';
                i += 2;
            } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
                t += text[i];
            }
        }
        GroupRingElem r(space);
        if (t.empty() || t == "0") return r;
        std::size_t i = 0;
        while (i < t.size()) {
            std::int64_t sign = 1;
            if (t[i] == '+' || t[i] == '-') {
                sign = t[i] == '-' ? -1 : 1;
                ++i;
            } else if (i != 0) {
                throw ParseError("expected '+' or '-' in '" + text + "'");
            }
            std::int64_t coef = 1;
            std::size_t j = i;
            while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
            if (j > i) {
                coef = std::stoll(t.substr(i, j - i));
                i = j;
                if (i < t.size() && t[i] == '*') {
                    ++i;
                } else if (i < t.size() && t[i] == 'x') {
                } else if (i == t.size() || t[i] == '+' || t[i] == '-') {
                    r.add_term(space->ambient().zero(), sign * coef);
                    continue;
                } else {
                    throw ParseError("expected '*' in '" + text + "'");
                }
            }
            if (i < t.size() && t[i] == 'x') {
                // Laurent monomial x, x^k on a rank-one group
                if (space->ambient().dim() != 1) throw ParseError("'x' needs a rank-one grading group in '" + text + "'");
                ++i;
                std::int64_t e = 1;
                if (i < t.size() && t[i] == '^') {
                    std::size_t k = ++i;
                    if (k < t.size() && (t[k] == '-' || t[k] == '+')) ++k;
                    while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
                    if (k == i || !std::isdigit(static_cast<unsigned char>(t[k - 1])))
                        throw ParseError("bad exponent in '" + text + "'");
                    e = std::stoll(t.substr(i, k - i));
                    i = k;
                }
                r.add_term({e}, sign * coef);
                continue;
            }
            if (i >= t.size() || t[i] != '[') throw ParseError("expected '[' or 'x' in '" + text + "'");
            auto close = t.find(']', i);
            if (close == std::string::npos) throw ParseError("missing ']' in '" + text + "'");
            Vec g = parse_vec(t.substr(i + 1, close - i - 1));
            if (g.size() != space->ambient().dim())
                throw ParseError("representative '" + format_vec(g) + "' has wrong rank");
            r.add_term(g, sign * coef);
            i = close + 1;
        }
        return r;
    }

private:
    static void check(const GroupRingElem& a, const GroupRingElem& b) {
        if (!same_space(a.space_, b.space_)) throw SpaceMismatch("group-ring elements over different coset spaces");
    }
    void adopt(const GroupRingElem& o) {
        if (!space_) space_ = o.space_;
        else if (o.space_ && !o.terms_.empty()) check(*this, o);
    }
    void add_reduced(const Vec& g, std::int64_t c) {
        auto it = terms_.find(g);
        if (it == terms_.end()) terms_.emplace(g, c);
        else if ((it->second += c) == 0) terms_.erase(it);
    }

    CosetSpace space_;
    std::map<Vec, std::int64_t> terms_;
};

inline GroupRingElem ring_mul(const GroupRingElem& a, const GroupRingElem& b) { return a * b; }
inline GroupRingElem act(const Vec& g, const GroupRingElem& a) { return a.act(g); }

}  // namespace grk
