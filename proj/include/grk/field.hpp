#pragma once
/** @file field.hpp
 *  @brief Base *-fields: rationals, Gaussian rationals with conjugation, and
 *  prime fields with a runtime modulus.
 */

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>

#include "grk/errors.hpp"

namespace grk {

using Rational = mpq_class;

/** a + b i with rational parts. */
struct GaussianRational {
    Rational re{0}, im{0};

    GaussianRational() = default;
    GaussianRational(long r) : re(r) {}  // NOLINT
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {Rational(a.re + b.re), Rational(a.im + b.im)};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {Rational(a.re - b.re), Rational(a.im - b.im)};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw Error("division by zero");
        GaussianRational c{b.re, Rational(-b.im)};
        auto p = a * c;
        return {Rational(p.re / n), Rational(p.im / n)};
    }
    GaussianRational operator-() const { return {Rational(-re), Rational(-im)}; }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
};

/** Element of F_p. A modulus of 0 marks an untyped integer literal that adopts
 *  the modulus of the first typed operand it meets. */
struct PrimeFieldElem {
    std::int64_t v = 0;
    std::uint64_t p = 0;

    PrimeFieldElem() = default;
    PrimeFieldElem(long x) : v(x) {}  // NOLINT
    PrimeFieldElem(std::int64_t x, std::uint64_t mod) : v(x), p(mod) { normalize(); }

    void normalize() {
        if (p == 0) return;
        const auto m = static_cast<std::int64_t>(p);
        v %= m;
        if (v < 0) v += m;
    }
    static std::uint64_t join(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        if (a.p && b.p && a.p != b.p) throw Error("prime field moduli differ");
        return a.p ? a.p : b.p;
    }
    static std::int64_t mulmod(std::int64_t a, std::int64_t b, std::uint64_t p) {
        if (p == 0) return a * b;
        return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % static_cast<__int128>(p));
    }

    friend PrimeFieldElem operator+(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        return {a.v + b.v, join(a, b)};
    }
    friend PrimeFieldElem operator-(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        return {a.v - b.v, join(a, b)};
    }
    friend PrimeFieldElem operator*(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        const auto p = join(a, b);
        PrimeFieldElem x(a.v, p), y(b.v, p);
        return {mulmod(x.v, y.v, p), p};
    }
    PrimeFieldElem inverse() const {
        if (p == 0) {
            if (v == 1 || v == -1) return *this;
            throw Error("cannot invert an untyped prime-field literal");
        }
        if (v == 0) throw Error("division by zero");
        // Fermat
        std::int64_t result = 1, base = v;
        std::uint64_t e = p - 2;
        while (e) {
            if (e & 1) result = mulmod(result, base, p);
            base = mulmod(base, base, p);
            e >>= 1;
        }
        return {result, p};
    }
    friend PrimeFieldElem operator/(const PrimeFieldElem& a, const PrimeFieldElem& b) {
        const auto p = join(a, b);
        return a * PrimeFieldElem(b.v, p).inverse();
    }
    PrimeFieldElem operator-() const { return {-v, p}; }
    PrimeFieldElem& operator+=(const PrimeFieldElem& o) { return *this = *this + o; }
    PrimeFieldElem& operator-=(const PrimeFieldElem& o) { return *this = *this - o; }
    PrimeFieldElem& operator*=(const PrimeFieldElem& o) { return *this = *this * o; }
    bool operator==(const PrimeFieldElem& o) const {
        const auto m = join(*this, o);
        return PrimeFieldElem(v, m).v == PrimeFieldElem(o.v, m).v;
    }
};

/** Per-scalar operations that the generic code needs. */
template <class F>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
    static Rational conj(const Rational& a) { return a; }
    static bool is_zero(const Rational& a) { return a == 0; }
    static Rational inverse(const Rational& a) {
        if (a == 0) throw Error("division by zero");
        return Rational(1) / a;
    }
    static std::string to_string(const Rational& a) { return a.get_str(); }
    static Rational parse(const std::string& s, std::uint64_t) {
        try {
            Rational r(s);
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
            throw ParseError("bad rational '" + s + "'");
        }
    }
};

template <>
struct ScalarOps<GaussianRational> {
    static GaussianRational conj(const GaussianRational& a) { return {a.re, Rational(-a.im)}; }
    static bool is_zero(const GaussianRational& a) { return a.re == 0 && a.im == 0; }
    static GaussianRational inverse(const GaussianRational& a) { return GaussianRational(1) / a; }
    static std::string to_string(const GaussianRational& a) {
        if (a.im == 0) return a.re.get_str();
        std::string im = a.im == 1 ? "i" : a.im == -1 ? "-i" : a.im.get_str() + "i";
        if (a.re == 0) return im;
        return a.re.get_str() + (a.im > 0 ? "+" : "") + im;
    }
    /** Accepts "a", "bi", "a+bi", "a-bi" with rational a, b. */
    static GaussianRational parse(const std::string& text, std::uint64_t) {
        std::string s;
        for (char c : text)
            if (c != ' ') s += c;
        if (s.empty()) throw ParseError("empty Gaussian rational");
        auto rat = [&](const std::string& x) {
            if (x.empty() || x == "+") return Rational(1);
            if (x == "-") return Rational(-1);
            return ScalarOps<Rational>::parse(x[0] == '+' ? x.substr(1) : x, 0);
        };
        if (s.back() != 'i') return {rat(s), Rational(0)};
        s.pop_back();
        std::size_t split = std::string::npos;
        for (std::size_t k = s.size(); k-- > 1;)
            if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/') {
                split = k;
                break;
            }
        if (split == std::string::npos) return {Rational(0), rat(s)};
        return {rat(s.substr(0, split)), rat(s.substr(split))};
    }
};

template <>
struct ScalarOps<PrimeFieldElem> {
    static PrimeFieldElem conj(const PrimeFieldElem& a) { return a; }
    static bool is_zero(const PrimeFieldElem& a) { return a == PrimeFieldElem(0); }
    static PrimeFieldElem inverse(const PrimeFieldElem& a) { return a.inverse(); }
    static std::string to_string(const PrimeFieldElem& a) { return std::to_string(a.v); }
    static PrimeFieldElem parse(const std::string& s, std::uint64_t p) {
        try {
            std::size_t pos = 0;
            auto v = std::stoll(s, &pos);
            if (pos != s.size()) throw ParseError("bad F_p element '" + s + "'");
            return {v, p};
        } catch (const std::logic_error&) {
            throw ParseError("bad F_p element '" + s + "'");
        }
    }
};

template <class F>
concept StarScalar = requires(const F& a, const F& b) {
    { F(a + b) };
    { F(a - b) };
    { F(a * b) };
    { F(a / b) };
    { a == b } -> std::convertible_to<bool>;
    { ScalarOps<F>::conj(a) } -> std::convertible_to<F>;
    { ScalarOps<F>::is_zero(a) } -> std::convertible_to<bool>;
    { ScalarOps<F>::to_string(a) } -> std::convertible_to<std::string>;
};

/** Runtime description of the base field: name, honesty flags, modulus. */
template <StarScalar F>
struct BaseStarField {
    using scalar_type = F;

    std::string name;
    bool is_two_proper = false;
    bool is_star_pythagorean = false;
    std::uint64_t modulus = 0;
    /** (x, y) -> z with x x* + y y* = z z*, when one is known. */
    std::function<std::optional<F>(const F&, const F&)> pythagoras_oracle;

    F zero() const { return from_int(0); }
    F one() const { return from_int(1); }
    F from_int(long v) const {
        if constexpr (std::is_same_v<F, PrimeFieldElem>) return PrimeFieldElem(v, modulus);
        else return F(v);
    }
    F parse(const std::string& s) const { return ScalarOps<F>::parse(s, modulus); }
    static F conj(const F& a) { return ScalarOps<F>::conj(a); }
    static bool is_zero(const F& a) { return ScalarOps<F>::is_zero(a); }
    static std::string to_string(const F& a) { return ScalarOps<F>::to_string(a); }
};

inline BaseStarField<Rational> rationals() { return {"rational", true, false, 0, {}}; }

inline BaseStarField<GaussianRational> gaussian_rationals() { return {"gaussian", true, false, 0, {}}; }

inline BaseStarField<PrimeFieldElem> prime_field(std::uint64_t p) {
    if (p < 2) throw Error("prime field modulus must be >= 2");
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw Error("modulus " + std::to_string(p) + " is not prime");
    // a^2 + b^2 = 0 has a nonzero solution iff -1 is a square mod p (always for p = 2)
    bool minus_one_square = (p == 2) || (p % 4 == 1);
    // identity involution: every a^2 + b^2 is a square only in characteristic 2
    return {"fp:" + std::to_string(p), !minus_one_square, p == 2, p, {}};
}

}  // namespace grk
