#pragma once

/**
 * @file poly.hpp
 * @brief Dense univariate polynomials over a coefficient ring.
 *
 * Canonical form: no trailing zero coefficients, so the zero polynomial has an
 * empty coefficient vector and degree -1.
 */

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/field.hpp"

namespace drinfeld {

inline bool is_zero(const FE& x) { return x.is_zero(); }
inline FE frob(const FE& x, long long k) { return frobenius(x, k); }
inline FE frob_const(const FE& x, long long k) { return frobenius(x, k); }

template <class T>
auto is_zero(const T& a) -> decltype(a.is_zero()) { return a.is_zero(); }
template <class T>
auto frob(const T& a, long long k) -> decltype(a.frob(k)) { return a.frob(k); }
template <class T>
auto frob_const(const T& a, long long k) -> decltype(a.frob_const(k)) { return a.frob_const(k); }

/// Integer power q^k (no overflow checks beyond 63 bits).
inline long long ipow(long long q, int k) {
    long long r = 1;
    for (int i = 0; i < k; ++i) r *= q;
    return r;
}

/// Moves a constant into `target`: floating constants and prime-field elements
/// are read as integers, elements already in `target` pass through.
inline FE to_field(const FE& c, const GF* target) {
    if (c.floating()) return FE(target, target->from_int(c.constant()));
    if (c.field() == target) return c;
    if (c.field()->degree() == 1 && c.field()->characteristic() == target->characteristic())
        return FE(target, c.value());
    throw std::invalid_argument("to_field: no canonical embedding between these fields");
}

template <class R>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }
    Poly(std::initializer_list<R> c) : c_(c) { trim(); }
    static Poly constant(const R& a) { return Poly(std::vector<R>{a}); }
    static Poly monomial(const R& a, int k) {
        std::vector<R> c(static_cast<std::size_t>(k) + 1, R(0));
        c[k] = a;
        return Poly(std::move(c));
    }
    /// The variable itself.
    static Poly x() { return monomial(R(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<R>& coeffs() const { return c_; }
    R coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : R(0); }
    R lead() const { return c_.empty() ? R(0) : c_.back(); }
    void set_coeff(int i, const R& a) {
        if (i >= static_cast<int>(c_.size())) c_.resize(i + 1, R(0));
        c_[i] = a;
        trim();
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<R> c(std::max(a.c_.size(), b.c_.size()), R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<R> c(std::max(a.c_.size(), b.c_.size()), R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] - b.c_[i];
        return Poly(std::move(c));
    }
    Poly operator-() const {
        std::vector<R> c(c_);
        for (auto& x : c) x = -x;
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<R> c(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (drinfeld::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        }
        return Poly(std::move(c));
    }
    friend Poly operator*(const R& s, const Poly& a) {
        std::vector<R> c(a.c_);
        for (auto& x : c) x = s * x;
        return Poly(std::move(c));
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(long long k) const {
        Poly r = constant(R(1)), b = *this;
        while (k > 0) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    /// Horner evaluation at any T that supports T + R-scalar multiples.
    template <class T>
    T eval(const T& x, const T& one) const {
        T r = one * R(0);
        for (int i = degree(); i >= 0; --i) r = r * x + one * c_[i];
        return r;
    }
    R eval(const R& x) const {
        R r(0);
        for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
        return r;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<R> c(c_.size() - 1, R(0));
        for (std::size_t i = 1; i < c_.size(); ++i) {
            R k(0);
            for (std::size_t j = 0; j < i; ++j) k = k + R(1);
            c[i - 1] = k * c_[i];
        }
        return Poly(std::move(c));
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return lead().inv() * *this;
    }

    /// Composition p(q).
    Poly compose(const Poly& q) const {
        Poly r;
        for (int i = degree(); i >= 0; --i) r = r * q + constant(c_[i]);
        return r;
    }

    /// Coefficients raised to q^k and the variable sent to x^{q^k}.
    Poly frob(long long k, long long qk) const {
        if (is_zero()) return *this;
        std::vector<R> c(static_cast<std::size_t>(degree()) * qk + 1, R(0));
        for (int i = 0; i <= degree(); ++i) c[static_cast<std::size_t>(i) * qk] = drinfeld::frob(c_[i], k);
        return Poly(std::move(c));
    }
    /// Frobenius on coefficients only.
    Poly frob_const(long long k) const {
        std::vector<R> c(c_);
        for (auto& x : c) x = drinfeld::frob_const(x, k);
        return Poly(std::move(c));
    }

private:
    void trim() {
        while (!c_.empty() && drinfeld::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<R> c_;
};

using FPoly = Poly<FE>;

/// Division with remainder; the divisor's leading coefficient must be invertible.
template <class R>
std::pair<Poly<R>, Poly<R>> divmod(const Poly<R>& a, const Poly<R>& b) {
    if (b.is_zero()) throw std::domain_error("poly divmod: division by zero polynomial");
    const int db = b.degree();
    if (a.degree() < db) return {Poly<R>(), a};
    R inv_lc = b.lead().inv();
    std::vector<R> r(a.coeffs());
    std::vector<R> q(static_cast<std::size_t>(a.degree() - db) + 1, R(0));
    const auto& bc = b.coeffs();
    for (int k = a.degree(); k >= db; --k) {
        if (is_zero(r[k])) continue;
        R c = r[k] * inv_lc;
        q[k - db] = c;
        for (int i = 0; i <= db; ++i) r[k - db + i] = r[k - db + i] - c * bc[i];
    }
    r.resize(db);
    return {Poly<R>(std::move(q)), Poly<R>(std::move(r))};
}

template <class R>
Poly<R> gcd(Poly<R> a, Poly<R> b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Exact quotient; throws if b does not divide a.
template <class R>
Poly<R> exact_div(const Poly<R>& a, const Poly<R>& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::domain_error("poly exact_div: not divisible");
    return q;
}

/// Polynomial from integer coefficients (low degree first) over a field.
inline FPoly fpoly(const Field& f, std::initializer_list<long long> c) {
    std::vector<FE> v;
    for (auto k : c) v.push_back(FE::from_int(f, k));
    return FPoly(std::move(v));
}

/// Polynomial with encoded field-element coefficients.
inline FPoly fpoly_encoded(const Field& f, const std::vector<std::uint32_t>& c) {
    std::vector<FE> v;
    for (auto k : c) v.emplace_back(f, k);
    return FPoly(std::move(v));
}

/// Brute-force irreducibility test over a finite field by trial division.
inline bool is_irreducible(const FPoly& P, const Field& f) {
    if (P.degree() < 1) return false;
    if (P.degree() == 1) return true;
    const std::uint32_t q = f->size();
    for (int d = 1; d <= P.degree() / 2; ++d) {
        std::uint64_t count = 1;
        for (int i = 0; i < d; ++i) count *= q;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::vector<FE> c(d + 1);
            std::uint64_t k = code;
            for (int i = 0; i < d; ++i) { c[i] = FE(f, static_cast<std::uint32_t>(k % q)); k /= q; }
            c[d] = FE(f, 1);
            if (divmod(P, FPoly(c)).second.is_zero()) return false;
        }
    }
    return true;
}

/// Roots of P in the field of its coefficients, with multiplicity, by exhaustive search.
inline std::vector<FE> roots_in(const FPoly& P, const Field& ext) {
    if (P.is_zero()) throw std::invalid_argument("roots_in_extension: zero polynomial");
    std::vector<FE> out;
    FPoly cur = P;
    for (std::uint32_t v = 0; v < ext->size(); ++v) {
        FE a(ext, v);
        FPoly lin{-a, FE(ext, 1)};
        while (cur.degree() >= 1) {
            auto [q, r] = divmod(cur, lin);
            if (!r.is_zero()) break;
            out.push_back(a);
            cur = q;
        }
    }
    return out;
}

/**
 * Embedding of F_{p^e} into F_{p^{e m}}: the image of the modulus root is the
 * least root of the modulus in the extension.
 */
inline std::vector<FE> embedding_table(const Field& base, const Field& ext) {
    if (base->characteristic() != ext->characteristic() || ext->degree() % base->degree() != 0)
        throw std::invalid_argument("embedding: incompatible fields");
    std::vector<FE> table(base->size());
    FE alpha;
    if (base->degree() == 1) {
        alpha = FE(ext, 0);
    } else {
        std::vector<FE> m;
        for (int c : base->modulus()) m.push_back(FE::from_int(ext, c));
        m.push_back(FE(ext, 1));
        auto r = roots_in(FPoly(m), ext);
        alpha = r.front();
    }
    for (std::uint32_t v = 0; v < base->size(); ++v) {
        FE acc(ext, 0), pw(ext, 1);
        for (int i = 0; i < base->degree(); ++i) {
            acc = acc + FE::from_int(ext, base->digit(v, i)) * pw;
            pw = pw * alpha;
        }
        table[v] = acc;
    }
    return table;
}

/**
 * All roots of P (over F_q = `base`) in F_{q^m}, with multiplicity, ordered by
 * canonical representative in the extension field F_{p^{e m}}. The roots refer
 * to `ext`, which receives that field and must outlive them.
 */
inline std::vector<FE> roots_in_extension(const FPoly& P, const Field& base, int m, Field& ext) {
    if (P.is_zero()) throw std::invalid_argument("roots_in_extension: zero polynomial");
    if (m < 1) throw std::invalid_argument("roots_in_extension: m must be >= 1");
    ext = make_field(base->characteristic(), base->degree() * m, base->degree());
    auto table = embedding_table(base, ext);
    std::vector<FE> c;
    for (const auto& a : P.coeffs()) c.push_back(a.floating() ? FE::from_int(ext, a.constant()) : table[a.value()]);
    return roots_in(FPoly(c), ext);
}

}  // namespace drinfeld
