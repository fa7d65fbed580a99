#pragma once

/**
 * @file ratfn.hpp
 * @brief Rational functions in one variable over a finite field.
 *
 * Canonical form: numerator and denominator coprime, denominator monic.
 * Two canonical fractions are equal iff their numerators and denominators are.
 */

#include <string>
#include <utility>

#include "drinfeld/poly.hpp"

namespace drinfeld {

class RatFn {
public:
    RatFn() : den_(FPoly::constant(FE(1))) {}
    RatFn(int k) : num_(FPoly::constant(FE(k))), den_(FPoly::constant(FE(1))) {}  // NOLINT(google-explicit-constructor)
    RatFn(const FE& c) : f_(c.field()), num_(FPoly::constant(c)), den_(FPoly::constant(FE(1))) { fix(); }  // NOLINT
    explicit RatFn(const FPoly& n, const GF* f = nullptr) : f_(f), num_(n), den_(FPoly::constant(FE(1))) {
        adopt(n);
        fix();
    }
    RatFn(const FPoly& n, const FPoly& d, const GF* f = nullptr) : f_(f), num_(n), den_(d) {
        adopt(n);
        adopt(d);
        if (den_.is_zero()) throw std::domain_error("RatFn: zero denominator");
        fix();
        normalize();
    }
    static RatFn x(const Field& f) { return RatFn(FPoly{FE(f, 0), FE(f, 1)}, f.get()); }
    static RatFn x(const GF* f) { return RatFn(FPoly{FE(f, 0), FE(f, 1)}, f); }

    const FPoly& num() const { return num_; }
    const FPoly& den() const { return den_; }
    const GF* field() const { return f_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.degree() == 0; }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    FE constant_value() const { return num_.coeff(0); }

    friend RatFn operator+(const RatFn& a, const RatFn& b) {
        const GF* f = a.f_ ? a.f_ : b.f_;
        if (a.is_poly() && b.is_poly()) return RatFn(a.num_ + b.num_, f);
        if (a.den_ == b.den_) return RatFn(a.num_ + b.num_, a.den_, f);
        return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, f);
    }
    friend RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }
    RatFn operator-() const {
        RatFn r(*this);
        r.num_ = -num_;
        return r;
    }
    friend RatFn operator*(const RatFn& a, const RatFn& b) {
        const GF* f = a.f_ ? a.f_ : b.f_;
        if (a.is_zero() || b.is_zero()) return RatFn(FPoly(), f);
        if (a.is_poly() && b.is_poly()) return RatFn(a.num_ * b.num_, f);
        // Cross-cancel before multiplying to keep degrees down.
        FPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        FPoly n = exact_div(a.num_, g1) * exact_div(b.num_, g2);
        FPoly d = exact_div(a.den_, g2) * exact_div(b.den_, g1);
        RatFn r;
        r.f_ = f;
        r.num_ = n;
        r.den_ = d;
        r.fix();
        r.make_monic();
        return r;
    }
    RatFn inv() const {
        if (is_zero()) throw std::domain_error("RatFn: inverse of zero");
        RatFn r;
        r.f_ = f_;
        r.num_ = den_;
        r.den_ = num_;
        r.make_monic();
        return r;
    }
    friend RatFn operator/(const RatFn& a, const RatFn& b) { return a * b.inv(); }
    RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
    RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
    RatFn& operator*=(const RatFn& o) { return *this = *this * o; }

    friend bool operator==(const RatFn& a, const RatFn& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

    RatFn pow(long long k) const {
        if (k < 0) return inv().pow(-k);
        RatFn r(1), b = *this;
        r.f_ = f_;
        while (k > 0) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    /// q^k-power: coefficients raised to q^k and x sent to x^{q^k}.
    RatFn frob(long long k) const {
        if (k == 0 || !f_) return *this;
        long long qk = ipow(f_->base_size(), static_cast<int>(k));
        RatFn r;
        r.f_ = f_;
        r.num_ = num_.frob(k, qk);
        r.den_ = den_.frob(k, qk);
        return r;
    }
    /// Frobenius on the constants only, x fixed.
    RatFn frob_const(long long k) const {
        if (k == 0 || !f_) return *this;
        RatFn r;
        r.f_ = f_;
        r.num_ = num_.frob_const(k);
        r.den_ = den_.frob_const(k);
        return r;
    }

    FE eval(const FE& a) const {
        FE d = den_.eval(a);
        if (d.is_zero()) throw std::domain_error("RatFn: evaluation at a pole");
        return num_.eval(a) / d;
    }
    /// Composition r(s) for another rational function s.
    RatFn compose(const RatFn& s) const {
        RatFn n(0), d(0);
        for (int i = num_.degree(); i >= 0; --i) n = n * s + RatFn(num_.coeff(i));
        for (int i = den_.degree(); i >= 0; --i) d = d * s + RatFn(den_.coeff(i));
        return n / d;
    }

private:
    void adopt(const FPoly& p) {
        if (f_) return;
        for (const auto& c : p.coeffs())
            if (!c.floating()) { f_ = c.field(); return; }
    }
    // Pin floating constants into the field so that trimming sees real zeros.
    void fix() {
        if (!f_) return;
        auto pin = [this](FPoly& p) {
            bool floating = false;
            for (const auto& c : p.coeffs()) floating = floating || c.floating();
            if (!floating) return;
            std::vector<FE> v;
            for (const auto& c : p.coeffs()) v.push_back(c.in(f_));
            p = FPoly(std::move(v));
        };
        pin(num_);
        pin(den_);
    }
    void make_monic() {
        FE lc = den_.lead();
        if (lc.is_one()) return;
        FE il = lc.inv();
        num_ = il * num_;
        den_ = il * den_;
    }
    void normalize() {
        if (num_.is_zero()) {
            den_ = FPoly::constant(f_ ? FE(f_, 1) : FE(1));
            return;
        }
        if (den_.degree() > 0) {
            FPoly g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = exact_div(num_, g);
                den_ = exact_div(den_, g);
            }
        }
        make_monic();
    }

    const GF* f_ = nullptr;
    FPoly num_, den_;
};

inline bool is_zero(const RatFn& a) { return a.is_zero(); }

/// Polynomial text with integer-encoded coefficients, e.g. "1 + 3*x^2".
inline std::string poly_string(const FPoly& p, const std::string& var = "x") {
    if (p.is_zero()) return "0";
    std::string s;
    for (int i = 0; i <= p.degree(); ++i) {
        FE c = p.coeff(i);
        if (c.is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += std::to_string(c.value());
        if (i >= 1) s += "*" + var;
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
}

inline std::string to_string(const RatFn& r, const std::string& var = "x") {
    if (r.is_poly()) return poly_string(r.num(), var);
    return "(" + poly_string(r.num(), var) + ")/(" + poly_string(r.den(), var) + ")";
}

}  // namespace drinfeld
