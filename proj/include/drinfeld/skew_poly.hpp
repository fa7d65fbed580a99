#pragma once

/**
 * @file skew_poly.hpp
 * @brief Twisted polynomials R{tau} with tau * c = c^{(1)} * tau.
 *
 * The twist c -> c^{(1)} is drinfeld::frob(c, 1) on the coefficient type.
 * Division is on the right: a = Q * b + r with deg r < deg b.
 */

#include <stdexcept>
#include <utility>
#include <vector>

#include "drinfeld/poly.hpp"

namespace drinfeld {

template <class R>
class SkewPoly {
public:
    SkewPoly() = default;
    explicit SkewPoly(std::vector<R> c) : c_(std::move(c)) { trim(); }
    static SkewPoly constant(const R& a) { return SkewPoly(std::vector<R>{a}); }
    /// a * tau^k
    static SkewPoly monomial(const R& a, int k) {
        std::vector<R> c(static_cast<std::size_t>(k) + 1, a - a);
        c[k] = a;
        return SkewPoly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<R>& coeffs() const { return c_; }
    const R& coeff(int i) const { return c_.at(i); }
    const R& lead() const { return c_.back(); }

    friend SkewPoly operator+(const SkewPoly& a, const SkewPoly& b) {
        const SkewPoly& lo = a.c_.size() < b.c_.size() ? a : b;
        const SkewPoly& hi = a.c_.size() < b.c_.size() ? b : a;
        std::vector<R> c(hi.c_);
        for (std::size_t i = 0; i < lo.c_.size(); ++i) c[i] = a.c_.size() < b.c_.size() ? lo.c_[i] + c[i] : c[i] + lo.c_[i];
        return SkewPoly(std::move(c));
    }
    SkewPoly operator-() const {
        std::vector<R> c(c_);
        for (auto& x : c) x = -x;
        return SkewPoly(std::move(c));
    }
    friend SkewPoly operator-(const SkewPoly& a, const SkewPoly& b) { return a + (-b); }

    /// (sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^{(i)} tau^{i+j}
    friend SkewPoly operator*(const SkewPoly& a, const SkewPoly& b) {
        if (a.is_zero() || b.is_zero()) return SkewPoly();
        std::vector<R> c(a.c_.size() + b.c_.size() - 1, a.c_[0] - a.c_[0]);
        std::vector<R> bt(b.c_);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (i > 0)
                for (auto& x : bt) x = drinfeld::frob(x, 1);
            if (drinfeld::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < bt.size(); ++j) {
                if (drinfeld::is_zero(bt[j])) continue;
                c[i + j] = c[i + j] + a.c_[i] * bt[j];
            }
        }
        return SkewPoly(std::move(c));
    }
    /// Left scalar multiplication.
    friend SkewPoly operator*(const R& s, const SkewPoly& a) {
        std::vector<R> c(a.c_);
        for (auto& x : c) x = s * x;
        return SkewPoly(std::move(c));
    }

    friend bool operator==(const SkewPoly& a, const SkewPoly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const SkewPoly& a, const SkewPoly& b) { return !(a == b); }

    /// Applies `fn` to every coefficient.
    template <class Fn>
    SkewPoly map(Fn fn) const {
        std::vector<R> c;
        c.reserve(c_.size());
        for (const auto& x : c_) c.push_back(fn(x));
        return SkewPoly(std::move(c));
    }

    /// Evaluates sum c_i X^{q^i} given the twist of X (any T with T*R products).
    template <class T, class Twist>
    T apply(const T& x, Twist twist) const {
        T acc = x * c_.at(0);
        T xi = x;
        for (std::size_t i = 1; i < c_.size(); ++i) {
            xi = twist(xi);
            acc = acc + xi * c_[i];
        }
        return acc;
    }

private:
    void trim() {
        while (!c_.empty() && drinfeld::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<R> c_;
};

/// a = Q * b + r with deg r < deg b; the leading coefficient of b must be invertible.
template <class R>
std::pair<SkewPoly<R>, SkewPoly<R>> right_divmod(const SkewPoly<R>& a, const SkewPoly<R>& b) {
    if (b.is_zero()) throw std::domain_error("right_divmod: division by zero");
    const int n = b.degree();
    std::vector<R> r(a.coeffs());
    if (a.degree() < n) return {SkewPoly<R>(), a};
    std::vector<R> q(static_cast<std::size_t>(a.degree() - n) + 1, b.lead() - b.lead());
    // Twists of b, computed lazily from the top shift down.
    std::vector<std::vector<R>> bt(static_cast<std::size_t>(a.degree() - n) + 1);
    bt[0] = b.coeffs();
    for (std::size_t s = 1; s < bt.size(); ++s) {
        bt[s] = bt[s - 1];
        for (auto& x : bt[s]) x = drinfeld::frob(x, 1);
    }
    for (int m = a.degree(); m >= n; --m) {
        if (drinfeld::is_zero(r[m])) continue;
        const int s = m - n;
        R c = r[m] * bt[s][n].inv();
        q[s] = c;
        for (int i = 0; i <= n; ++i)
            if (!drinfeld::is_zero(bt[s][i])) r[s + i] = r[s + i] - c * bt[s][i];
    }
    r.resize(n);
    return {SkewPoly<R>(std::move(q)), SkewPoly<R>(std::move(r))};
}

/// Monic generator of the left ideal sum R{tau} g_i.
template <class R>
SkewPoly<R> right_gcd(const std::vector<SkewPoly<R>>& gens) {
    if (gens.empty()) throw std::invalid_argument("right_gcd: empty generator list");
    SkewPoly<R> g;
    for (const auto& h : gens) {
        SkewPoly<R> a = g, b = h;
        if (a.degree() < b.degree()) std::swap(a, b);
        while (!b.is_zero()) {
            auto r = right_divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        g = std::move(a);
    }
    if (g.is_zero()) throw std::invalid_argument("right_gcd: all generators are zero");
    return g.lead().inv() * g;
}

/// The unique X with X * phi_I = phi_I * phi_a.
template <class R>
SkewPoly<R> conjugate_twist(const SkewPoly<R>& phi_I, const SkewPoly<R>& phi_a) {
    auto [q, r] = right_divmod(phi_I * phi_a, phi_I);
    if (!r.is_zero()) throw std::domain_error("conjugate_twist: X * phi_I = phi_I * phi_a has no solution");
    return q;
}

}  // namespace drinfeld
