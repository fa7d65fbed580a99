#pragma once

/**
 * @file kummer.hpp
 * @brief The Kummer ring R[g]/(g^N - c) with N = q^d - 1.
 *
 * Elements are length-N coefficient vectors over R. The q-power map sends
 * a_j g^j to a_j^{(1)} g^{qj}, reduced with g^N = c. The exponents divisible
 * by q - 1 form the subring on which Galois elements act.
 */

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "drinfeld/ratfn.hpp"

namespace drinfeld {

struct KummerCtx {
    int N = 1;       // q^d - 1
    int q = 2;
    RatFn c;         // g^N = c
};
using KummerCtxPtr = std::shared_ptr<const KummerCtx>;

template <class R>
class Kummer {
public:
    Kummer() = default;
    explicit Kummer(KummerCtxPtr ctx) : ctx_(std::move(ctx)), a_(ctx_->N, R(0)) {}
    Kummer(KummerCtxPtr ctx, const R& c, int j = 0) : Kummer(std::move(ctx)) { set(j, c); }

    /// c * g^j for any integer j (reduced with g^N = c).
    static Kummer monomial(const KummerCtxPtr& ctx, const R& c, long long j) {
        Kummer r(ctx);
        long long e = ((j % ctx->N) + ctx->N) % ctx->N, k = (j - e) / ctx->N;
        r.a_[e] = c * R(ctx->c.pow(k));
        return r;
    }

    const KummerCtxPtr& ctx() const { return ctx_; }
    int N() const { return ctx_->N; }
    const R& operator[](int j) const { return a_[j]; }
    void set(int j, const R& c) { a_[((j % N()) + N()) % N()] = c; }

    bool is_zero() const {
        for (const auto& c : a_) if (!drinfeld::is_zero(c)) return false;
        return true;
    }
    /// Index of the single nonzero coefficient, or -1.
    int monomial_exponent() const {
        int e = -1;
        for (int j = 0; j < N(); ++j)
            if (!drinfeld::is_zero(a_[j])) {
                if (e >= 0) return -1;
                e = j;
            }
        return e;
    }

    friend Kummer operator+(const Kummer& a, const Kummer& b) {
        Kummer r(a.ctx_);
        for (int j = 0; j < a.N(); ++j) r.a_[j] = a.a_[j] + b.a_[j];
        return r;
    }
    friend Kummer operator-(const Kummer& a, const Kummer& b) {
        Kummer r(a.ctx_);
        for (int j = 0; j < a.N(); ++j) r.a_[j] = a.a_[j] - b.a_[j];
        return r;
    }
    Kummer operator-() const {
        Kummer r(ctx_);
        for (int j = 0; j < N(); ++j) r.a_[j] = -a_[j];
        return r;
    }
    friend Kummer operator*(const Kummer& a, const Kummer& b) {
        const int n = a.N();
        Kummer r(a.ctx_);
        R c(a.ctx_->c);
        for (int i = 0; i < n; ++i) {
            if (drinfeld::is_zero(a.a_[i])) continue;
            for (int j = 0; j < n; ++j) {
                if (drinfeld::is_zero(b.a_[j])) continue;
                R p = a.a_[i] * b.a_[j];
                if (i + j >= n) r.a_[i + j - n] = r.a_[i + j - n] + c * p;
                else r.a_[i + j] = r.a_[i + j] + p;
            }
        }
        return r;
    }
    friend Kummer operator*(const R& s, const Kummer& a) {
        Kummer r(a.ctx_);
        for (int j = 0; j < a.N(); ++j) r.a_[j] = s * a.a_[j];
        return r;
    }
    friend bool operator==(const Kummer& a, const Kummer& b) {
        for (int j = 0; j < a.N(); ++j)
            if (!(a.a_[j] == b.a_[j])) return false;
        return true;
    }
    friend bool operator!=(const Kummer& a, const Kummer& b) { return !(a == b); }

    Kummer inv() const {
        int e = monomial_exponent();
        if (e == 0) return Kummer(ctx_, a_[0].inv(), 0);
        if (e > 0) {
            // (a g^e)^{-1} = a^{-1} c^{-1} g^{N-e}
            return Kummer(ctx_, a_[e].inv() * R(ctx_->c.inv()), N() - e);
        }
        if (is_zero()) throw std::domain_error("Kummer: inverse of zero");
        return inv_general();
    }
    friend Kummer operator/(const Kummer& a, const Kummer& b) { return a * b.inv(); }

    Kummer pow(long long k) const {
        Kummer r(ctx_, R(1), 0), b = *this;
        if (k < 0) { b = inv(); k = -k; }
        while (k > 0) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    /// q^k-power map.
    Kummer frob(long long k) const {
        Kummer r = *this;
        for (long long s = 0; s < k; ++s) r = r.frob1();
        return r;
    }

    /// Applies `fn` to each coefficient (exponents unchanged).
    template <class Fn>
    auto map(Fn fn) const {
        using S = decltype(fn(a_[0]));
        Kummer<S> r(ctx_);
        for (int j = 0; j < N(); ++j) r.set(j, fn(a_[j]));
        return r;
    }

private:
    Kummer frob1() const {
        const int n = N();
        Kummer r(ctx_);
        for (int j = 0; j < n; ++j) {
            if (drinfeld::is_zero(a_[j])) continue;
            long long e = static_cast<long long>(ctx_->q) * j;
            R c = drinfeld::frob(a_[j], 1);
            if (e >= n) c = c * R(ctx_->c.pow(e / n));
            r.a_[e % n] = r.a_[e % n] + c;
        }
        return r;
    }

    // Solves h * y = 1 by elimination on the N x N multiplication matrix.
    Kummer inv_general() const {
        const int n = N();
        std::vector<std::vector<R>> m(n, std::vector<R>(n + 1, R(0)));
        for (int col = 0; col < n; ++col) {
            Kummer e(ctx_, R(1), col);
            Kummer p = *this * e;
            for (int row = 0; row < n; ++row) m[row][col] = p.a_[row];
        }
        m[0][n] = R(1);
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int row = col; row < n; ++row)
                if (!drinfeld::is_zero(m[row][col])) { piv = row; break; }
            if (piv < 0) throw std::domain_error("Kummer: element is a zero divisor");
            std::swap(m[piv], m[col]);
            R ip = m[col][col].inv();
            for (int k = col; k <= n; ++k) m[col][k] = ip * m[col][k];
            for (int row = 0; row < n; ++row) {
                if (row == col || drinfeld::is_zero(m[row][col])) continue;
                R f = m[row][col];
                for (int k = col; k <= n; ++k) m[row][k] = m[row][k] - f * m[col][k];
            }
        }
        Kummer r(ctx_);
        for (int j = 0; j < n; ++j) r.a_[j] = m[j][n];
        return r;
    }

    KummerCtxPtr ctx_;
    std::vector<R> a_;
};

}  // namespace drinfeld
