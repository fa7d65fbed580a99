#pragma once

/**
 * @file carlitz.hpp
 * @brief The Carlitz module C_x = x + tau over F_q[x].
 *
 * Two settings share this header:
 *  - a finite place given by a monic irreducible P_inf of degree d, where
 *    x is expanded as a series in u with u^{q^d - 1} = -P_inf(x);
 *  - the classical ring F_q[theta] with infinity of degree 1, where
 *    theta = -u^{-(q-1)} and an extra variable t may appear.
 */

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "drinfeld/ratfn.hpp"
#include "drinfeld/skew_poly.hpp"
#include "drinfeld/tate_series.hpp"

namespace drinfeld {

struct CarlitzContext {
    int q = 2;
    Field Fq;
    std::string var = "x";
    FPoly pinf;      // empty in the classical setting
    int d = 0;       // deg P_inf
    Field Finf;      // F_{q^d}
    FE zeta;         // least root of P_inf in F_{q^d}

    bool has_place() const { return d > 0; }
    long long N() const { return ipow(q, d) - 1; }
};

inline bool is_prime_int(int n) {
    if (n < 2) return false;
    for (int k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

/// P_inf is given by its coefficients, constant term first; empty for F_q[theta].
inline CarlitzContext make_carlitz_context(int q, const std::vector<long long>& pinf = {}, std::string var = "x") {
    if (!is_prime_int(q)) throw std::invalid_argument("q = " + std::to_string(q) + " must be prime");
    CarlitzContext c;
    c.q = q;
    c.Fq = make_field(q, 1);
    c.var = std::move(var);
    if (pinf.empty()) {
        c.Finf = c.Fq;
        c.zeta = FE(c.Fq, 0);
        return c;
    }
    std::vector<FE> co;
    for (long long a : pinf) co.push_back(FE::from_int(c.Fq, a));
    c.pinf = FPoly(co);
    c.d = c.pinf.degree();
    if (c.d < 1 || !c.pinf.lead().is_one()) throw std::invalid_argument("P_inf must be monic of positive degree");
    if (!is_irreducible(c.pinf, c.Fq)) throw std::invalid_argument("P_inf is not irreducible over F_q");
    auto roots = roots_in_extension(c.pinf, c.Fq, c.d, c.Finf);
    c.zeta = roots.front();
    return c;
}

inline RatFn rat_x(const CarlitzContext& c) { return RatFn::x(c.Fq); }

/// C_a for a in F_q[x].
inline SkewPoly<RatFn> carlitz_op(const CarlitzContext& c, const FPoly& a) {
    using SP = SkewPoly<RatFn>;
    SP cx(std::vector<RatFn>{rat_x(c), RatFn(FE(c.Fq, 1))});
    SP acc;
    for (int i = a.degree(); i >= 0; --i) acc = acc * cx + SP::constant(RatFn(to_field(a.coeff(i), c.Fq.get())));
    return acc;
}

/// Exponential and logarithm coefficients, indices 0..N.
struct ExpData {
    std::vector<RatFn> e, l;
};

/// Solved from exp * x = C_x * exp and log * C_x = x * log, one degree at a time.
inline ExpData carlitz_exp_coeffs(const CarlitzContext& c, int N) {
    if (N < 0) throw std::invalid_argument("carlitz_exp_coeffs: N must be >= 0");
    ExpData d;
    RatFn x = rat_x(c), one(FE(c.Fq, 1));
    d.e.push_back(one);
    d.l.push_back(one);
    for (int i = 1; i <= N; ++i) {
        RatFn xi = x.frob(i);
        d.e.push_back(d.e.back().frob(1) / (xi - x));
        d.l.push_back(d.l.back() / (x - xi));
    }
    return d;
}

/// Coefficients 0..n of the product of two tau-series truncated at n.
inline std::vector<RatFn> skew_series_mul(const std::vector<RatFn>& a, const std::vector<RatFn>& b, int n) {
    std::vector<RatFn> out(static_cast<std::size_t>(n) + 1, RatFn(0));
    for (int i = 0; i <= n && i < static_cast<int>(a.size()); ++i)
        for (int j = 0; i + j <= n && j < static_cast<int>(b.size()); ++j)
            out[i + j] += a[i] * b[j].frob(i);
    return out;
}

/// exp * a == C_a * exp in degrees <= N.
inline bool check_exp_functional_equation(const CarlitzContext& c, const ExpData& d, const FPoly& a) {
    const int n = static_cast<int>(d.e.size()) - 1;
    RatFn ar(a, c.Fq.get());
    auto lhs = skew_series_mul(d.e, {ar}, n);
    auto rhs = skew_series_mul(carlitz_op(c, a).coeffs(), d.e, n);
    for (int k = 0; k <= n; ++k)
        if (lhs[k] != rhs[k]) return false;
    return true;
}

/// exp * log == log * exp == 1 in degrees <= N.
inline bool check_exp_log_inverse(const ExpData& d) {
    const int n = static_cast<int>(d.e.size()) - 1;
    auto a = skew_series_mul(d.e, d.l, n), b = skew_series_mul(d.l, d.e, n);
    for (int k = 0; k <= n; ++k) {
        RatFn want = k == 0 ? a[0] : RatFn(0);
        if (k == 0 && !(a[0].is_constant() && a[0].constant_value().is_one())) return false;
        if (a[k] != want || b[k] != want) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Finite place

/// Series context over F_{q^d} with variables `vars`, each carrying the d atoms z - zeta^{q^k}.
inline SeriesCtxPtr place_series_context(const CarlitzContext& c, const std::vector<std::string>& vars = {}) {
    std::vector<FE> roots;
    if (!vars.empty())
        for (int k = 0; k < c.d; ++k) roots.push_back(frobenius(c.zeta, k));
    return make_series_context(c.q, c.d, c.Finf, make_varspace(vars, c.Finf, roots), c.zeta);
}

/// x in F_{q^d}((u)): the root of P_inf(X) + u^{q^d - 1} = 0 near zeta.
inline TateSeries x_series(const SeriesCtxPtr& ctx, const CarlitzContext& c, long long n) {
    if (!c.has_place()) throw std::invalid_argument("x_series: no finite place in this context");
    std::vector<TateSeries> E;
    for (int i = 0; i <= c.d; ++i) E.push_back(TateSeries::constant(ctx, to_field(c.pinf.coeff(i), ctx->F.get())));
    E[0] = E[0] + TateSeries::u_power(ctx, c.N(), FE(ctx->F, 1));
    return hensel_root(E, TateSeries::constant(ctx, c.zeta), n);
}

/// C_a(v) with the coefficients of C_a evaluated at the series X.
inline TateSeries carlitz_apply(const CarlitzContext& c, const FPoly& a, const TateSeries& v, const TateSeries& X,
                                long long cap) {
    auto op = carlitz_op(c, a);
    TateSeries acc(v.ctx(), kExact), vi = v;
    for (int i = 0; i <= op.degree(); ++i) {
        if (i > 0) vi = vi.twist(1, cap);
        if (op.coeff(i).is_zero()) continue;
        acc = (acc + ratfn_at(op.coeff(i), X, cap) * vi).truncated(cap);
    }
    return acc;
}

/**
 * Torsion point lambda = u y with C_{P_inf}(lambda) = 0 and y = 1 + O(u).
 * y solves -y - sum_{0<i<d} (c_i / P_inf)(x) u^{q^i - 1} y^{q^i} + y^{q^d} = 0,
 * c_i the coefficients of C_{P_inf}. Returned to precision n + 1.
 */
inline TateSeries torsion_root(const SeriesCtxPtr& ctx, const CarlitzContext& c, long long n) {
    if (n < 1) throw std::invalid_argument("precision must be positive");
    TateSeries X = x_series(ctx, c, n + 1);
    auto op = carlitz_op(c, c.pinf);
    const long long qd = ipow(c.q, c.d);
    std::vector<TateSeries> E(static_cast<std::size_t>(qd) + 1, TateSeries(ctx, kExact));
    E[1] = TateSeries::constant(ctx, FE::from_int(ctx->F, -1));
    E[static_cast<std::size_t>(qd)] = TateSeries::one(ctx);
    RatFn P(c.pinf, c.Fq.get());
    for (int i = 1; i < c.d; ++i) {
        RatFn r = op.coeff(i) / P;
        if (!r.is_poly()) throw std::logic_error("torsion_root: C_P coefficient not divisible by P");
        long long qi = ipow(c.q, i);
        E[static_cast<std::size_t>(qi)] = -(poly_at(r.num(), X).shifted(qi - 1)).truncated(n + 1);
    }
    TateSeries y = hensel_root(E, TateSeries::one(ctx), n);
    return y.shifted(1);
}

/**
 * The Gauss sum -sum_{y != 0, deg y < d} sgn_j(y)^{-1} C_y(lambda), to precision n,
 * where sgn_j(y) = y(zeta^{q^j}). Its (q^d - 1)-th power is prod_k (zeta^{q^j} - x^{q^k}).
 */
inline TateSeries gauss_sum(const SeriesCtxPtr& ctx, const CarlitzContext& c, long long n, int twist = 0) {
    if (n < 1) throw std::invalid_argument("precision must be positive");
    TateSeries lam = torsion_root(ctx, c, n + ipow(c.q, c.d));
    TateSeries X = x_series(ctx, c, n + ipow(c.q, c.d));
    const GF* F = ctx->F.get();
    const FE zj = frobenius(c.zeta, twist);
    // C_y(lambda) is F_q-linear in y; collect sum_y y_j / y(zeta) per basis monomial x^j.
    std::vector<FE> s(static_cast<std::size_t>(c.d), FE(F, 0));
    const long long count = ipow(c.q, c.d);
    for (long long code = 1; code < count; ++code) {
        std::vector<FE> digits;
        long long t = code;
        for (int j = 0; j < c.d; ++j, t /= c.q) digits.push_back(FE::from_int(ctx->F, t % c.q));
        FE yz(F, 0), pw(F, 1);
        for (int j = 0; j < c.d; ++j, pw = pw * zj) yz = yz + digits[j] * pw;
        FE inv = yz.inv();
        for (int j = 0; j < c.d; ++j) s[j] = s[j] + digits[j] * inv;
    }
    TateSeries g(ctx, kExact);
    for (int j = 0; j < c.d; ++j) {
        if (s[j].is_zero()) continue;
        FPoly xj = FPoly::monomial(FE(c.Fq, 1), j);
        g = g + s[j] * carlitz_apply(c, xj, lam, X, n);
    }
    return (-g).truncated(n);
}

/// prod_{k<d} (zeta^{q^j} - x^{q^k}) as a series.
inline TateSeries gauss_norm_target(const SeriesCtxPtr& ctx, const CarlitzContext& c, long long n, int twist = 0) {
    TateSeries X = x_series(ctx, c, n);
    TateSeries acc = TateSeries::one(ctx);
    TateSeries zj = TateSeries::constant(ctx, frobenius(c.zeta, twist));
    for (int k = 0; k < c.d; ++k)
        acc = (acc * (zj - X.twist(k, n))).truncated(n);
    return acc;
}

// ---------------------------------------------------------------------------
// F_q[theta], infinity of degree 1

/// Context for F_q((u)) with theta = -u^{-(q-1)}; variables carry no atoms.
inline SeriesCtxPtr theta_series_context(int q, const std::vector<std::string>& vars = {"t"}) {
    if (!is_prime_int(q)) throw std::invalid_argument("q = " + std::to_string(q) + " must be prime");
    Field F = make_field(q, 1);
    return make_series_context(q, 1, F, make_varspace(vars, F), FE(F, 0));
}

inline TateSeries theta_series(const SeriesCtxPtr& ctx) {
    return TateSeries::u_power(ctx, -(ctx->q - 1), FE::from_int(ctx->F, -1));
}

/// 1/theta^{q^i} = (-1)^{q^i} u^{(q-1) q^i}.
inline TateSeries theta_inv_power(const SeriesCtxPtr& ctx, long long e) {
    FE sign = FE::from_int(ctx->F, (e % 2 == 0) ? 1 : -1);
    return TateSeries::u_power(ctx, (ctx->q - 1) * e, sign);
}

/// omega = (-theta)^{1/(q-1)} prod_{i>=0} (1 - t/theta^{q^i})^{-1} with (-theta)^{1/(q-1)} = u^{-1}.
inline TateSeries omega_carlitz(const SeriesCtxPtr& ctx, long long n, int var = 0) {
    if (n < 1) throw std::invalid_argument("precision must be positive");
    TateSeries t = TateSeries::var(ctx, var);
    auto factor = [&](int i) {
        TateSeries one = TateSeries::one(ctx);
        long long qi = ipow(ctx->q, i);
        TateSeries m = one - t * theta_inv_power(ctx, qi);
        return sdiv(one, m, n + 1);
    };
    return inf_product(ctx, factor, n + 1).shifted(-1);
}

/// pi~ = (-theta)^{1/(q-1)} theta prod_{i>=1} (1 - theta^{1-q^i})^{-1}.
inline TateSeries pi_tilde_product(const SeriesCtxPtr& ctx, long long n) {
    if (n < 1) throw std::invalid_argument("precision must be positive");
    const int q = ctx->q;
    auto factor = [&](int i) {
        TateSeries one = TateSeries::one(ctx);
        long long qi = ipow(q, i + 1);
        // theta^{1-q^i} = (-1)^{1-q^i} u^{(q-1)(q^i-1)}, and 1 - q^i is even or p = 2.
        TateSeries m = one - TateSeries::u_power(ctx, (q - 1) * (qi - 1), FE(ctx->F, 1));
        return sdiv(one, m, n + q);
    };
    TateSeries prod = inf_product(ctx, factor, n + q);
    return (FE::from_int(ctx->F, -1) * prod).shifted(-q);
}

/**
 * Substitutes variable v := V (V exact) in S.
 * Certificate: every term u^e t_v^k of S, known or not, satisfies e >= v0 + slope k.
 * Known terms are checked against it; the result precision follows from it.
 */
inline TateSeries eval_var(const TateSeries& S, int v, const TateSeries& V, long long v0, long long slope) {
    if (!V.exact()) throw std::invalid_argument("eval_var: the substituted value must be exact");
    const auto& ctx = S.ctx();
    if (ctx->vs->d > 0) throw std::invalid_argument("eval_var: variables with atoms are not supported");
    long long a = V.valuation();
    if (slope + a <= 0) throw std::invalid_argument("eval_var: certificate slope does not dominate v(V)");
    long long P = S.prec();
    long long R = P;
    if (a < 0 && !S.exact()) {
        // e + k a with e >= P and k <= (e - v0)/slope is minimized at e = P.
        long double r = static_cast<long double>(P) * (1.0L + static_cast<long double>(a) / slope) -
                        static_cast<long double>(a) * v0 / slope;
        R = static_cast<long long>(r);
        if (static_cast<long double>(R) > r) --R;
    }
    std::vector<TateSeries> Vk{TateSeries::one(ctx)};
    TateSeries acc(ctx, R);
    for (const auto& [e, c] : S.terms()) {
        for (const auto& [mono, co] : c.terms()) {
            int k = mono_exp(mono, v);
            if (e < v0 + slope * k) throw std::domain_error("eval_var: a known term violates the certificate");
            if (e + k * a >= R) continue;
            while (static_cast<int>(Vk.size()) <= k) Vk.push_back(Vk.back() * V);
            Coef rest(ctx->vs, {{mono_clear(mono, v), co}});
            acc = acc + (rest * Vk[static_cast<std::size_t>(k)]).shifted(e).truncated(R);
        }
    }
    return acc.truncated(R);
}

}  // namespace drinfeld
