#pragma once

/**
 * @file genus0.hpp
 * @brief Sign-normalized rank-one Drinfeld modules for K = F_q(x) with a place
 *        at infinity of degree d, built from the explicit shtuka.
 *
 * Conventions:
 *  - A = { m / P_inf^k : deg m <= k d }, sgn(m / P_inf^k) = m(zeta).
 *  - H is modelled inside F_{q^d}(x)[g] / (g^N - c), N = q^d - 1,
 *    c = prod_{k<d} (zeta^{q^{d-1}} - x^{q^k}); w = g^{q-1}. Here g is the
 *    Gauss sum for the sign y -> y(zeta^{q^{d-1}}), which makes
 *    f = (z - x)/(z - zeta) g^{1-q} sign-normalized with n(phi) = d - 1.
 *  - Functions of z carry atoms (z - zeta^{q^k})^{-1}; tau raises constants
 *    and x to the q-th power and fixes z.
 *  - An integral ideal is a pair (m, n): m monic, coprime to P_inf, deg m <= n.
 *    It is the ideal of elements vanishing on m and to order n - deg m at
 *    x = infinity, which is the prime P of degree 1 generating Pic(A).
 */

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/carlitz.hpp"
#include "drinfeld/kummer.hpp"
#include "drinfeld/locpoly.hpp"
#include "drinfeld/skew_poly.hpp"
#include "drinfeld/tate_series.hpp"

namespace drinfeld {

using HElem = Kummer<RatFn>;
using ZElem = Kummer<ZFrac>;
using PhiPoly = SkewPoly<HElem>;

struct GenusZeroContext {
    CarlitzContext cc;
    int q = 2, d = 1;
    long long N = 1, M = 1;     // q^d - 1 and N / (q - 1)
    Field Fq, Finf;
    FE zeta;
    FPoly pinf;                 // over F_q
    KummerCtxPtr kctx;
    VarSpacePtr zvs;            // the variable z with atoms zeta^{q^k}
    RatFn x;                    // over F_{q^d}
    SeriesCtxPtr sctx;          // u-series with the variable z
};

inline FPoly lift_poly(const GenusZeroContext& G, const FPoly& p) {
    std::vector<FE> c;
    for (const auto& a : p.coeffs()) c.push_back(to_field(a, G.Finf.get()));
    return FPoly(c);
}
inline RatFn lift_rat(const GenusZeroContext& G, const RatFn& r) {
    return RatFn(lift_poly(G, r.num()), lift_poly(G, r.den()), G.Finf.get());
}
inline FE zeta_pow(const GenusZeroContext& G, long long k) { return frobenius(G.zeta, k); }
inline RatFn x_pow(const GenusZeroContext& G, long long k) { return G.x.frob(k); }
inline RatFn rconst(const GenusZeroContext& G, const FE& c) { return RatFn(to_field(c, G.Finf.get())); }

inline GenusZeroContext make_genus0_context(int q, const std::vector<long long>& pinf) {
    if (pinf.empty()) throw std::invalid_argument("P_inf must be given");
    GenusZeroContext G;
    G.cc = make_carlitz_context(q, pinf);
    G.q = q;
    G.d = G.cc.d;
    G.N = G.cc.N();
    G.M = G.N / (q - 1);
    G.Fq = G.cc.Fq;
    G.Finf = G.cc.Finf;
    G.zeta = G.cc.zeta;
    G.pinf = G.cc.pinf;
    G.x = RatFn::x(G.Finf);
    RatFn c = rconst(G, FE(G.Finf, 1));
    const FE zt = zeta_pow(G, G.d - 1);
    for (int k = 0; k < G.d; ++k) c = c * (rconst(G, zt) - x_pow(G, k));
    {
        FPoly lin{-zt, FE(G.Finf, 1)};
        auto [q1, r1] = divmod(c.num(), lin);
        if (!r1.is_zero() || divmod(q1, lin).second.is_zero())
            throw std::logic_error("Kummer modulus: c must have a simple root");
    }
    auto kc = std::make_shared<KummerCtx>();
    kc->N = static_cast<int>(G.N);
    kc->q = q;
    kc->c = c;
    G.kctx = kc;
    std::vector<FE> roots;
    for (int k = 0; k < G.d; ++k) roots.push_back(zeta_pow(G, k));
    G.zvs = make_varspace({"z"}, G.Finf, roots);
    G.sctx = place_series_context(G.cc, {"z"});
    return G;
}

// ---------------------------------------------------------------------------
// Elements of A

struct AElem {
    FPoly m;   // over F_q
    int k = 0;
};

/// Splits a = m / P_inf^k. With `in_A_only`, throws when a is not in A.
inline AElem a_parts(const GenusZeroContext& G, const RatFn& a, bool in_A_only = true) {
    AElem r;
    FPoly den = a.den();
    while (den.degree() > 0) {
        auto [qq, rem] = divmod(den, G.pinf);
        if (!rem.is_zero()) throw std::invalid_argument("element is not in A: denominator is not a power of P_inf");
        den = qq;
        ++r.k;
    }
    r.m = den.coeff(0).inv() * a.num();
    if (in_A_only && r.m.degree() > r.k * G.d) throw std::invalid_argument("element is not in A: numerator degree exceeds k d");
    return r;
}
inline bool in_A(const GenusZeroContext& G, const RatFn& a) {
    try { (void)a_parts(G, a); return true; } catch (const std::invalid_argument&) { return false; }
}
inline RatFn make_A(const GenusZeroContext& G, const FPoly& m, int k) {
    return RatFn(m, G.pinf.pow(k), G.Fq.get());
}
/// deg a = k d when P_inf does not divide m.
inline int deg_A(const GenusZeroContext& G, const RatFn& a) { return a_parts(G, a).k * G.d; }
/// Root of P_inf at which signs are read: zeta^{q^{d-1}}, matching the Kummer modulus.
inline FE sign_root(const GenusZeroContext& G) { return frobenius(G.zeta, G.d - 1); }
/// sgn(m / P_inf^k) = m(sign_root) for any such element of K.
inline FE sgn_A(const GenusZeroContext& G, const RatFn& a) {
    if (a.is_zero()) throw std::domain_error("sgn of zero");
    FE s = lift_poly(G, a_parts(G, a, false).m).eval(sign_root(G));
    if (s.is_zero()) throw std::domain_error("sgn: numerator divisible by P_inf");
    return s;
}
inline RatFn theta_K(const GenusZeroContext& G) { return make_A(G, FPoly::constant(FE(G.Fq, 1)), 1); }

// ---------------------------------------------------------------------------
// Functions of z

inline ZFrac zc(const GenusZeroContext& G, const RatFn& r) { return ZFrac::constant(G.zvs, r); }
inline ZFrac zvar(const GenusZeroContext& G) { return ZFrac::var(G.zvs, 0); }
inline ZFrac zatom_inv(const GenusZeroContext& G, long long k, int e = 1) {
    return ZFrac::atom_inv(G.zvs, 0, static_cast<int>(((k % G.d) + G.d) % G.d), e);
}
/// rho(a) = m(z) / P_inf(z)^k, with P_inf(z) the product of the atoms.
inline ZFrac rho(const GenusZeroContext& G, const RatFn& a) {
    AElem p = a_parts(G, a, false);
    ZFrac acc = zc(G, RatFn(0));
    ZFrac zp = zc(G, rconst(G, FE(G.Finf, 1)));
    FPoly m = lift_poly(G, p.m);
    for (int i = 0; i <= m.degree(); ++i, zp = zp * zvar(G))
        if (!m.coeff(i).is_zero()) acc = acc + zc(G, RatFn(m.coeff(i))) * zp;
    if (p.k == 0) return acc;
    ZFrac den = zc(G, rconst(G, FE(G.Finf, 1)));
    for (int k = 0; k < G.d; ++k) den = den * zatom_inv(G, k, p.k);
    return acc * den;
}
/// B_i = prod_{j<i} (z - x^{q^j}) / (z - zeta^{q^j}).
inline ZFrac B_z(const GenusZeroContext& G, int i) {
    ZFrac acc = zc(G, rconst(G, FE(G.Finf, 1)));
    for (int j = 0; j < i; ++j) acc = acc * (zvar(G) - zc(G, x_pow(G, j))) * zatom_inv(G, j);
    return acc;
}
inline RatFn B_at(const GenusZeroContext& G, int i, const RatFn& y) {
    RatFn acc = rconst(G, FE(G.Finf, 1));
    for (int j = 0; j < i; ++j) acc = acc * (y - x_pow(G, j)) / (y - rconst(G, zeta_pow(G, j)));
    return acc;
}
inline RatFn z_eval(const ZFrac& f, const RatFn& y) { return f.eval<RatFn>({y}); }

inline HElem h_one(const GenusZeroContext& G) { return HElem(G.kctx, rconst(G, FE(G.Finf, 1)), 0); }
inline HElem h_const(const GenusZeroContext& G, const RatFn& r) { return HElem(G.kctx, r, 0); }
inline HElem h_mono(const GenusZeroContext& G, const RatFn& r, long long e) { return HElem::monomial(G.kctx, r, e); }
inline ZElem to_z(const GenusZeroContext& G, const HElem& h) {
    return h.map([&G](const RatFn& r) { return zc(G, r); });
}
/// Substitutes z := y coefficientwise.
inline HElem z_subst(const ZElem& a, const RatFn& y) {
    return a.map([&y](const ZFrac& f) { return f.is_zero() ? RatFn(0) : z_eval(f, y); });
}

/// The shtuka f = (z - x)/(z - zeta) g^{1-q}.
inline ZElem shtuka(const GenusZeroContext& G) {
    return ZElem::monomial(G.kctx, (zvar(G) - zc(G, G.x)) * zatom_inv(G, 0), 1 - G.q);
}
/// f f^{(1)} ... f^{(i-1)} = B_i g^{1 - q^i}.
inline ZElem shtuka_product(const GenusZeroContext& G, int i) {
    return ZElem::monomial(G.kctx, B_z(G, i), 1 - ipow(G.q, i));
}

// ---------------------------------------------------------------------------
// The Drinfeld module

/// phi_a, solved from rho(a) = sum_i phi_{a,i} f ... f^{(i-1)} one z-point x^{q^i} at a time.
inline PhiPoly drinfeld_coeffs(const GenusZeroContext& G, const RatFn& a) {
    AElem p = a_parts(G, a);
    RatFn aF = lift_rat(G, a);
    const int deg = p.k * G.d;
    std::vector<RatFn> c;
    for (int i = 0; i <= deg; ++i) {
        RatFn y = x_pow(G, i);
        RatFn val = aF.frob(i);
        for (int j = 0; j < i; ++j) val = val - c[j] * B_at(G, j, y);
        c.push_back(val / B_at(G, i, y));
    }
    ZFrac check = rho(G, a);
    for (int i = 0; i <= deg; ++i) check = check - zc(G, c[i]) * B_z(G, i);
    if (!check.normalized().is_zero()) throw std::logic_error("drinfeld_coeffs: expansion of rho(a) does not close");
    std::vector<HElem> co;
    for (int i = 0; i <= deg; ++i) co.push_back(h_mono(G, c[i], ipow(G.q, i) - 1));
    return PhiPoly(co);
}

/// e_i = 1 / (f ... f^{(i-1)} at z = x^{q^i}).
inline HElem exp_coeff_eval(const GenusZeroContext& G, int i) {
    HElem v = z_subst(shtuka_product(G, i), x_pow(G, i));
    return v.inv();
}
/// e_i = g^{q^i - 1} prod_{k<i} (x^{q^i} - zeta^{q^k}) / (x^{q^i} - x^{q^k}).
inline HElem exp_coeff_closed(const GenusZeroContext& G, int i) {
    RatFn y = x_pow(G, i), acc = rconst(G, FE(G.Finf, 1));
    for (int k = 0; k < i; ++k) acc = acc * (y - rconst(G, zeta_pow(G, k))) / (y - x_pow(G, k));
    return h_mono(G, acc, ipow(G.q, i) - 1);
}
inline std::vector<HElem> exp_coeffs_phi(const GenusZeroContext& G, int imax) {
    std::vector<HElem> out;
    for (int i = 0; i <= imax; ++i) {
        HElem a = exp_coeff_eval(G, i), b = exp_coeff_closed(G, i);
        if (a != b) throw std::logic_error("exp_coeffs_phi: closed form and evaluation disagree at i = " + std::to_string(i));
        out.push_back(a);
    }
    return out;
}

/// Coefficients 0..n of a * b for tau-series a, b.
template <class R>
std::vector<R> skew_trunc_mul(const std::vector<R>& a, const std::vector<R>& b, int n) {
    std::vector<R> out;
    for (int k = 0; k <= n; ++k) {
        std::optional<R> acc;
        for (int i = 0; i <= k; ++i) {
            if (i >= static_cast<int>(a.size()) || k - i >= static_cast<int>(b.size())) continue;
            R t = a[i] * drinfeld::frob(b[k - i], i);
            acc = acc ? *acc + t : t;
        }
        out.push_back(acc ? *acc : a[0] - a[0]);
    }
    return out;
}

/// exp * a == phi_a * exp in tau-degrees <= e.size() - 1.
inline bool check_exp_phi(const GenusZeroContext& G, const std::vector<HElem>& e, const RatFn& a) {
    const int n = static_cast<int>(e.size()) - 1;
    auto lhs = skew_trunc_mul(e, std::vector<HElem>{h_const(G, lift_rat(G, a))}, n);
    auto rhs = skew_trunc_mul(drinfeld_coeffs(G, a).coeffs(), e, n);
    for (int k = 0; k <= n; ++k)
        if (lhs[k] != rhs[k]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Ideals

struct Ideal {
    FPoly m;   // monic over F_q, coprime to P_inf
    int n = 0; // degree
};
inline bool operator==(const Ideal& a, const Ideal& b) { return a.n == b.n && a.m == b.m; }

inline Ideal unit_ideal(const GenusZeroContext& G) { return Ideal{FPoly::constant(FE(G.Fq, 1)), 0}; }
/// The prime P at x = infinity.
inline Ideal prime_P(const GenusZeroContext& G) { return Ideal{FPoly::constant(FE(G.Fq, 1)), 1}; }
inline Ideal ideal_mul(const Ideal& a, const Ideal& b) { return Ideal{a.m * b.m, a.n + b.n}; }
inline int ideal_class(const GenusZeroContext& G, const Ideal& I) { return I.n % G.d; }
/// I = a P^j with a = m / P_inf^{floor(n/d)} and j = n mod d.
inline RatFn ideal_a(const GenusZeroContext& G, const Ideal& I) { return make_A(G, I.m, I.n / G.d); }
/// (a) for a in A with P_inf not dividing the numerator.
inline Ideal principal_ideal(const GenusZeroContext& G, const RatFn& a) {
    AElem p = a_parts(G, a);
    return Ideal{p.m.lead().inv() * p.m, p.k * G.d};
}

inline std::string ideal_string(const Ideal& I) { return "(" + poly_string(I.m) + "; " + std::to_string(I.n) + ")"; }

/// Monic polynomials of degree k over F_q, in increasing coefficient encoding.
inline std::vector<FPoly> monic_polys(const Field& Fq, int k) {
    std::vector<FPoly> out;
    const int q = static_cast<int>(Fq->size());
    long long total = ipow(q, k);
    for (long long code = 0; code < total; ++code) {
        std::vector<FE> c;
        long long t = code;
        for (int i = 0; i < k; ++i, t /= q) c.push_back(FE::from_int(Fq, t % q));
        c.push_back(FE(Fq, 1));
        out.push_back(FPoly(c));
    }
    return out;
}

/// Integral ideals of degree <= D ordered by degree, then deg m, then the encoding of m.
inline std::vector<Ideal> enumerate_ideals(const GenusZeroContext& G, int D) {
    if (D < 0) throw std::invalid_argument("enumerate_ideals: D must be >= 0");
    std::vector<Ideal> out;
    for (int n = 0; n <= D; ++n)
        for (int k = 0; k <= n; ++k)
            for (auto& m : monic_polys(G.Fq, k))
                if (gcd(m, G.pinf).degree() == 0) out.push_back(Ideal{m, n});
    return out;
}

/// Coefficient of T^n in (1 - T^d) / ((1 - T)(1 - qT)).
inline long long ideal_count_formula(int q, int d, int n) {
    long long a = (ipow(q, n + 1) - 1) / (q - 1);
    long long b = n >= d ? (ipow(q, n - d + 1) - 1) / (q - 1) : 0;
    return a - b;
}

/// Generators m x^i / P_inf^k of I with k = ceil(n/d), ceil(n/d) + 1.
inline std::vector<RatFn> ideal_generators(const GenusZeroContext& G, const Ideal& I) {
    std::vector<RatFn> out;
    int k1 = (I.n + G.d - 1) / G.d;
    for (int k = k1; k <= k1 + 1; ++k)
        for (int i = 0; i <= k * G.d - I.n; ++i)
            out.push_back(make_A(G, I.m * FPoly::monomial(FE(G.Fq, 1), i), k));
    return out;
}

struct IdealSkew {
    PhiPoly phi;
    HElem psi;
};

/// sum_e r_e g^e, zero terms omitted.
inline std::string h_string(const HElem& h) {
    std::string s;
    for (int e = 0; e < h.ctx()->N; ++e) {
        if (h[e].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + to_string(h[e]) + ")";
        if (e > 0) s += "*g" + (e > 1 ? "^" + std::to_string(e) : std::string());
    }
    return s.empty() ? "0" : s;
}

/// phi_I as the monic right gcd of phi_a over generators a of I.
inline IdealSkew ideal_skew(const GenusZeroContext& G, const Ideal& I) {
    if (I.n == 0) return {PhiPoly::constant(h_one(G)), h_one(G)};
    PhiPoly acc;
    bool started = false;
    for (const auto& a : ideal_generators(G, I)) {
        PhiPoly p = drinfeld_coeffs(G, a);
        acc = started ? right_gcd(std::vector<PhiPoly>{acc, p}) : right_gcd(std::vector<PhiPoly>{p});
        started = true;
        if (acc.degree() == I.n) break;
    }
    if (!started || acc.degree() != I.n)
        throw std::logic_error("ideal_skew: generators of " + ideal_string(I) + " give the wrong tau-degree");
    return {acc, acc.coeff(0)};
}

/// u_I = sum_j phi_{I,j} f ... f^{(j-1)}.
inline ZElem u_from_phi(const GenusZeroContext& G, const PhiPoly& phi) {
    ZElem acc(G.kctx);
    for (int j = 0; j <= phi.degree(); ++j) acc = acc + to_z(G, phi.coeff(j)) * shtuka_product(G, j);
    return acc;
}
inline ZElem u_ideal(const GenusZeroContext& G, const Ideal& I) { return u_from_phi(G, ideal_skew(G, I).phi); }
/// u_{aA} = rho(a) / sgn(a).
inline ZElem u_principal(const GenusZeroContext& G, const RatFn& a) {
    return ZElem(G.kctx, zc(G, RatFn(sgn_A(G, a).inv())) * rho(G, a), 0);
}

// ---------------------------------------------------------------------------
// Galois action

/// sigma acts as Frob^j on F_{q^d} (x, z fixed) and sends w = g^{q-1} to W.
struct GaloisElem {
    int j = 0;
    HElem W;
};

inline HElem w_elem(const GenusZeroContext& G) { return h_mono(G, rconst(G, FE(G.Finf, 1)), G.q - 1); }
inline GaloisElem galois_identity(const GenusZeroContext& G) { return {0, w_elem(G)}; }
inline bool operator==(const GaloisElem& a, const GaloisElem& b) { return a.j == b.j && a.W == b.W; }

namespace detail {
inline RatFn gal_coeff(const RatFn& r, int j) { return r.frob_const(j); }
inline ZFrac gal_coeff(const ZFrac& r, int j) { return r.frob_const(j); }
inline RatFn lift_to(const GenusZeroContext&, const RatFn& r, const RatFn*) { return r; }
inline ZFrac lift_to(const GenusZeroContext& G, const RatFn& r, const ZFrac*) { return zc(G, r); }
}  // namespace detail

/// sigma(a); every g-exponent of a must be a multiple of q - 1.
template <class R>
Kummer<R> galois_apply(const GenusZeroContext& G, const GaloisElem& s, const Kummer<R>& a) {
    Kummer<R> out(G.kctx);
    HElem Wp = h_one(G);
    int done = 0;
    for (int e = 0; e < G.N; ++e) {
        if (drinfeld::is_zero(a[e])) continue;
        if (e % (G.q - 1) != 0) throw std::domain_error("galois_apply: element is outside H");
        int t = e / (G.q - 1);
        while (done < t) { Wp = Wp * s.W; ++done; }
        R c = detail::gal_coeff(a[e], s.j);
        Kummer<R> img = Wp.map([&G](const RatFn& r) { return detail::lift_to(G, r, static_cast<const R*>(nullptr)); });
        out = out + c * img;
    }
    return out;
}
inline GaloisElem galois_compose(const GenusZeroContext& G, const GaloisElem& a, const GaloisElem& b) {
    return {(a.j + b.j) % G.d, galois_apply(G, a, b.W)};
}
/// W^M must equal sigma(c) for the action to respect g^N = c.
inline bool galois_consistent(const GenusZeroContext& G, const GaloisElem& s) {
    return s.W.pow(G.M) == h_const(G, G.kctx->c.frob_const(s.j));
}

inline GaloisElem sigma_principal(const GenusZeroContext& G, const FE& sgn) {
    FE s = to_field(sgn, G.Finf.get()).pow(G.q - 1);
    return {0, RatFn(s) * w_elem(G)};
}

/**
 * sigma_P, solved from sigma_P(f) u_P = f u_P^{(1)}.
 * With c = prod_k (t - x^{q^k}), sigma_P(c) = c^q (t^q - x)^{-N}, so
 * sigma_P(w) = eps w^q (t^q - x)^{1-q} with eps in mu_M; here t^q = zeta.
 */
inline GaloisElem sigma_P(const GenusZeroContext& G) {
    ZElem uP = u_ideal(G, prime_P(G));
    ZElem f = shtuka(G);
    RatFn h = (rconst(G, zeta_pow(G, G.d)) - G.x).pow(1 - G.q);
    // sigma_P(f) / eps^{-1} = (z - x)/(z - zeta^q) (w^q h)^{-1}
    ZElem f0 = ZElem::monomial(G.kctx, (zvar(G) - zc(G, G.x)) * zatom_inv(G, 1) * zc(G, h.inv()), -G.q * (G.q - 1));
    ZElem lhs = f0 * uP, rhs = f * uP.frob(1);
    int e = lhs.monomial_exponent();
    if (e < 0 || rhs.monomial_exponent() != e) throw std::logic_error("sigma_P: u_P is not a Kummer monomial");
    std::optional<RatFn> ratio;
    for (int t = 1; t < 40 && !ratio; ++t) {
        RatFn z0 = x_pow(G, t) + G.x.pow(2) + rconst(G, FE::from_int(G.Finf, t));
        try {
            RatFn den = z_eval(lhs[e], z0);
            if (den.is_zero()) continue;
            ratio = z_eval(rhs[e], z0) / den;
        } catch (const std::domain_error&) {
        }
    }
    if (!ratio || !ratio->is_constant()) throw std::logic_error("sigma_P: no constant eps solves the identity");
    RatFn eps_inv = *ratio;
    if (rhs != to_z(G, h_const(G, eps_inv)) * lhs) throw std::logic_error("sigma_P: identity fails for the solved eps");
    FE eps = eps_inv.constant_value().inv();
    GaloisElem s{1 % G.d, h_mono(G, RatFn(eps) * h, G.q * (G.q - 1))};
    if (!galois_consistent(G, s)) throw std::logic_error("sigma_P: action does not preserve g^N = c");
    return s;
}

inline GaloisElem galois_pow(const GenusZeroContext& G, const GaloisElem& s, int k) {
    GaloisElem r = galois_identity(G);
    for (int i = 0; i < k; ++i) r = galois_compose(G, s, r);
    return r;
}

/// sigma_I = sigma_{aA} sigma_P^j for I = a P^j.
inline GaloisElem artin(const GenusZeroContext& G, const Ideal& I, const GaloisElem& sP) {
    GaloisElem sa = sigma_principal(G, sgn_A(G, ideal_a(G, I)));
    return galois_compose(G, sa, galois_pow(G, sP, I.n % G.d));
}

/// The group generated by sigma_P and the sigma_{aA}.
inline std::vector<GaloisElem> galois_group(const GenusZeroContext& G, const GaloisElem& sP) {
    std::vector<GaloisElem> gens{sP};
    for (const auto& s : all_elements(G.Finf))
        if (!s.is_zero()) gens.push_back(sigma_principal(G, s));
    std::vector<GaloisElem> elems{galois_identity(G)};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : gens) {
            GaloisElem n = galois_compose(G, g, elems[i]);
            if (std::find(elems.begin(), elems.end(), n) == elems.end()) {
                elems.push_back(n);
                if (elems.size() > static_cast<std::size_t>(4 * G.d * G.M)) throw std::logic_error("galois_group: too large");
            }
        }
    return elems;
}

// ---------------------------------------------------------------------------
// Ideal table

struct IdealRecord {
    Ideal I;
    GaloisElem sigma;
    ZElem u;
    HElem psi;
};

/// sigma_I, u_I and psi(I) for all integral I of degree <= D, via u_{a P^j} = sigma_a(u_{P^j}) u_a.
inline std::vector<IdealRecord> ideal_table(const GenusZeroContext& G, int D, const GaloisElem& sP) {
    std::vector<ZElem> uPj;
    std::vector<GaloisElem> sPj;
    Ideal Pj = unit_ideal(G);
    for (int j = 0; j < G.d; ++j) {
        uPj.push_back(u_ideal(G, Pj));
        sPj.push_back(galois_pow(G, sP, j));
        Pj = ideal_mul(Pj, prime_P(G));
    }
    std::vector<IdealRecord> out;
    for (const auto& I : enumerate_ideals(G, D)) {
        RatFn a = ideal_a(G, I);
        const int j = I.n % G.d;
        GaloisElem sa = sigma_principal(G, sgn_A(G, a));
        ZElem u = galois_apply(G, sa, uPj[static_cast<std::size_t>(j)]) * u_principal(G, a);
        out.push_back({I, galois_compose(G, sa, sPj[static_cast<std::size_t>(j)]), u, z_subst(u, G.x)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Identities

struct LemmaReport {
    bool eval_psi = true;     // u_I at z = x equals psi(I)
    bool twist = true;        // sigma_I(f) u_I = f u_I^{(1)}
    bool product = true;      // u_{IJ} = sigma_I(u_J) u_I
    bool fast = true;         // fast psi / u formulas agree with right_gcd
    int checked = 0;
    std::string failure;
};

/// Checks the u_I identities for all ideals of degree <= Dprod, and the product
/// rule for pairs of degree <= D whose product has degree <= Dprod.
inline LemmaReport lemma_suite(const GenusZeroContext& G, int D, int Dprod = -1) {
    if (Dprod < D) Dprod = D;
    LemmaReport rep;
    GaloisElem sP = sigma_P(G);
    ZElem f = shtuka(G);
    auto ideals = enumerate_ideals(G, Dprod);
    std::vector<ZElem> us;
    std::vector<GaloisElem> sig;
    std::vector<ZElem> uPj;
    for (int j = 0; j < G.d; ++j) uPj.push_back(u_ideal(G, Ideal{FPoly::constant(FE(G.Fq, 1)), j}));
    for (const auto& I : ideals) {
        IdealSkew sk = ideal_skew(G, I);
        ZElem u = u_from_phi(G, sk.phi);
        GaloisElem s = artin(G, I, sP);
        us.push_back(u);
        sig.push_back(s);
        ++rep.checked;
        if (z_subst(u, G.x) != sk.psi) {
            rep.eval_psi = false;
            rep.failure = "u_I(x) != psi for " + ideal_string(I);
        }
        if (galois_apply(G, s, f) * u != f * u.frob(1)) {
            rep.twist = false;
            rep.failure = "twist identity fails for " + ideal_string(I);
        }
        RatFn a = ideal_a(G, I);
        ZElem fast = galois_apply(G, sigma_principal(G, sgn_A(G, a)), uPj[I.n % G.d]) * u_principal(G, a);
        if (fast != u) {
            rep.fast = false;
            rep.failure = "fast u_I disagrees for " + ideal_string(I);
        }
    }
    for (std::size_t i = 0; i < ideals.size(); ++i)
        for (std::size_t k = 0; k < ideals.size(); ++k) {
            if (ideals[i].n > D || ideals[k].n > D) continue;
            Ideal IJ = ideal_mul(ideals[i], ideals[k]);
            if (IJ.n > Dprod) continue;
            auto it = std::find(ideals.begin(), ideals.end(), IJ);
            if (it == ideals.end()) continue;
            const ZElem& uIJ = us[static_cast<std::size_t>(it - ideals.begin())];
            if (uIJ != galois_apply(G, sig[i], us[k]) * us[i]) {
                rep.product = false;
                rep.failure = "product identity fails for " + ideal_string(ideals[i]) + " * " + ideal_string(ideals[k]);
            }
        }
    return rep;
}

/// sum_i phi_i f f^{(1)} ... f^{(i-1)} for an arbitrary shtuka-like f.
inline ZElem expand_in_f(const GenusZeroContext& G, const PhiPoly& phi, const ZElem& f) {
    ZElem acc(G.kctx), prod = to_z(G, h_one(G));
    for (int i = 0; i <= phi.degree(); ++i) {
        acc = acc + to_z(G, phi.coeff(i)) * prod;
        prod = prod * f.frob(i);
    }
    return acc;
}

/// Coefficientwise sigma(phi).
inline PhiPoly conjugate_phi(const GenusZeroContext& G, const GaloisElem& s, const PhiPoly& phi) {
    std::vector<HElem> c;
    for (int i = 0; i <= phi.degree(); ++i) c.push_back(galois_apply(G, s, phi.coeff(i)));
    return PhiPoly(c);
}

struct ShtOrbitReport {
    int group_order = 0;
    int distinct = 0;          // number of distinct sigma(f)
    bool conjugates_ok = true; // each sigma(f) is the shtuka of sigma(phi)
    std::string failure;
};

/// {sigma(f) : sigma in G}: distinctness, and rho(a) = sum sigma(phi_a)_i sigma(f)...sigma(f)^{(i-1)}
/// with sigma(phi) still commutative, for a in `samples`.
inline ShtOrbitReport sht_orbit(const GenusZeroContext& G, const std::vector<RatFn>& samples) {
    ShtOrbitReport rep;
    auto group = galois_group(G, sigma_P(G));
    rep.group_order = static_cast<int>(group.size());
    ZElem f = shtuka(G);
    std::vector<ZElem> seen;
    std::vector<PhiPoly> phis;
    for (const auto& a : samples) phis.push_back(drinfeld_coeffs(G, a));
    for (const auto& s : group) {
        ZElem fs = galois_apply(G, s, f);
        if (std::find(seen.begin(), seen.end(), fs) == seen.end()) seen.push_back(fs);
        std::vector<PhiPoly> conj;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            conj.push_back(conjugate_phi(G, s, phis[k]));
            if (expand_in_f(G, conj.back(), fs) != ZElem(G.kctx, rho(G, samples[k]), 0)) {
                rep.conjugates_ok = false;
                rep.failure = "rho(a) expansion fails for " + to_string(samples[k]);
            }
        }
        for (std::size_t k = 1; k < conj.size(); ++k)
            if (conj[0] * conj[k] != conj[k] * conj[0]) {
                rep.conjugates_ok = false;
                rep.failure = "conjugate module does not commute";
            }
    }
    rep.distinct = static_cast<int>(seen.size());
    return rep;
}

// ---------------------------------------------------------------------------
// Series images

/// n(phi), and the sign twist of the Gauss sum generating the Kummer ring.
inline int gauss_twist(const GenusZeroContext& G) { return G.d - 1; }

struct PlaceSeries {
    long long prec = 0;
    TateSeries X, g;
    std::vector<TateSeries> gpow;   // g^0 .. g^{N-1}
};

/// Place data in a series context over the same place (any variable names).
inline PlaceSeries place_series(const GenusZeroContext& G, const SeriesCtxPtr& ctx, long long n) {
    PlaceSeries s;
    s.prec = n;
    s.X = x_series(ctx, G.cc, n);
    s.g = gauss_sum(ctx, G.cc, n, gauss_twist(G));
    s.gpow.push_back(TateSeries::one(ctx));
    for (long long e = 1; e < G.N; ++e) s.gpow.push_back((s.gpow.back() * s.g).truncated(n + e));
    return s;
}
inline PlaceSeries place_series(const GenusZeroContext& G, long long n) { return place_series(G, G.sctx, n); }

/// Series image of an element of F_{q^d}(x)[g]/(g^N - c), precision capped at `cap`.
inline TateSeries h_series(const GenusZeroContext& G, const PlaceSeries& P, const HElem& h, long long cap) {
    TateSeries acc(G.sctx, kExact);
    for (int e = 0; e < G.N; ++e) {
        if (h[e].is_zero()) continue;
        acc = acc + (ratfn_at(h[e], P.X, cap) * P.gpow[e]).truncated(cap);
    }
    return acc.truncated(cap);
}

/// Series of a z-function with z read as variable `var` of the series context.
inline TateSeries zfrac_series(const PlaceSeries& P, const ZFrac& f, int var, long long cap) {
    const auto& ctx = P.X.ctx();
    const auto& vs = ctx->vs;
    TateSeries acc(ctx, kExact);
    for (const auto& [m, c] : f.terms()) {
        Coef mono(vs, {{mono_var(var, mono_exp(m, 0)), FE(ctx->F, 1)}});
        acc = acc + (mono * ratfn_at(c, P.X, cap)).truncated(cap);
    }
    Coef den = Coef::constant(vs, FE(ctx->F, 1));
    for (int k = 0; k < vs->d; ++k)
        if (int e = f.den_exp(0, k)) den = den * Coef::atom_inv(vs, var, k, e);
    return (den * acc).truncated(cap);
}
inline TateSeries zelem_series(const GenusZeroContext& G, const PlaceSeries& P, const ZElem& a, int var, long long cap) {
    TateSeries acc(P.X.ctx(), kExact);
    for (int e = 0; e < G.N; ++e) {
        if (a[e].is_zero()) continue;
        acc = acc + (zfrac_series(P, a[e], var, cap) * P.gpow[static_cast<std::size_t>(e)]).truncated(cap);
    }
    return acc.truncated(cap);
}

/// Order at x = zeta of a rational function over F_{q^d}; its u-valuation is N times this.
inline int ord_at(const RatFn& r, const FE& zeta) {
    auto ord = [&zeta](FPoly p) {
        int k = 0;
        FPoly lin{-zeta, FE(zeta.field(), 1)};
        while (p.degree() >= 1) {
            auto [qq, rem] = divmod(p, lin);
            if (!rem.is_zero()) break;
            p = qq;
            ++k;
        }
        return k;
    };
    if (r.is_zero()) throw std::domain_error("ord_at: zero");
    return ord(r.num()) - ord(r.den());
}
/// u-valuation of g: only the factor at k = d - 1 of the modulus vanishes at the place.
inline long long g_valuation(const GenusZeroContext& G) { return ipow(G.q, G.d - 1); }
/// u-valuation of a Kummer monomial r g^e.
inline long long h_valuation(const GenusZeroContext& G, const HElem& h) {
    int e = h.monomial_exponent();
    if (e < 0) throw std::domain_error("h_valuation: not a monomial");
    return e * g_valuation(G) + G.N * ord_at(h[e], G.zeta);
}

/// U = prod_{i>=0} (1 + (zeta - x)^{q^i} / (z - zeta^{q^i}))^{-1}.
inline TateSeries special_U(const GenusZeroContext& G, const PlaceSeries& P, long long n) {
    TateSeries base = TateSeries::constant(G.sctx, G.zeta) - P.X;
    auto factor = [&](int i) {
        TateSeries one = TateSeries::one(G.sctx);
        TateSeries t = Coef::atom_inv(G.sctx->vs, 0, i % G.d) * base.twist(i, n + 1);
        return sdiv(one, one + t, n);
    };
    return inf_product(G.sctx, factor, n);
}

/// The shtuka as a series: (z - x)/(z - zeta) g^{1-q}.
inline TateSeries f_series(const GenusZeroContext& G, const PlaceSeries& P, long long cap) {
    TateSeries z = TateSeries::var(G.sctx, 0);
    TateSeries lin = Coef::atom_inv(G.sctx->vs, 0, 0) * (z - P.X);
    return (lin * P.g.pow(1 - G.q, cap + G.q)).truncated(cap);
}

/// omega = g^{-1} U, to precision n.
inline TateSeries omega_general(const GenusZeroContext& G, const PlaceSeries& P, long long n) {
    if (n < 1) throw std::invalid_argument("precision must be positive");
    if (P.prec < n + 2) throw PrecisionError("omega_general: place series too short");
    TateSeries U = special_U(G, P, n + 2);
    return sdiv(U, P.g, n);
}

struct PiTilde {
    TateSeries pi;
    long long theta_power = 0;   // power of 1/P_inf applied
    FE unit;                     // F_q^x normalization
    long long vstar = 0;         // predicted valuation, u-units
};

/// Predicted u-valuation of the period: max_j -v(e_j)/(q^j - 1) over 1 <= j <= jmax, rounded down.
inline long long newton_period_valuation(const GenusZeroContext& G, int jmax) {
    long double best = -1e300L;
    for (int j = 1; j <= jmax; ++j) {
        long double v = -static_cast<long double>(h_valuation(G, exp_coeff_closed(G, j))) / (ipow(G.q, j) - 1);
        best = std::max(best, v);
    }
    long long r = static_cast<long long>(best);
    if (static_cast<long double>(r) != best) throw std::domain_error("newton_period_valuation: non-integral slope");
    return r;
}

/**
 * pi~ from (z - x) omega at z = x:
 * g^{-1} (x - zeta) prod_{i>=1} (1 + (zeta - x)^{q^i} / (x - zeta^{q^i}))^{-1},
 * rescaled by a power of 1/P_inf to the Newton-polygon valuation and by an
 * F_q^x unit so that sgn(pi~ u^{q^{n(phi)}}) = 1.
 */
inline PiTilde pi_tilde_general(const GenusZeroContext& G, const PlaceSeries& P, long long n, int jmax = 5) {
    if (n < 1) throw std::invalid_argument("precision must be positive");
    PiTilde out;
    out.vstar = newton_period_valuation(G, jmax);
    long long work = n + 4 * G.N + 8;
    if (P.prec < work) throw PrecisionError("pi_tilde_general: place series too short");
    TateSeries zmx = TateSeries::constant(G.sctx, G.zeta) - P.X;
    auto factor = [&](int i) {
        int k = i + 1;
        TateSeries one = TateSeries::one(G.sctx);
        TateSeries den = P.X - TateSeries::constant(G.sctx, zeta_pow(G, k));
        return sdiv(one, one + sdiv(zmx.twist(k, work + G.N), den, work + G.N), work);
    };
    TateSeries w = sdiv(-zmx * inf_product(G.sctx, factor, work), P.g, work);
    long long vw = w.valuation();
    if ((vw - out.vstar) % G.N != 0) throw std::domain_error("pi_tilde_general: valuation gap is not a multiple of N");
    out.theta_power = (vw - out.vstar) / G.N;
    // 1/P_inf = -u^{-N}
    TateSeries th = TateSeries::u_power(G.sctx, -G.N * out.theta_power,
                                        FE::from_int(G.Finf, out.theta_power % 2 == 0 ? 1 : -1));
    TateSeries pi = (th * w).truncated(n);
    FE s = paper_sgn(pi.shifted(g_valuation(G)));
    if (s.pow(G.q - 1) != FE(G.Finf, 1)) throw std::domain_error("pi_tilde_general: sign is not in F_q");
    out.unit = s.inv();
    out.pi = out.unit * pi;
    return out;
}

/// exp_phi(v) = sum_j e_j v^{q^j} for a variable-free series v, to precision cap.
inline TateSeries exp_phi_series(const GenusZeroContext& G, const PlaceSeries& P, const TateSeries& v, long long cap,
                                 int jmax = 12) {
    long long vv = v.valuation();
    TateSeries acc(G.sctx, kExact);
    int stable = 0;
    for (int j = 0; j <= jmax; ++j) {
        HElem e = exp_coeff_closed(G, j);
        long long lower = h_valuation(G, e) + ipow(G.q, j) * vv;
        if (lower >= cap) {
            if (++stable >= 2) return acc.truncated(cap);
            continue;
        }
        stable = 0;
        acc = acc + (h_series(G, P, e, cap - ipow(G.q, j) * vv) * v.twist(j, cap - h_valuation(G, e))).truncated(cap);
    }
    return acc.truncated(cap);
}

}  // namespace drinfeld
