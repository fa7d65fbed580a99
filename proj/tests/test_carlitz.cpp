#include <gtest/gtest.h>

#include "drinfeld/carlitz.hpp"

using namespace drinfeld;

TEST(Carlitz, OperatorOnConstantsAndX) {
    auto c = make_carlitz_context(3);
    auto C2 = carlitz_op(c, fpoly(c.Fq, {2}));
    ASSERT_EQ(C2.degree(), 0);
    EXPECT_EQ(C2.coeff(0), RatFn(FE::from_int(c.Fq, 2)));
    auto Cx = carlitz_op(c, fpoly(c.Fq, {0, 1}));
    ASSERT_EQ(Cx.degree(), 1);
    EXPECT_EQ(Cx.coeff(0), rat_x(c));
    EXPECT_EQ(Cx.coeff(1), RatFn(FE(c.Fq, 1)));
}

TEST(Carlitz, XSquaredOverF3) {
    auto c = make_carlitz_context(3);
    auto C = carlitz_op(c, fpoly(c.Fq, {0, 0, 1}));
    RatFn x = rat_x(c);
    ASSERT_EQ(C.degree(), 2);
    EXPECT_EQ(C.coeff(0), x * x);
    EXPECT_EQ(C.coeff(1), x * x * x + x);
    EXPECT_EQ(C.coeff(2), RatFn(FE(c.Fq, 1)));
    auto Cx = carlitz_op(c, fpoly(c.Fq, {0, 1}));
    EXPECT_EQ(C, Cx * Cx);
}

TEST(Carlitz, RingHomomorphismOnSamples) {
    auto c = make_carlitz_context(2);
    FPoly a = fpoly(c.Fq, {1, 1, 0, 1}), b = fpoly(c.Fq, {0, 1, 1});
    EXPECT_EQ(carlitz_op(c, a + b), carlitz_op(c, a) + carlitz_op(c, b));
    EXPECT_EQ(carlitz_op(c, a * b), carlitz_op(c, a) * carlitz_op(c, b));
}

TEST(Carlitz, ExponentialCoefficients) {
    for (int q : {2, 3}) {
        auto c = make_carlitz_context(q);
        auto d = carlitz_exp_coeffs(c, 6);
        RatFn x = rat_x(c), one(FE(c.Fq, 1));
        EXPECT_EQ(d.e[0], one);
        EXPECT_EQ(d.e[1], one / (x.frob(1) - x));
        for (int i = 1; i <= 4; ++i) {
            RatFn prod = one;
            for (int j = 0; j < i; ++j) prod = prod * (x.frob(i) - x.frob(j));
            EXPECT_EQ(d.e[i], one / prod);
        }
        EXPECT_TRUE(check_exp_log_inverse(d));
    }
    auto c2 = make_carlitz_context(2);
    EXPECT_TRUE(check_exp_functional_equation(c2, carlitz_exp_coeffs(c2, 6), fpoly(c2.Fq, {1, 0, 1})));
    EXPECT_THROW(carlitz_exp_coeffs(c2, -1), std::invalid_argument);
}

TEST(Carlitz, TorsionRootDegreeOne) {
    for (int q : {2, 3}) {
        auto c = make_carlitz_context(q, {0, 1});
        auto ctx = place_series_context(c);
        TateSeries lam = torsion_root(ctx, c, 40);
        TateSeries X = x_series(ctx, c, 80);
        // lambda^{q-1} = -x when P_inf = x
        EXPECT_TRUE(vanishes_to((lam.pow(q - 1, 40) + X).truncated(40), 40));
        SgnLead s = sgn_lead(lam);
        EXPECT_EQ(s.uexp, 1);
        EXPECT_TRUE(s.lead.constant_term().is_one());
    }
}

TEST(Carlitz, TorsionRootAndGaussSumDegreeTwo) {
    auto c = make_carlitz_context(2, {1, 1, 1});
    auto ctx = place_series_context(c);
    const long long N = 64;
    TateSeries lam = torsion_root(ctx, c, N);
    TateSeries res = carlitz_apply(c, c.pinf, lam, x_series(ctx, c, N + c.N()), N);
    EXPECT_TRUE(vanishes_to(res.truncated(N), N));
    TateSeries g = gauss_sum(ctx, c, N);
    EXPECT_TRUE(vanishes_to((g.pow(3, N) - gauss_norm_target(ctx, c, N)).truncated(N), N));
    SgnLead s = sgn_lead(g);
    EXPECT_EQ(s.uexp, 1);
    EXPECT_TRUE(s.lead.constant_term().is_one());
}

TEST(Carlitz, OmegaFixedPointAndValuation) {
    for (int q : {2, 3, 5}) {
        auto ctx = theta_series_context(q, {"t"});
        const long long N = 100;
        TateSeries w = omega_carlitz(ctx, N + q);
        TateSeries r = w.twist(1, N) - ((TateSeries::var(ctx, 0) - theta_series(ctx)) * w).truncated(N);
        EXPECT_TRUE(vanishes_to(r.truncated(N), N)) << q;
        SgnLead s = sgn_lead(w);
        EXPECT_EQ(s.num, -1);
        EXPECT_EQ(s.den, q - 1);
        EXPECT_TRUE(integrality_check(w, {}).ok);
    }
}

TEST(Carlitz, PiTildeValuationAndStability) {
    for (int q : {2, 3}) {
        auto ctx = theta_series_context(q, {});
        TateSeries a = pi_tilde_product(ctx, 60), b = pi_tilde_product(ctx, 120);
        SgnLead s = sgn_lead(a);
        EXPECT_EQ(s.num * (q - 1), -q * s.den);
        EXPECT_TRUE((a - b.truncated(60)).truncated(60).is_zero());
    }
}

TEST(Carlitz, OmegaAtThetaRecoversPiTilde) {
    const int q = 3;
    auto ctx = theta_series_context(q, {"t"});
    TateSeries w = omega_carlitz(ctx, 40);
    TateSeries th = theta_series(ctx);
    TateSeries one = TateSeries::one(ctx);
    TateSeries wp = (one - TateSeries::var(ctx, 0) * theta_inv_power(ctx, 1)) * w;
    TateSeries ev = eval_var(wp, 0, th, -1, q * (q - 1));
    TateSeries pt = pi_tilde_product(ctx, 30);
    auto r = unit_ratio(sdiv(-th * ev, pt, 20), TateSeries::one(ctx));
    ASSERT_TRUE(r.has_value());
}
