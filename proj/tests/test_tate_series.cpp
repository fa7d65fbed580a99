#include <gtest/gtest.h>

#include "drinfeld/carlitz.hpp"
#include "drinfeld/tate_series.hpp"

using namespace drinfeld;

namespace {
TateSeries u(const SeriesCtxPtr& ctx, long long e) { return TateSeries::u_power(ctx, e, FE(ctx->F, 1)); }
}  // namespace

TEST(TateSeries, TwistOfUIsUToTheQ) {
    for (int q : {2, 3, 5}) {
        auto ctx = theta_series_context(q, {});
        EXPECT_TRUE((u(ctx, 1).twist(1) - u(ctx, q)).is_zero());
        EXPECT_TRUE((u(ctx, 1).twist(2) - u(ctx, q * q)).is_zero());
    }
}

TEST(TateSeries, TwistFixesVariablesAndRaisesCoefficients) {
    auto ctx = theta_series_context(3, {"t"});
    TateSeries t = TateSeries::var(ctx, 0);
    TateSeries s = (t + u(ctx, 1)) * (t - u(ctx, 2));
    TateSeries lhs = s.twist(1);
    TateSeries rhs = (t + u(ctx, 3)) * (t - u(ctx, 6));
    EXPECT_TRUE((lhs - rhs).is_zero());
}

TEST(TateSeries, InfiniteProductStopsAtPrecision) {
    auto ctx = theta_series_context(2, {});
    TateSeries p = inf_product(ctx, [&](int i) { return TateSeries::one(ctx) + u(ctx, 1LL << i); }, 8);
    EXPECT_EQ(p.prec(), 8);
    for (long long e = 0; e < 8; ++e) EXPECT_FALSE(p.coeff(e).is_zero()) << e;
    TateSeries triv = inf_product(ctx, [&](int) { return TateSeries::one(ctx) + u(ctx, 20); }, 8);
    EXPECT_TRUE((triv - TateSeries::one(ctx)).truncated(8).is_zero());
}

TEST(TateSeries, HenselRootSquareRoot) {
    auto ctx = theta_series_context(3, {});
    TateSeries one = TateSeries::one(ctx);
    TateSeries c = one + u(ctx, 2);
    // X^2 - c, low coefficient first
    TateSeries r = hensel_root({TateSeries(ctx, kExact) - c, TateSeries(ctx, kExact), one}, one, 40);
    EXPECT_TRUE(vanishes_to((r * r - c).truncated(40), 40));
    EXPECT_EQ(r.coeff(2), Coef::constant(ctx->vs, FE::from_int(ctx->F, 2)));
    TateSeries lin = hensel_root({TateSeries(ctx, kExact) - c, one}, one, 40);
    EXPECT_TRUE((lin - c).truncated(40).is_zero());
}

TEST(TateSeries, DivisionAndPrecision) {
    auto ctx = theta_series_context(2, {"t"});
    TateSeries a = TateSeries::one(ctx) + u(ctx, 1) + TateSeries::var(ctx, 0) * u(ctx, 3);
    TateSeries inv = a.inv(30);
    EXPECT_TRUE(vanishes_to((a * inv - TateSeries::one(ctx)).truncated(30), 30));
    TateSeries b = sdiv(u(ctx, 5), a, 30);
    EXPECT_EQ(b.valuation(), 5);
}

TEST(TateSeries, SgnLead) {
    auto ctx = theta_series_context(3, {});
    SgnLead s = sgn_lead(TateSeries::one(ctx) + u(ctx, 1));
    EXPECT_EQ(s.uexp, 0);
    EXPECT_TRUE(s.lead.is_constant() && s.lead.constant_term().is_one());
    // u^{q-1} = -pi: valuation 1 in pi-units, leading coefficient 1 of u^{q-1}
    SgnLead m = sgn_lead(u(ctx, 2));
    EXPECT_EQ(m.num, 1);
    EXPECT_EQ(m.den, 1);
    EXPECT_TRUE(m.lead.constant_term().is_one());
}

TEST(TateSeries, IntegralityCheck) {
    auto G = make_carlitz_context(2, {1, 1, 1});
    auto ctx = place_series_context(G, {"z"});
    TateSeries z = TateSeries::var(ctx, 0);
    TateSeries polyc = z * u(ctx, 1) + z * z * u(ctx, 3);
    EXPECT_TRUE(integrality_check(polyc, {}).ok);
    TateSeries bad = polyc + TateSeries::monomial(ctx, Coef::atom_inv(ctx->vs, 0, 1), 4);
    auto rep = integrality_check(bad, {{0, 0}});
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.witness, 4);
    EXPECT_TRUE(integrality_check(bad, {{0, 1}}).ok);
}

TEST(TateSeries, JsonRoundTrip) {
    auto ctx = theta_series_context(3, {"t"});
    TateSeries s = (TateSeries::var(ctx, 0) * u(ctx, -2) + u(ctx, 1)).truncated(17);
    TateSeries back = series_from_json(to_json(s));
    EXPECT_EQ(back.prec(), 17);
    EXPECT_EQ(to_json(back), to_json(s));
}

TEST(TateSeries, UnitRatio) {
    auto ctx = theta_series_context(3, {});
    TateSeries a = (TateSeries::one(ctx) + u(ctx, 1)).truncated(20);
    auto r = unit_ratio(FE::from_int(ctx->F, 2) * a, a);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->value(), 2u);
    EXPECT_FALSE(unit_ratio(a, a + u(ctx, 3)).has_value());
}
