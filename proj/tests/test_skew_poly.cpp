#include <gtest/gtest.h>

#include "drinfeld/carlitz.hpp"
#include "drinfeld/skew_poly.hpp"

using namespace drinfeld;

namespace {
struct F4Ring {
    Field F = make_field(2, 2);
    FE a{F, F->generator()};
    FE one{F, 1};
    SkewPoly<FE> tau = SkewPoly<FE>::monomial(one, 1);
    SkewPoly<FE> c(const FE& x) const { return SkewPoly<FE>::constant(x); }
};
}  // namespace

TEST(SkewPoly, TauCommutesPastConstantsByFrobenius) {
    F4Ring R;
    EXPECT_EQ(R.tau * R.c(R.a), SkewPoly<FE>::monomial(R.a * R.a, 1));
    EXPECT_EQ(R.c(R.a) * R.tau, SkewPoly<FE>::monomial(R.a, 1));
}

TEST(SkewPoly, MultiplicationIsAssociative) {
    F4Ring R;
    auto x = R.c(R.a) + R.tau;
    auto y = R.c(R.one) + R.c(R.a) * R.tau * R.tau;
    auto z = R.tau + R.c(R.a * R.a);
    EXPECT_EQ((x * y) * z, x * (y * z));
}

TEST(SkewPoly, RightDivmodExamples) {
    F4Ring R;
    auto b = R.c(R.a) + R.tau;
    auto [q1, r1] = right_divmod(b, b);
    EXPECT_EQ(q1, R.c(R.one));
    EXPECT_TRUE(r1.is_zero());
    auto [q2, r2] = right_divmod(R.tau * R.tau, R.tau);
    EXPECT_EQ(q2, R.tau);
    EXPECT_TRUE(r2.is_zero());
    auto a = (R.tau * R.tau + R.c(R.a)) * b + R.c(R.one);
    auto [q3, r3] = right_divmod(a, b);
    EXPECT_EQ(q3 * b + r3, a);
    EXPECT_LT(r3.degree(), b.degree());
}

TEST(SkewPoly, RightGcd) {
    F4Ring R;
    auto b = R.c(R.a) + R.tau;
    EXPECT_EQ(right_gcd<FE>({R.c(R.one), b}), R.c(R.one));
    auto g = R.c(R.one) + R.c(R.a) * R.tau;
    auto h1 = (R.tau + R.c(R.one)) * g, h2 = (R.tau * R.tau + R.c(R.a)) * g;
    auto d = right_gcd<FE>({h1, h2});
    EXPECT_TRUE(d.lead().is_one());
    EXPECT_TRUE(right_divmod(g, d).second.is_zero());
    EXPECT_TRUE(right_divmod(h1, d).second.is_zero());
    EXPECT_THROW(right_gcd<FE>({}), std::invalid_argument);
}

TEST(SkewPoly, RightGcdOfSingleCarlitzOperatorIsMonic) {
    auto c = make_carlitz_context(3);
    FPoly a = fpoly(c.Fq, {1, 2, 2});   // sign 2
    auto Ca = carlitz_op(c, a);
    auto g = right_gcd<RatFn>({Ca});
    EXPECT_EQ(g, RatFn(FE::from_int(c.Fq, 2)).inv() * Ca);
}

TEST(SkewPoly, ConjugateTwist) {
    auto c = make_carlitz_context(2);
    auto Cx = carlitz_op(c, fpoly(c.Fq, {0, 1}));
    auto one = SkewPoly<RatFn>::constant(RatFn(FE(c.Fq, 1)));
    EXPECT_EQ(conjugate_twist(one, Cx), Cx);
    EXPECT_EQ(conjugate_twist(Cx, Cx), Cx);
    auto Cx2 = carlitz_op(c, fpoly(c.Fq, {1, 1, 1}));
    EXPECT_EQ(conjugate_twist(Cx2, Cx), Cx);
}
