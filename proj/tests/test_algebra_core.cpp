#include <gtest/gtest.h>

#include <set>

#include "drinfeld/field.hpp"
#include "drinfeld/linalg.hpp"
#include "drinfeld/locpoly.hpp"
#include "drinfeld/poly.hpp"
#include "drinfeld/ratfn.hpp"

using namespace drinfeld;

TEST(Field, PrimeFieldHasTwoElements) {
    Field F = make_field(2, 1);
    EXPECT_EQ(F->size(), 2u);
    EXPECT_EQ(all_elements(F).size(), 2u);
}

TEST(Field, F9MultiplicativeOrderEight) {
    Field F = make_field(3, 2);
    EXPECT_EQ(F->size(), 9u);
    for (const FE& a : all_elements(F)) {
        if (a.is_zero()) continue;
        EXPECT_TRUE(a.pow(8).is_one());
    }
    FE g(F, F->generator());
    std::set<std::uint32_t> seen;
    FE acc(F, 1);
    for (int i = 0; i < 8; ++i, acc *= g) seen.insert(acc.value());
    EXPECT_EQ(seen.size(), 8u);
}

TEST(Field, F4CubesAreOne) {
    Field F = make_field(2, 2);
    int nonzero = 0;
    for (const FE& a : all_elements(F))
        if (!a.is_zero()) {
            ++nonzero;
            EXPECT_TRUE((a * a * a).is_one());
        }
    EXPECT_EQ(nonzero, 3);
}

TEST(Field, RejectsBadInput) {
    EXPECT_THROW(make_field(4, 1), std::invalid_argument);
    EXPECT_THROW(make_field(2, 0), std::invalid_argument);
    EXPECT_THROW(make_field(2, 17), std::invalid_argument);
}

TEST(Field, FrobeniusFixesOneAndIsMultiplicative) {
    Field F = make_field(3, 2);
    for (int k = 0; k < 4; ++k) EXPECT_TRUE(frobenius(FE(F, 1), k).is_one());
    for (const FE& a : all_elements(F))
        for (const FE& b : all_elements(F)) {
            EXPECT_EQ(frobenius(a * b, 1), frobenius(a, 1) * frobenius(b, 1));
            EXPECT_EQ(frobenius(a + b, 1), frobenius(a, 1) + frobenius(b, 1));
        }
    for (const FE& a : all_elements(F)) EXPECT_EQ(frobenius(a, 2), a);
}

TEST(Field, InverseAndDivision) {
    Field F = make_field(5, 2);
    for (const FE& a : all_elements(F))
        if (!a.is_zero()) EXPECT_TRUE((a * a.inv()).is_one());
}

TEST(Roots, XSquaredPlusXPlusOneOverF2) {
    Field F2 = make_field(2, 1);
    Field ext;
    auto r = roots_in_extension(fpoly(F2, {1, 1, 1}), F2, 2, ext);
    ASSERT_EQ(r.size(), 2u);
    for (const FE& a : r) {
        EXPECT_FALSE(a.is_zero());
        EXPECT_FALSE(a.is_one());
        EXPECT_TRUE((a * a + a + FE(ext, 1)).is_zero());
    }
}

TEST(Roots, LinearOverF3) {
    Field F3 = make_field(3, 1);
    Field ext;
    auto r = roots_in_extension(fpoly(F3, {-1, 1}), F3, 1, ext);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_TRUE(r[0].is_one());
}

TEST(Roots, XSquaredPlusOneOverF3AreConjugate) {
    Field F3 = make_field(3, 1);
    Field ext;
    auto r = roots_in_extension(fpoly(F3, {1, 0, 1}), F3, 2, ext);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], -r[1]);
    EXPECT_EQ(r[0].pow(3), r[1]);
}

TEST(Poly, DivmodAndGcd) {
    Field F = make_field(3, 1);
    FPoly a = fpoly(F, {1, 0, 1}) * fpoly(F, {1, 1});
    FPoly b = fpoly(F, {1, 1}) * fpoly(F, {2, 1});
    EXPECT_EQ(gcd(a, b), fpoly(F, {1, 1}));
    auto [q, r] = divmod(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
    EXPECT_THROW(exact_div(a, fpoly(F, {2, 1})), std::domain_error);
}

TEST(Poly, Irreducibility) {
    Field F2 = make_field(2, 1), F3 = make_field(3, 1);
    EXPECT_TRUE(is_irreducible(fpoly(F2, {1, 1, 1}), F2));
    EXPECT_FALSE(is_irreducible(fpoly(F2, {1, 0, 1}), F2));
    EXPECT_TRUE(is_irreducible(fpoly(F3, {1, 0, 1}), F3));
    EXPECT_TRUE(is_irreducible(fpoly(F2, {1, 1, 0, 1}), F2));
}

TEST(RatFn, FieldOperations) {
    Field F = make_field(2, 1);
    RatFn x = RatFn::x(F), one(FE(F, 1));
    RatFn a = one / (x + one), b = x / (x * x + x + one);
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ(a * (x + one), one);
    EXPECT_TRUE((x.frob(1) - x * x).is_zero());
}

TEST(LinAlg, RankNullspaceSolve) {
    Field F = make_field(3, 1);
    auto e = [&](long long k) { return FE::from_int(F, k); };
    Matrix m{{e(1), e(2), e(0)}, {e(2), e(1), e(0)}, {e(0), e(0), e(1)}};
    EXPECT_EQ(rank(m, F.get()), 2);
    auto ns = nullspace(m, 3, F.get());
    ASSERT_EQ(ns.size(), 1u);
    for (const auto& row : m) {
        FE acc(F, 0);
        for (int j = 0; j < 3; ++j) acc += row[j] * ns[0][j];
        EXPECT_TRUE(acc.is_zero());
    }
    auto sol = solve(m, {e(1), e(2), e(1)}, 3, F.get());
    ASSERT_TRUE(sol.has_value());
    EXPECT_FALSE(solve(m, {e(1), e(1), e(0)}, 3, F.get()).has_value());
}

TEST(LinAlg, NullspaceModP) {
    std::vector<std::vector<std::uint8_t>> m{{1, 1, 0}, {0, 1, 1}};
    auto ns = nullspace_mod_p(m, 3, 2);
    ASSERT_EQ(ns.size(), 1u);
    EXPECT_EQ(ns[0], (std::vector<int>{1, 1, 1}));
}

TEST(LocPoly, AtomInverseTimesAtomIsOne) {
    Field F = make_field(2, 2);
    FE z(F, F->generator());
    auto vs = make_varspace({"z"}, F, {z, z * z});
    Coef a = Coef::atom(vs, 0, 1), ai = Coef::atom_inv(vs, 0, 1);
    EXPECT_EQ(a * ai, Coef::constant(vs, FE(F, 1)));
}
