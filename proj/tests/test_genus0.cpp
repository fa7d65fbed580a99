#include <gtest/gtest.h>

#include "drinfeld/genus0.hpp"

using namespace drinfeld;

TEST(Genus0, ContextDegreeOne) {
    auto G = make_genus0_context(2, {1, 1});
    EXPECT_EQ(G.d, 1);
    EXPECT_TRUE(G.zeta.is_one());
    EXPECT_EQ(galois_group(G, sigma_P(G)).size(), 1u);
}

TEST(Genus0, ContextDegreeTwo) {
    auto G = make_genus0_context(2, {1, 1, 1});
    EXPECT_EQ(G.d, 2);
    EXPECT_FALSE(G.zeta.is_zero());
    EXPECT_FALSE(G.zeta.is_one());
    EXPECT_EQ(G.N, 3);
    // |G| = |Pic| * (q^d - 1)/(q - 1)
    EXPECT_EQ(galois_group(G, sigma_P(G)).size(), static_cast<std::size_t>(G.d * G.M));
    EXPECT_EQ(galois_pow(G, sigma_P(G), G.d), galois_identity(G));
}

TEST(Genus0, KummerModulusQ3) {
    auto G = make_genus0_context(3, {1, 0, 1});
    // twisted modulus prod_k (zeta^{q^{d-1}} - x^{q^k})
    RatFn ct = (rconst(G, zeta_pow(G, 1)) - G.x) * (rconst(G, zeta_pow(G, 1)) - x_pow(G, 1));
    EXPECT_EQ(G.kctx->c, ct);
}

TEST(Genus0, RejectsReduciblePlace) { EXPECT_ANY_THROW(make_genus0_context(2, {1, 0, 1})); }

TEST(Genus0, DrinfeldCoefficients) {
    auto G = make_genus0_context(2, {1, 1, 1});
    PhiPoly c = drinfeld_coeffs(G, rconst(G, FE(G.Finf, 1)));
    EXPECT_EQ(c.degree(), 0);
    PhiPoly phi = drinfeld_coeffs(G, theta_K(G));
    EXPECT_EQ(phi.degree(), 2);
    EXPECT_EQ(phi.lead(), h_one(G));
    EXPECT_THROW(drinfeld_coeffs(G, G.x), std::exception);

    auto G1 = make_genus0_context(3, {0, 1});
    PhiPoly C = drinfeld_coeffs(G1, theta_K(G1));
    ASSERT_EQ(C.degree(), 1);
    EXPECT_EQ(C.coeff(0), h_const(G1, theta_K(G1)));
    EXPECT_EQ(C.coeff(1), h_one(G1));
}

TEST(Genus0, ExponentialCoefficientsAgree) {
    for (auto [q, pinf] : std::vector<std::pair<int, std::vector<long long>>>{{2, {0, 1}}, {3, {0, 1}}, {2, {1, 1, 1}}}) {
        auto G = make_genus0_context(q, pinf);
        EXPECT_EQ(exp_coeff_eval(G, 0), h_one(G));
        for (int i = 0; i <= 4; ++i) EXPECT_EQ(exp_coeff_eval(G, i), exp_coeff_closed(G, i)) << q << " " << i;
        auto e = exp_coeffs_phi(G, 4);
        EXPECT_TRUE(check_exp_phi(G, e, theta_K(G)));
    }
    auto G = make_genus0_context(3, {0, 1});
    RatFn th = theta_K(G);
    EXPECT_EQ(exp_coeff_eval(G, 1), h_const(G, RatFn(FE(G.Finf, 1)) / (th.frob(1) - th)));
}

TEST(Genus0, IdealEnumeration) {
    auto G = make_genus0_context(2, {1, 1, 1});
    EXPECT_EQ(enumerate_ideals(G, 0).size(), 1u);
    auto deg1 = enumerate_ideals(G, 1);
    EXPECT_EQ(deg1.size(), 4u);
    EXPECT_EQ(ideal_count_formula(2, 2, 1), 3);
    long long cumulative = 0;
    for (int n = 0; n <= 4; ++n) {
        cumulative += ideal_count_formula(2, 2, n);
        EXPECT_EQ(static_cast<long long>(enumerate_ideals(G, n).size()), cumulative);
    }
    // P^d is principal, generated by 1/P_inf
    Ideal Pd{FPoly::constant(FE(G.Fq, 1)), G.d};
    EXPECT_EQ(principal_ideal(G, ideal_a(G, Pd)), Pd);
}

TEST(Genus0, IdealSkewTrivialAndPrincipal) {
    auto G = make_genus0_context(2, {1, 1, 1});
    IdealSkew A = ideal_skew(G, unit_ideal(G));
    EXPECT_EQ(A.phi.degree(), 0);
    EXPECT_EQ(A.psi, h_one(G));
    EXPECT_EQ(u_ideal(G, unit_ideal(G)), ZElem(G.kctx, zc(G, RatFn(FE(G.Finf, 1))), 0));
    RatFn a = theta_K(G);
    Ideal I = principal_ideal(G, a);
    IdealSkew S = ideal_skew(G, I);
    EXPECT_EQ(S.phi, drinfeld_coeffs(G, a));
    EXPECT_EQ(S.psi, h_const(G, a));
    EXPECT_EQ(u_ideal(G, I), u_principal(G, a));
    EXPECT_EQ(artin(G, I, sigma_P(G)), galois_identity(G));
    IdealSkew P = ideal_skew(G, prime_P(G));
    EXPECT_EQ(P.phi.degree(), 1);
}

TEST(Genus0, LemmaIdentities) {
    for (auto [q, pinf] : std::vector<std::pair<int, std::vector<long long>>>{{2, {1, 1, 1}}, {3, {1, 0, 1}}, {2, {1, 1}}}) {
        auto G = make_genus0_context(q, pinf);
        LemmaReport L = lemma_suite(G, 2, 3);
        EXPECT_TRUE(L.eval_psi && L.twist && L.product && L.fast) << L.failure;
        EXPECT_GT(L.checked, 0);
    }
}

TEST(Genus0, FastIdealTableMatchesRightGcd) {
    auto G = make_genus0_context(2, {1, 1, 1});
    auto sP = sigma_P(G);
    for (const auto& r : ideal_table(G, 3, sP)) {
        EXPECT_EQ(r.u, u_ideal(G, r.I)) << ideal_string(r.I);
        EXPECT_EQ(r.sigma, artin(G, r.I, sP)) << ideal_string(r.I);
        EXPECT_EQ(r.psi, ideal_skew(G, r.I).psi) << ideal_string(r.I);
    }
}

TEST(Genus0, ShtukaOrbit) {
    auto G = make_genus0_context(2, {1, 1, 1});
    ShtOrbitReport S = sht_orbit(G, {theta_K(G), make_A(G, fpoly(G.Fq, {1, 1}), 1)});
    EXPECT_EQ(S.distinct, S.group_order);
    EXPECT_TRUE(S.conjugates_ok) << S.failure;
}

TEST(Genus0, SpecialFunctionDegreeTwo) {
    auto G = make_genus0_context(2, {1, 1, 1});
    const long long N = 64;
    PlaceSeries P = place_series(G, N + 4 * G.N + 16);
    TateSeries U = special_U(G, P, N + 4);
    TateSeries w = omega_general(G, P, N + 4);
    TateSeries f = f_series(G, P, N + 8);
    EXPECT_TRUE(vanishes_to((w.twist(1, N + 4) - (f * w).truncated(N + 4)).truncated(N), N));
    EXPECT_TRUE(paper_sgn(w.shifted(g_valuation(G))).is_one());
    EXPECT_TRUE(integrality_check(U, {{0, 0}, {0, 1}}).ok);
    // omega = U / g
    EXPECT_TRUE(vanishes_to((w * P.g - U).truncated(N), N));
}

TEST(Genus0, PiTildeDegreeOneMatchesProduct) {
    for (int q : {2, 3}) {
        auto G = make_genus0_context(q, {0, 1});
        const long long n = 60;
        auto pt = pi_tilde_general(G, place_series(G, n + 8 * G.N + 16), n);
        EXPECT_EQ(pt.pi.valuation(), -q);
        EXPECT_TRUE(paper_sgn(pt.pi.shifted(g_valuation(G))).is_one());
        auto pp = pi_tilde_product(theta_series_context(q, {}), n);
        EXPECT_TRUE(unit_ratio(pt.pi, pp).has_value());
    }
}
