#pragma once

/**
 * @file suites.hpp
 * @brief Named identity suites. Each returns one line per identity with its
 * residual valuation and the precision it must reach.
 */

#include <algorithm>
#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "drinfeld/carlitz.hpp"
#include "drinfeld/genus0.hpp"
#include "drinfeld/lseries.hpp"
#include "drinfeld/tate_series.hpp"

namespace drinfeld {

enum class Outcome { Pass, Fail, Short };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        default: return "short";
    }
}

struct CheckLine {
    std::string identity;
    long long residual = 0;   // valuation of lhs - rhs, or the precision if it vanishes
    long long required = 0;
    Outcome outcome = Outcome::Pass;
    std::string detail;
};

struct SuiteReport {
    std::string name;
    std::vector<CheckLine> lines;
    double seconds = 0;

    Outcome overall() const {
        bool shortp = false;
        for (const auto& l : lines) {
            if (l.outcome == Outcome::Fail) return Outcome::Fail;
            if (l.outcome == Outcome::Short) shortp = true;
        }
        return shortp ? Outcome::Short : Outcome::Pass;
    }
    void exact(const std::string& identity, bool ok, const std::string& detail = {}) {
        lines.push_back({identity, 0, 0, ok ? Outcome::Pass : Outcome::Fail, detail});
    }
    /// A residual series must vanish below `required`; vanishing only to a lower precision is Short.
    void residual(const std::string& identity, const TateSeries& r, long long required, const std::string& detail = {}) {
        CheckLine l{identity, r.valuation_or_prec(), required, Outcome::Pass, detail};
        if (l.residual < required) l.outcome = (l.residual >= r.prec()) ? Outcome::Short : Outcome::Fail;
        lines.push_back(std::move(l));
    }
};

namespace detail {
inline SuiteReport timed(const std::string& name, const std::function<void(SuiteReport&)>& body) {
    SuiteReport rep;
    rep.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(rep);
    } catch (const PrecisionError& e) {
        rep.lines.push_back({"precision", 0, 0, Outcome::Short, e.what()});
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}
inline int pinf_degree(const std::vector<long long>& pinf) { return static_cast<int>(pinf.size()) - 1; }
}  // namespace detail

/// tau(omega) = f omega; for d_inf = 1 in theta-coordinates, otherwise at the place with U as well.
inline SuiteReport suite_omega_fixedpoint(int q, const std::vector<long long>& pinf, long long N) {
    return detail::timed("omega-fixedpoint", [&](SuiteReport& rep) {
        if (detail::pinf_degree(pinf) <= 1) {
            auto ctx = theta_series_context(q, {"t"});
            TateSeries w = omega_carlitz(ctx, N + q);
            TateSeries r = w.twist(1, N) - ((TateSeries::var(ctx, 0) - theta_series(ctx)) * w).truncated(N);
            rep.residual("tau(omega) = (t - theta) omega", r.truncated(N), N);
            return;
        }
        auto G = make_genus0_context(q, pinf);
        PlaceSeries P = place_series(G, N + 4 * G.N + 16);
        TateSeries U = special_U(G, P, N + 4);
        TateSeries z = TateSeries::var(G.sctx, 0);
        TateSeries rU = U.twist(1, N + 4) - (Coef::atom_inv(G.sctx->vs, 0, 0) * (z - P.X) * U).truncated(N + 4);
        rep.residual("tau(U) = (z - x)/(z - zeta) U", rU.truncated(N), N);
        TateSeries w = omega_general(G, P, N + 4);
        TateSeries f = f_series(G, P, N + 8);
        TateSeries rw = w.twist(1, N + 4) - (f * w).truncated(N + 4);
        rep.residual("tau(omega) = f omega", rw.truncated(N), N);
        std::vector<std::pair<int, int>> allowed{{0, 0}, {0, 1 % G.d}};
        rep.exact("U has denominators in {z - zeta, z - zeta^q}", integrality_check(U, allowed).ok);
        rep.exact("omega has denominators in {z - zeta, z - zeta^q}", integrality_check(w, allowed).ok);
        rep.exact("sgn(omega u^{q^{d-1}}) = 1", paper_sgn(w.shifted(g_valuation(G))).is_one());
    });
}

/// g^{q^d - 1} = prod_k (zeta^{q^j} - x^{q^k}) for the untwisted and twisted sign; C_P(lambda) = 0.
inline SuiteReport suite_gauss(int q, const std::vector<long long>& pinf, long long N) {
    return detail::timed("gauss", [&](SuiteReport& rep) {
        auto cc = make_carlitz_context(q, pinf);
        auto ctx = place_series_context(cc);
        TateSeries lam = torsion_root(ctx, cc, N);
        TateSeries X = x_series(ctx, cc, N + cc.N());
        rep.residual("C_P(lambda) = 0", carlitz_apply(cc, cc.pinf, lam, X, N).truncated(N), N);
        SgnLead ll = sgn_lead(lam);
        rep.exact("lambda = u + O(u^2)", ll.uexp == 1 && ll.lead.is_constant() && ll.lead.constant_term().is_one());
        std::vector<int> twists{0};
        if (cc.d > 1) twists.push_back(cc.d - 1);
        for (int j : twists) {
            TateSeries g = gauss_sum(ctx, cc, N, j);
            TateSeries r = g.pow(cc.N(), N) - gauss_norm_target(ctx, cc, N, j);
            std::string tag = "twist " + std::to_string(j);
            rep.residual("g^{q^d - 1} = prod_k (zeta^{q^j} - x^{q^k}), " + tag, r.truncated(N), N);
            SgnLead gl = sgn_lead(g);
            const std::string info = "v(g) = " + std::to_string(gl.uexp) + ", lead " + to_string(gl.lead);
            if (j == 0)
                rep.exact("g = u + O(u^2)", gl.uexp == 1 && gl.lead.is_constant() && gl.lead.constant_term().is_one(), info);
            else
                rep.exact("v(g) = q^j, " + tag, gl.uexp == ipow(q, j) && gl.lead.is_constant(), info);
        }
    });
}

/// The u_I identities on all ideals of degree <= D (products to Dprod), the Sht orbit and e_i(phi).
inline SuiteReport suite_lemma(int q, const std::vector<long long>& pinf, int D, int Dprod, int imax = 5) {
    return detail::timed("lemma-uI", [&](SuiteReport& rep) {
        auto G = make_genus0_context(q, pinf);
        LemmaReport L = lemma_suite(G, D, Dprod);
        const std::string n = std::to_string(L.checked) + " ideals; " + L.failure;
        rep.exact("u_I(xi) = psi(I)", L.eval_psi, n);
        rep.exact("sigma_I(f) u_I = f tau(u_I)", L.twist, n);
        rep.exact("u_{IJ} = sigma_I(u_J) u_I", L.product, n);
        rep.exact("fast u_I, psi(I) agree with the right gcd", L.fast, n);
        std::vector<RatFn> samples{theta_K(G), make_A(G, FPoly::monomial(FE(G.Fq, 1), 1), 1)};
        ShtOrbitReport S = sht_orbit(G, samples);
        rep.exact("Sht = {sigma(f)} has |G| elements", S.distinct == S.group_order,
                  std::to_string(S.distinct) + " of " + std::to_string(S.group_order));
        rep.exact("sigma(f) is the shtuka of sigma(phi)", S.conjugates_ok, S.failure);
        bool agree = true;
        std::string why;
        std::vector<HElem> e;
        try {
            e = exp_coeffs_phi(G, imax);
        } catch (const std::logic_error& ex) {
            agree = false;
            why = ex.what();
        }
        rep.exact("e_i(phi) = 1/(f...f^{(i-1)})(xi^{(i)}) equals the closed form, i <= " + std::to_string(imax), agree, why);
        if (agree) rep.exact("exp_phi a = phi_a exp_phi mod tau^{i+1}", check_exp_phi(G, e, theta_K(G)));
    });
}

/// (t - theta) L omega / pi~ reconstructs to a constant in F_q^x.
inline SuiteReport suite_pellarin(int q, int D) {
    return detail::timed("pellarin", [&](SuiteReport& rep) {
        PellarinReport P = pellarin_rationality(q, D);
        const auto& r = P.recon;
        if (r.status == ReconResult::Status::Underdetermined) {
            rep.lines.push_back({"(t - theta) L omega / pi~ in F_q^x", 0, P.L.certified, Outcome::Short, "underdetermined"});
            return;
        }
        CheckLine l{"(t - theta) L omega / pi~ in F_q^x", r.residual_valuation, r.certified, Outcome::Pass, r.expr};
        if (!P.unit || r.residual_valuation < r.certified) l.outcome = Outcome::Fail;
        rep.lines.push_back(l);
    });
}

/// exp_{phi_s}(L_s(1)) lies in F_q[theta, t_1..t_s] on every certified coefficient.
inline SuiteReport suite_log_alg(int q, int s, int D, long long N) {
    return detail::timed("log-alg", [&](SuiteReport& rep) {
        LogAlgReport L = log_algebraicity_check(q, s, D, N);
        CheckLine l{"exp_{phi_s}(L_s) in F_q[theta, t]", L.certified, L.certified, Outcome::Pass,
                    std::to_string(L.checked) + " nonzero terms below the certified precision; value " + L.polynomial};
        if (L.status == LogAlgReport::Status::Failed) {
            l.outcome = Outcome::Fail;
            l.residual = L.first_failure;
        } else if (L.status == LogAlgReport::Status::Insufficient) {
            l.outcome = Outcome::Short;
        }
        rep.lines.push_back(l);
    });
}

/// Partial sums of sum_I 1/psi(I)^n / pi~^n: tails increase and the reconstruction is stable.
inline SuiteReport suite_special_values(int q, const std::vector<long long>& pinf, const std::vector<int>& Ds, long long N) {
    return detail::timed("special-values", [&](SuiteReport& rep) {
        auto G = make_genus0_context(q, pinf);
        SpecialValueReport S = special_value_sum(G, static_cast<int>(G.N), Ds, N);
        std::string tails;
        for (const auto& st : S.steps) tails += (tails.empty() ? "" : ", ") + std::to_string(st.D) + ":" + std::to_string(st.tail_valuation);
        rep.exact("tail valuations strictly increase with D", S.tails_increasing, tails);
        rep.exact("tails respect the linear bound", S.bound_consistent);
        rep.exact("per-degree minimum valuations are monotone", S.tail_monotone);
        rep.exact("reconstruction report stable across certified D", S.recon_stable);
    });
}

}  // namespace drinfeld
