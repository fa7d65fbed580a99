#pragma once

/**
 * @file lseries.hpp
 * @brief Twisted L-series, the deformed exponential exp_{phi_s}, kernel search,
 * rational reconstruction from series, and special-value sums.
 *
 * Over F_q[theta] (infinity of degree 1) the series live in the theta-coordinate
 * context of carlitz.hpp, with variables t_1..t_s. Over a general genus-zero
 * context they live in the place context with variables z_1..z_s.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/carlitz.hpp"
#include "drinfeld/genus0.hpp"
#include "drinfeld/linalg.hpp"
#include "drinfeld/tate_series.hpp"

namespace drinfeld {

inline std::vector<std::string> tvar_names(int s, const std::string& base = "t") {
    if (s < 1 || s > kMaxVars) throw std::invalid_argument("number of variables must be in [1, " + std::to_string(kMaxVars) + "]");
    if (s == 1) return {base};
    std::vector<std::string> out;
    for (int i = 1; i <= s; ++i) out.push_back(base + std::to_string(i));
    return out;
}

// ---------------------------------------------------------------------------
// Pellarin L-series over F_q[theta]

struct LSeries {
    TateSeries value;
    long long certified = 0;                  // u-precision guaranteed by the degree cutoff
    std::vector<long long> shell_valuation;   // valuation of the degree-n part, or `certified` if unseen
};

/**
 * sum over monic a, deg a <= D, of a(t_1)...a(t_s)/a. Terms of degree n have
 * valuation (q-1) n, so the sum is certified to u^{(q-1)(D+1)}.
 *
 * With w = u^{q-1} and theta = -1/w, 1/a = w^n / b(w) where
 * b(w) = sum_k a_k (-1)^k w^{n-k}; everything is accumulated as integers mod q.
 */
inline LSeries pellarin_L(const SeriesCtxPtr& ctx, int s, int D) {
    if (ctx->d != 1) throw std::invalid_argument("pellarin_L: needs the theta-coordinate context");
    if (s < 1 || s > ctx->vs->nvars()) throw std::invalid_argument("pellarin_L: context has too few variables");
    if (D < 0) throw std::invalid_argument("pellarin_L: degree cutoff must be >= 0");
    const int p = ctx->q;
    const int L = D + 1;                          // w-exponents 0..D
    std::size_t nidx = 1;
    for (int i = 0; i < s; ++i) nidx *= static_cast<std::size_t>(L);
    std::vector<long long> total(nidx * L, 0), shell(nidx * L, 0);
    LSeries out;
    out.certified = static_cast<long long>(p - 1) * L;

    std::vector<int> a, b, c;
    std::vector<std::pair<std::size_t, int>> mono;   // (multi-index, product of coefficients)
    for (int n = 0; n <= D; ++n) {
        std::fill(shell.begin(), shell.end(), 0);
        a.assign(static_cast<std::size_t>(n) + 1, 0);
        a[static_cast<std::size_t>(n)] = 1;
        const int len = L - n;
        while (true) {
            b.assign(static_cast<std::size_t>(n) + 1, 0);
            for (int m = 0; m <= n; ++m) {
                int k = n - m;
                int v = a[static_cast<std::size_t>(k)] % p;
                b[static_cast<std::size_t>(m)] = (k % 2 == 0) ? v : (p - v) % p;
            }
            // b_0 = (-1)^n is its own inverse.
            const int b0 = b[0];
            c.assign(static_cast<std::size_t>(len), 0);
            for (int k = 0; k < len; ++k) {
                long long acc = (k == 0) ? 1 : 0;
                for (int m = 1; m <= std::min(k, n); ++m) acc -= static_cast<long long>(b[static_cast<std::size_t>(m)]) * c[static_cast<std::size_t>(k - m)];
                acc %= p;
                if (acc < 0) acc += p;
                c[static_cast<std::size_t>(k)] = static_cast<int>(acc * b0 % p);
            }
            // monomials of a(t_1)...a(t_s)
            mono.assign(1, {0, 1});
            std::size_t stride = 1;
            for (int i = 0; i < s; ++i) {
                std::vector<std::pair<std::size_t, int>> next;
                for (const auto& [idx, co] : mono)
                    for (int j = 0; j <= n; ++j) {
                        int aj = a[static_cast<std::size_t>(j)];
                        if (aj == 0) continue;
                        next.push_back({idx + stride * static_cast<std::size_t>(j), co * aj % p});
                    }
                mono.swap(next);
                stride *= static_cast<std::size_t>(L);
            }
            for (const auto& [idx, co] : mono)
                for (int k = 0; k < len; ++k)
                    if (c[static_cast<std::size_t>(k)]) shell[idx * L + static_cast<std::size_t>(n + k)] += co * c[static_cast<std::size_t>(k)];
            // next monic polynomial of degree n
            int pos = 0;
            while (pos < n && a[static_cast<std::size_t>(pos)] == p - 1) a[static_cast<std::size_t>(pos++)] = 0;
            if (pos == n) break;
            ++a[static_cast<std::size_t>(pos)];
        }
        long long sv = out.certified;
        for (std::size_t idx = 0; idx < nidx; ++idx)
            for (int k = 0; k < L; ++k) {
                long long v = shell[idx * L + static_cast<std::size_t>(k)] % p;
                if (v == 0) continue;
                total[idx * L + static_cast<std::size_t>(k)] += v;
                sv = std::min(sv, static_cast<long long>(p - 1) * k);
            }
        out.shell_valuation.push_back(sv);
    }
    TateSeries S(ctx, out.certified);
    for (int k = 0; k < L; ++k) {
        std::vector<Coef::Term> terms;
        for (std::size_t idx = 0; idx < nidx; ++idx) {
            long long v = total[idx * L + static_cast<std::size_t>(k)] % p;
            if (v == 0) continue;
            Mono m = 0;
            std::size_t r = idx;
            for (int i = 0; i < s; ++i) {
                m |= mono_var(i, static_cast<int>(r % static_cast<std::size_t>(L)));
                r /= static_cast<std::size_t>(L);
            }
            terms.push_back({m, FE::from_int(ctx->F, v)});
        }
        if (!terms.empty()) S.set(static_cast<long long>(p - 1) * k, Coef(ctx->vs, terms));
    }
    out.value = S;
    return out;
}

// ---------------------------------------------------------------------------
// exp_{phi_s}

/// Data for exp_{phi_s} = sum_k e_k prod_i prod_{j<k} f_i^{(j)} tau^k.
struct ExpPhis {
    SeriesCtxPtr ctx;
    int s = 1;
    std::function<TateSeries(int, long long)> e;   // e_k to a given precision
    std::function<long long(int)> v_e;             // exact valuation of e_k
    std::vector<TateSeries> f;                     // f_1..f_s
    long long v_f = 0;                             // valuation of every f_i
};

/// theta^m as a series: (-1)^m u^{-(q-1) m}.
inline TateSeries theta_power_series(const SeriesCtxPtr& ctx, long long m) {
    return TateSeries::u_power(ctx, -(ctx->q - 1) * m, FE::from_int(ctx->F, (m % 2 == 0) ? 1 : -1));
}

/// Carlitz e_k = 1 / prod_{j<k} (theta^{q^k} - theta^{q^j}), valuation (q-1) k q^k.
inline TateSeries carlitz_e_series(const SeriesCtxPtr& ctx, int k, long long cap) {
    TateSeries D = TateSeries::one(ctx);
    const long long qk = ipow(ctx->q, k);
    for (int j = 0; j < k; ++j) D = D * (theta_power_series(ctx, qk) - theta_power_series(ctx, ipow(ctx->q, j)));
    return sdiv(TateSeries::one(ctx), D, cap);
}

/// exp_{phi_s} for F_q[theta]: f_i = t_i - theta.
inline ExpPhis carlitz_exp_phis(const SeriesCtxPtr& ctx, int s) {
    if (s > ctx->vs->nvars()) throw std::invalid_argument("carlitz_exp_phis: context has too few variables");
    ExpPhis E;
    E.ctx = ctx;
    E.s = s;
    const int q = ctx->q;
    E.e = [ctx](int k, long long cap) { return carlitz_e_series(ctx, k, cap); };
    E.v_e = [q](int k) { return static_cast<long long>(q - 1) * k * ipow(q, k); };
    for (int i = 0; i < s; ++i) E.f.push_back(TateSeries::var(ctx, i) - theta_series(ctx));
    E.v_f = -(q - 1);
    return E;
}

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& m, int k) : std::runtime_error(m), term(k) {}
    int term;
};

/// exp_{phi_s}(target) to precision cap. Terms stop once their valuation bound reaches cap and increases.
inline TateSeries exp_phis_apply(const ExpPhis& E, const TateSeries& target, long long cap, int kmax = 40) {
    if (target.is_zero()) return TateSeries(E.ctx, std::min(cap, target.prec()));
    const long long vt = target.valuation();
    const int q = E.ctx->q;
    TateSeries acc(E.ctx, kExact);
    TateSeries fprod = TateSeries::one(E.ctx);
    long long vfp = 0;
    long long prev = 0;
    for (int k = 0; k <= kmax; ++k) {
        const long long Q = ipow(q, k);
        const long long ve = E.v_e(k);
        const long long vk = ve + vfp + Q * vt;
        if (k > 0 && vk >= cap && vk > prev) return acc.truncated(cap);
        prev = vk;
        if (vk < cap) {
            TateSeries ek = E.e(k, cap - vfp - Q * vt);
            TateSeries tw = target.twist(k, cap - ve - vfp);
            acc = acc + (ek * fprod.truncated(cap - ve - Q * vt) * tw).truncated(cap);
        }
        for (const auto& f : E.f) fprod = fprod * f.twist(k);
        vfp += E.s * E.v_f * Q;
    }
    throw ConvergenceError("exp_phis_apply: terms do not reach the precision cap by k = " + std::to_string(kmax), kmax);
}

// ---------------------------------------------------------------------------
// Log-algebraicity over F_q[theta]

struct LogAlgReport {
    enum class Status { Certified, Failed, Insufficient } status = Status::Certified;
    long long certified = 0;   // u-precision of exp_{phi_s}(L_s)
    int checked = 0;           // nonzero terms below the certified precision
    long long first_failure = 0;
    TateSeries value;
    std::string polynomial;    // the certified part as a polynomial in theta and the t_i
};

/**
 * exp_{phi_s}(L_s(1)) must lie in F_q[theta, t_1..t_s]: no positive u-powers,
 * and nonzero coefficients only at exponents -(q-1) m.
 */
inline LogAlgReport log_algebraicity_check(int q, int s, int D, long long N) {
    auto ctx = theta_series_context(q, tvar_names(s));
    LSeries L = pellarin_L(ctx, s, D);
    ExpPhis E = carlitz_exp_phis(ctx, s);
    LogAlgReport rep;
    rep.value = exp_phis_apply(E, L.value, std::min(N, L.certified));
    rep.certified = std::min(N, rep.value.prec());
    if (rep.certified <= 0) {
        rep.status = LogAlgReport::Status::Insufficient;
        return rep;
    }
    std::ostringstream poly;
    bool first = true;
    for (const auto& [e, c] : rep.value.terms()) {
        if (e >= rep.certified) break;
        ++rep.checked;
        bool ok = e <= 0 && (-e) % (q - 1) == 0 && !c.has_den();
        if (!ok) {
            rep.status = LogAlgReport::Status::Failed;
            rep.first_failure = e;
            return rep;
        }
        long long m = -e / (q - 1);
        // c u^{-(q-1) m} = c (-1)^m theta^m
        Coef cc = (m % 2 == 0) ? c : -c;
        if (!first) poly << " + ";
        first = false;
        poly << "(" << to_string(cc) << ")";
        if (m > 0) poly << "*theta" << (m > 1 ? "^" + std::to_string(m) : "");
    }
    rep.polynomial = first ? "0" : poly.str();
    return rep;
}

// ---------------------------------------------------------------------------
// Kernel search for exp_{phi_s} over F_q[theta]

struct KernelSearch {
    long long v0 = 0, budget = 0;
    int tdeg = 0;
    std::vector<TateSeries> basis;   // kernel of the truncated system
    std::vector<long long> valuations;
};

namespace detail {
// Mono of the multi-index idx in base (tdeg + 1).
inline Mono index_mono(std::size_t idx, int s, int tdeg) {
    Mono m = 0;
    for (int i = 0; i < s; ++i) {
        m |= mono_var(i, static_cast<int>(idx % static_cast<std::size_t>(tdeg + 1)));
        idx /= static_cast<std::size_t>(tdeg + 1);
    }
    return m;
}
inline std::size_t count_monos(int s, int tdeg) {
    std::size_t n = 1;
    for (int i = 0; i < s; ++i) n *= static_cast<std::size_t>(tdeg + 1);
    return n;
}
}  // namespace detail

/// Columns of the truncated exp_{phi_s} system: x = sum c_{j,m} t^m u^j with v0 <= j < budget, t-degrees <= tdeg.
struct KernelSystem {
    SeriesCtxPtr ctx;
    int s = 1, tdeg = 0;
    long long v0 = 0, budget = 0;
    std::vector<TateSeries> exp_u;                // exp_{phi_s}(u^j)
    std::map<std::pair<long long, Mono>, std::size_t> rows;
    std::size_t ncols() const { return exp_u.size() * detail::count_monos(s, tdeg); }
    std::size_t col(long long j, std::size_t midx) const {
        return static_cast<std::size_t>(j - v0) * detail::count_monos(s, tdeg) + midx;
    }
};

inline KernelSystem kernel_system(int q, int s, long long budget, int tdeg, long long v0) {
    KernelSystem K;
    K.ctx = theta_series_context(q, tvar_names(s));
    K.s = s;
    K.tdeg = tdeg;
    K.v0 = v0;
    K.budget = budget;
    ExpPhis E = carlitz_exp_phis(K.ctx, s);
    for (long long j = v0; j < budget; ++j)
        K.exp_u.push_back(exp_phis_apply(E, TateSeries::u_power(K.ctx, j, FE(K.ctx->F, 1)), budget));
    return K;
}

/// Integer matrix (entries mod q) of the system; rows indexed by (u-exponent, t-monomial).
inline std::vector<std::vector<std::uint8_t>> kernel_matrix(KernelSystem& K) {
    const int p = K.ctx->q;
    const std::size_t nm = detail::count_monos(K.s, K.tdeg);
    std::vector<std::vector<std::pair<std::size_t, int>>> cols(K.ncols());
    for (std::size_t jj = 0; jj < K.exp_u.size(); ++jj)
        for (const auto& [e, c] : K.exp_u[jj].terms()) {
            if (e >= K.budget) break;
            for (const auto& [mono, co] : c.terms())
                for (std::size_t mi = 0; mi < nm; ++mi) {
                    Mono shifted = mono + detail::index_mono(mi, K.s, K.tdeg);
                    auto key = std::make_pair(e, shifted);
                    auto it = K.rows.find(key);
                    std::size_t r = (it == K.rows.end()) ? K.rows.emplace(key, K.rows.size()).first->second : it->second;
                    cols[jj * nm + mi].push_back({r, static_cast<int>(co.value())});
                }
        }
    std::vector<std::vector<std::uint8_t>> m(K.rows.size(), std::vector<std::uint8_t>(K.ncols(), 0));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, v] : cols[c]) m[r][c] = static_cast<std::uint8_t>((m[r][c] + v) % p);
    return m;
}

inline TateSeries kernel_vector_series(const KernelSystem& K, const std::vector<int>& v) {
    const std::size_t nm = detail::count_monos(K.s, K.tdeg);
    TateSeries x(K.ctx, K.budget);
    for (std::size_t jj = 0; jj < K.exp_u.size(); ++jj) {
        std::vector<Coef::Term> terms;
        for (std::size_t mi = 0; mi < nm; ++mi)
            if (int a = v[jj * nm + mi]) terms.push_back({detail::index_mono(mi, K.s, K.tdeg), FE::from_int(K.ctx->F, a)});
        if (!terms.empty()) x.set(K.v0 + static_cast<long long>(jj), Coef(K.ctx->vs, terms));
    }
    return x;
}

/// Nonzero x with exp_{phi_s}(x) = 0 mod u^budget among the truncated candidates.
inline KernelSearch kernel_search(int q, int s, long long budget, int tdeg, long long v0) {
    KernelSystem K = kernel_system(q, s, budget, tdeg, v0);
    auto m = kernel_matrix(K);
    KernelSearch out;
    out.v0 = v0;
    out.budget = budget;
    out.tdeg = tdeg;
    for (const auto& v : nullspace_mod_p(std::move(m), K.ncols(), q)) {
        out.basis.push_back(kernel_vector_series(K, v));
        out.valuations.push_back(out.basis.back().valuation());
    }
    return out;
}

/// True when the truncation of x (t-degree <= tdeg, v0 <= exponent < budget) solves the kernel system.
inline bool in_truncated_kernel(int q, int s, const TateSeries& x, long long budget, int tdeg) {
    auto ctx = theta_series_context(q, tvar_names(s));
    TateSeries y(ctx, budget);
    for (const auto& [e, c] : x.terms()) {
        if (e >= budget) break;
        std::vector<Coef::Term> keep;
        for (const auto& [mono, co] : c.terms()) {
            bool ok = true;
            for (int i = 0; i < s; ++i) ok = ok && mono_exp(mono, i) <= tdeg;
            if (ok) keep.push_back({mono, to_field(co, ctx->F.get())});
        }
        if (!keep.empty()) y.set(e, Coef(ctx->vs, keep));
    }
    if (y.is_zero()) return false;
    TateSeries ex = exp_phis_apply(carlitz_exp_phis(ctx, s), y, budget);
    return ex.valuation_or_prec() >= budget;
}

/// The predicted kernel generator pi~ / (omega_1 ... omega_s) to precision n.
inline TateSeries predicted_kernel_generator(int q, int s, long long n) {
    auto ctx = theta_series_context(q, tvar_names(s));
    TateSeries den = TateSeries::one(ctx);
    for (int i = 0; i < s; ++i) den = (den * omega_carlitz(ctx, n + 2 * q + s, i)).truncated(n + 2 * q + s);
    return sdiv(pi_tilde_product(ctx, n + 2 * q + s), den, n);
}

// ---------------------------------------------------------------------------
// Rational reconstruction

/// A field generator given by its series image (e.g. theta, or the x-series).
struct ReconGen {
    std::string name;
    TateSeries series;
};

struct ReconResult {
    enum class Status { Found, NotFound, Underdetermined } status = Status::NotFound;
    int d_num = 0, d_den = 0;
    // exponent vectors over (generators..., variables...), with coefficients
    std::vector<std::pair<std::vector<int>, FE>> num, den;
    long long certified = 0;
    long long residual_valuation = 0;
    std::string expr;
};

namespace detail {
inline std::vector<std::vector<int>> box_exponents(int nvars, int bound) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < nvars; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& v : out)
            for (int e = 0; e <= bound; ++e) {
                auto w = v;
                w.push_back(e);
                next.push_back(w);
            }
        out.swap(next);
    }
    return out;
}

inline std::string recon_poly_string(const std::vector<std::pair<std::vector<int>, FE>>& p, const std::vector<std::string>& names) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [ex, c] : p) {
        if (!first) os << " + ";
        first = false;
        os << to_string(c);
        for (std::size_t i = 0; i < ex.size(); ++i)
            if (ex[i] > 0) os << "*" << names[i] << (ex[i] > 1 ? "^" + std::to_string(ex[i]) : "");
    }
    return first ? "0" : os.str();
}
}  // namespace detail

/**
 * Finds P, Q with P - S Q = 0 to the certified precision, where P, Q are
 * polynomials in the generators and the context variables with every exponent
 * bounded by d_num (resp. d_den), Q of least degree bound, normalized so its
 * last nonzero coefficient is 1. Coefficients with atom denominators are rejected.
 */
inline ReconResult rational_reconstruct(const TateSeries& S, const std::vector<ReconGen>& gens, int d_num, int d_den,
                                        long long certified, int margin = 4) {
    const auto& ctx = S.ctx();
    const GF* F = ctx->F.get();
    const int nv = ctx->vs->nvars();
    const int ng = static_cast<int>(gens.size());
    std::vector<std::string> names;
    for (const auto& g : gens) names.push_back(g.name);
    for (int i = 0; i < nv; ++i) names.push_back(ctx->vs->names[static_cast<std::size_t>(i)]);
    certified = std::min(certified, S.prec());

    // series of a monomial in the generators times a variable monomial
    auto mono_series = [&](const std::vector<int>& ex, long long cap) {
        TateSeries acc = TateSeries::one(ctx);
        for (int i = 0; i < ng; ++i)
            for (int k = 0; k < ex[static_cast<std::size_t>(i)]; ++k) acc = (acc * gens[static_cast<std::size_t>(i)].series).truncated(cap);
        Mono m = 0;
        for (int i = 0; i < nv; ++i) m |= mono_var(i, ex[static_cast<std::size_t>(ng + i)]);
        return (Coef(ctx->vs, {{m, FE(ctx->F, 1)}}) * acc).truncated(cap);
    };

    // u-exponent span of one unit of degree in the generators
    long long span = 1;
    for (const auto& g : gens) span = std::max(span, std::abs(g.series.valuation_or_prec()));

    ReconResult res;
    res.certified = certified;
    auto pex = detail::box_exponents(ng + nv, d_num);
    std::vector<TateSeries> pcols;
    for (const auto& ex : pex) pcols.push_back(mono_series(ex, certified));
    for (int dd = 0; dd <= d_den; ++dd) {
        auto qex = detail::box_exponents(ng + nv, dd);
        std::vector<TateSeries> cols = pcols;
        for (const auto& ex : qex) cols.push_back((-(S * mono_series(ex, certified))).truncated(certified));
        // S * q' loses precision when the generators have negative valuation
        long long lim = certified;
        for (const auto& c : cols) lim = std::min(lim, c.prec());
        std::map<std::pair<long long, Mono>, std::size_t> rows;
        std::vector<std::vector<std::pair<std::size_t, FE>>> entries(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (const auto& [e, co] : cols[c].terms()) {
                if (e >= lim) break;
                if (co.has_den()) throw std::invalid_argument("rational_reconstruct: coefficients must be polynomial in the variables");
                for (const auto& [mono, a] : co.terms()) {
                    auto key = std::make_pair(e, mono);
                    auto it = rows.find(key);
                    std::size_t r = (it == rows.end()) ? rows.emplace(key, rows.size()).first->second : it->second;
                    entries[c].push_back({r, to_field(a, F)});
                }
            }
        if (lim - S.valuation_or_prec() < span * (d_num + dd) + margin) {
            res.status = ReconResult::Status::Underdetermined;
            res.d_num = d_num;
            res.d_den = dd;
            return res;
        }
        Matrix m(rows.size(), std::vector<FE>(cols.size(), FE(F, 0)));
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (const auto& [r, a] : entries[c]) m[r][c] = m[r][c] + a;
        auto ns = nullspace(m, cols.size(), F);
        for (const auto& v : ns) {
            bool qnz = false;
            for (std::size_t i = pex.size(); i < v.size(); ++i) qnz = qnz || !v[i].is_zero();
            if (!qnz) continue;
            FE lead(F, 1);
            for (std::size_t i = v.size(); i-- > pex.size();)
                if (!v[i].is_zero()) { lead = v[i]; break; }
            FE il = lead.inv();
            res.num.clear();
            res.den.clear();
            TateSeries P(ctx, kExact), Q(ctx, kExact);
            for (std::size_t i = 0; i < pex.size(); ++i)
                if (!v[i].is_zero()) {
                    res.num.push_back({pex[i], v[i] * il});
                    P = P + (v[i] * il) * pcols[i];
                }
            for (std::size_t i = 0; i < qex.size(); ++i) {
                const FE& a = v[pex.size() + i];
                if (a.is_zero()) continue;
                res.den.push_back({qex[i], a * il});
                Q = Q + (a * il) * mono_series(qex[i], certified);
            }
            TateSeries resid = (P - S * Q).truncated(lim);
            res.certified = lim;
            res.residual_valuation = resid.valuation_or_prec();
            if (res.residual_valuation < lim) throw std::logic_error("rational_reconstruct: solution fails re-substitution");
            res.status = ReconResult::Status::Found;
            res.d_num = d_num;
            res.d_den = dd;
            res.expr = "(" + detail::recon_poly_string(res.num, names) + ") / (" + detail::recon_poly_string(res.den, names) + ")";
            return res;
        }
    }
    res.status = ReconResult::Status::NotFound;
    res.d_num = d_num;
    res.d_den = d_den;
    return res;
}

/// True when a Found result is the constant c (denominator 1, numerator c).
inline std::optional<FE> recon_constant(const ReconResult& r) {
    if (r.status != ReconResult::Status::Found || r.num.size() != 1 || r.den.size() != 1) return std::nullopt;
    auto zero = [](const std::vector<int>& ex) { return std::all_of(ex.begin(), ex.end(), [](int e) { return e == 0; }); };
    if (!zero(r.num[0].first) || !zero(r.den[0].first)) return std::nullopt;
    return r.num[0].second * r.den[0].second.inv();
}

// ---------------------------------------------------------------------------
// Pellarin's identity over F_q[theta]

struct PellarinReport {
    LSeries L;
    TateSeries S;            // (t - theta) L omega / pi~
    ReconResult recon;
    std::optional<FE> unit;
};

inline PellarinReport pellarin_rationality(int q, int D, int d_bound = 2) {
    auto ctx = theta_series_context(q, {"t"});
    PellarinReport rep;
    rep.L = pellarin_L(ctx, 1, D);
    const long long P = rep.L.certified;
    TateSeries t = TateSeries::var(ctx, 0);
    TateSeries w = omega_carlitz(ctx, P + q + 2);
    TateSeries pt = pi_tilde_product(ctx, P + 2 * q + 2);
    rep.S = sdiv(((t - theta_series(ctx)) * rep.L.value * w), pt, P);
    rep.recon = rational_reconstruct(rep.S, {{"theta", theta_series(ctx)}}, d_bound, d_bound, P);
    rep.unit = recon_constant(rep.recon);
    return rep;
}


// ---------------------------------------------------------------------------
// Tail bounds over a genus-zero context

/// v(term of degree k) >= ceil((k N - slack) / d), with slack measured on the enumerated range.
struct TailBound {
    long long N = 1;
    int d = 1;
    long long slack = 0;
    long long at(long long k) const {
        long long num = k * N - slack;
        return num >= 0 ? (num + d - 1) / d : -((-num) / d);
    }
};

namespace detail {
/// Fits the tail bound to per-degree minimum valuations (index k, k >= 1); reports monotonicity.
/// Monotonicity is checked within each degree class mod d.
inline TailBound fit_tail(const GenusZeroContext& G, const std::vector<long long>& minv, long long scale, bool& monotone) {
    TailBound t{G.N * scale, G.d, 0};
    monotone = true;
    bool first = true;
    const auto d = static_cast<std::size_t>(G.d);
    for (std::size_t k = 1; k < minv.size(); ++k) {
        if (minv[k] >= kExact) continue;
        long long sl = static_cast<long long>(k) * t.N - G.d * minv[k];
        t.slack = first ? sl : std::max(t.slack, sl);
        first = false;
        if (k > d && minv[k - d] < kExact && minv[k] < minv[k - d]) monotone = false;
    }
    return t;
}
inline std::size_t group_index(const std::vector<GaloisElem>& group, const GaloisElem& s) {
    auto it = std::find(group.begin(), group.end(), s);
    if (it == group.end()) throw std::logic_error("Artin symbol outside the computed group");
    return static_cast<std::size_t>(it - group.begin());
}
}  // namespace detail

// ---------------------------------------------------------------------------
// L_s = sum_I prod_k rho_k(u_I) / psi(I) sigma_I

struct LSeriesValue {
    int s = 1, D = 0;
    SeriesCtxPtr ctx;
    std::vector<GaloisElem> group;
    std::vector<TateSeries> components;          // coefficient of group[i]
    std::vector<long long> degree_min_valuation;  // index k = ideal degree, 1..D+1
    TailBound tail;
    bool tail_monotone = true;
    long long certified = 0;
    bool gprime_unit = false;                     // restriction to Gal(H_A/K) has a unit leading part
};

/**
 * Ideals of degree D + 1 are enumerated only to measure the tail; they are
 * not summed. Components are truncated to the certified precision.
 */
inline LSeriesValue lseries_operator(const GenusZeroContext& G, int s, int D, long long N) {
    if (D < 0) throw std::invalid_argument("lseries_operator: D must be >= 0");
    if (N < 1) throw std::invalid_argument("lseries_operator: precision must be positive");
    LSeriesValue out;
    out.s = s;
    out.D = D;
    out.ctx = place_series_context(G.cc, tvar_names(s, "z"));
    const long long work = N + (static_cast<long long>(D + 1) * G.N + G.d - 1) / G.d + 2 * G.N + 4;
    PlaceSeries P = place_series(G, out.ctx, work + G.N);
    GaloisElem sP = sigma_P(G);
    out.group = galois_group(G, sP);
    for (std::size_t i = 0; i < out.group.size(); ++i) out.components.emplace_back(out.ctx, kExact);
    out.degree_min_valuation.assign(static_cast<std::size_t>(D + 2), kExact);
    const TateSeries one = TateSeries::one(out.ctx);
    for (const auto& r : ideal_table(G, D + 1, sP)) {
        TateSeries term = sdiv(one, h_series(G, P, r.psi, work + G.N), work);
        for (int k = 0; k < s; ++k) term = (term * zelem_series(G, P, r.u, k, work)).truncated(work);
        auto& mv = out.degree_min_valuation[static_cast<std::size_t>(r.I.n)];
        mv = std::min(mv, term.valuation_or_prec());
        if (r.I.n <= D) {
            auto& c = out.components[detail::group_index(out.group, r.sigma)];
            c = c + term;
        }
    }
    out.tail = detail::fit_tail(G, out.degree_min_valuation, 1, out.tail_monotone);
    out.certified = std::min(N, out.tail.at(D + 1));
    if (out.certified <= 0) throw PrecisionError("lseries_operator: degree cutoff certifies no coefficient");
    for (auto& c : out.components) c = c.truncated(out.certified);

    // restriction to Gal(H_A/K) = <Frobenius on F_inf>
    std::vector<TateSeries> res(static_cast<std::size_t>(G.d), TateSeries(out.ctx, kExact));
    for (std::size_t i = 0; i < out.group.size(); ++i) {
        auto& r = res[static_cast<std::size_t>(out.group[i].j)];
        r = r + out.components[i];
    }
    Coef lead0 = res[0].coeff(0);
    out.gprime_unit = res[0].valuation_or_prec() == 0 && lead0.is_constant() && !lead0.is_zero();
    for (int j = 1; j < G.d; ++j) out.gprime_unit = out.gprime_unit && res[static_cast<std::size_t>(j)].valuation_or_prec() > 0;
    return out;
}

/**
 * For d = 1 the operator has a single component; it must agree with the
 * Pellarin sum after t_i = rho(theta) = 1/(z_i - zeta). Returns the number of
 * u-coefficients compared, or -1 on a mismatch.
 */
inline long long pellarin_cross_check(const GenusZeroContext& G, int s, int D, long long N) {
    if (G.d != 1) throw std::invalid_argument("pellarin_cross_check: needs an infinite place of degree 1");
    LSeriesValue op = lseries_operator(G, s, D, N);
    if (op.components.size() != 1) throw std::logic_error("pellarin_cross_check: group is not trivial");
    auto tctx = theta_series_context(G.q, tvar_names(s));
    LSeries L = pellarin_L(tctx, s, D);
    const long long n = std::min(op.certified, L.certified);
    const auto& vs = op.ctx->vs;
    TateSeries mapped(op.ctx, n);
    for (const auto& [e, c] : L.value.terms()) {
        if (e >= n) break;
        Coef acc;
        for (const auto& [m, a] : c.terms()) {
            Coef t = Coef::constant(vs, FE::from_int(op.ctx->F, a.value()));
            for (int v = 0; v < s; ++v)
                if (int k = mono_exp(m, v)) t = t * Coef::atom_inv(vs, v, 0, k);
            acc = acc + t;
        }
        mapped.set(e, acc.normalized());
    }
    TateSeries diff = (op.components[0] - mapped).truncated(n);
    return diff.is_zero() ? n : -1;
}

// ---------------------------------------------------------------------------
// chi_m(I) = tau^m(u_I)/u_I at xi

inline HElem chi_m(const GenusZeroContext& G, int m, const ZElem& uI) {
    if (m < 1 || m % G.d != 0) throw std::invalid_argument("chi_m: m must be a positive multiple of d_inf");
    HElem num = z_subst(uI.frob(m), G.x), den = z_subst(uI, G.x);
    if (num.is_zero() || den.is_zero()) throw std::logic_error("chi_m: zero at xi");
    HElem r = num / den;
    if (r.monomial_exponent() != 0) throw std::logic_error("chi_m: value is outside H_A");
    return r;
}
inline HElem chi_m(const GenusZeroContext& G, int m, const Ideal& I) { return chi_m(G, m, u_ideal(G, I)); }

struct ChiReport {
    int ideals = 0, pairs = 0;
    bool principal_trivial = true;   // chi_m(aA) = 1
    bool cocycle = true;             // chi_m(IJ) = sigma_I(chi_m(J)) chi_m(I)
    std::string failure;
};

inline ChiReport chi_cocycle_check(const GenusZeroContext& G, int m, int D, int Dprod) {
    ChiReport rep;
    GaloisElem sP = sigma_P(G);
    auto tab = ideal_table(G, Dprod, sP);
    std::vector<HElem> chi;
    for (const auto& r : tab) chi.push_back(chi_m(G, m, r.u));
    rep.ideals = static_cast<int>(tab.size());
    auto find = [&](const Ideal& I) {
        for (std::size_t i = 0; i < tab.size(); ++i)
            if (tab[i].I == I) return i;
        throw std::logic_error("chi_cocycle_check: product ideal not enumerated");
    };
    for (std::size_t i = 0; i < tab.size(); ++i) {
        if (tab[i].I.n % G.d == 0 && !(chi[i] == h_one(G))) {
            rep.principal_trivial = false;
            rep.failure = "chi_m(aA) != 1 for " + ideal_string(tab[i].I);
        }
        if (tab[i].I.n > D) continue;
        for (std::size_t j = 0; j < tab.size(); ++j) {
            if (tab[j].I.n > D || tab[i].I.n + tab[j].I.n > Dprod) continue;
            ++rep.pairs;
            std::size_t k = find(ideal_mul(tab[i].I, tab[j].I));
            if (!(chi[k] == galois_apply(G, tab[i].sigma, chi[j]) * chi[i])) {
                rep.cocycle = false;
                rep.failure = "cocycle fails for " + ideal_string(tab[i].I) + " * " + ideal_string(tab[j].I);
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Special values sum_I sigma_I(b) / psi(I)^n / pi~^n

struct SpecialValueStep {
    int D = 0;
    long long certified = 0;        // precision of the normalized value
    long long tail_valuation = 0;   // exact valuation of the degree D+1..limit part
    long long tail_bound = 0;       // linear bound for the degree > D part
    TateSeries value;               // partial sum / pi~^n, truncated to `certified`
    ReconResult recon;
};

struct SpecialValueReport {
    int n = 0;
    int enumerated = 0;                     // ideals are enumerated to this degree
    std::vector<long long> shell_valuation; // exact valuation of each degree shell
    std::vector<SpecialValueStep> steps;
    TailBound tail;
    bool tail_monotone = true;
    bool tails_increasing = true;
    bool bound_consistent = true;   // measured tails respect the bound
    bool recon_stable = true;       // same outcome for consecutive certified steps
};

/// Exact u-valuation of a nonzero element of the Kummer ring; distinct g-exponents have distinct valuations mod N.
inline long long h_valuation_any(const GenusZeroContext& G, const HElem& h) {
    long long best = kExact;
    for (int e = 0; e < G.N; ++e)
        if (!h[e].is_zero()) best = std::min(best, e * g_valuation(G) + G.N * ord_at(h[e], G.zeta));
    if (best == kExact) throw std::domain_error("h_valuation_any: zero");
    return best;
}

namespace detail {
inline HElem balanced_sum(const GenusZeroContext& G, std::vector<HElem> v) {
    if (v.empty()) return HElem(G.kctx);
    while (v.size() > 1) {
        std::vector<HElem> next;
        for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] + v[i + 1]);
        if (v.size() % 2) next.push_back(v.back());
        v = std::move(next);
    }
    return v[0];
}
}  // namespace detail

/**
 * Partial sums for each cutoff in `Ds`, summed exactly in the Kummer ring.
 * Ideals up to max(Ds) + extra are enumerated; the extra degrees only feed
 * the tail measurement. The normalized value is reconstructed over F_inf(x)
 * with numerator and denominator degree <= dbound.
 */
inline SpecialValueReport special_value_sum(const GenusZeroContext& G, int n, const std::vector<int>& Ds, long long N,
                                            const std::optional<HElem>& b = std::nullopt, int dbound = 2, int extra = 1) {
    if (n < 1 || n % G.N != 0) throw std::invalid_argument("special_value_sum: n must be a positive multiple of q^d - 1");
    if (Ds.empty()) throw std::invalid_argument("special_value_sum: no cutoffs");
    if (N < 1) throw std::invalid_argument("special_value_sum: precision must be positive");
    SpecialValueReport rep;
    rep.n = n;
    const int Dmax = *std::max_element(Ds.begin(), Ds.end());
    const int Denum = Dmax + std::max(extra, 1);
    rep.enumerated = Denum;
    GaloisElem sP = sigma_P(G);
    std::vector<std::vector<HElem>> terms(static_cast<std::size_t>(Denum + 1));
    std::vector<long long> minv(static_cast<std::size_t>(Denum + 1), kExact);
    for (const auto& r : ideal_table(G, Denum, sP)) {
        HElem t = r.psi.pow(-n);
        if (b) t = galois_apply(G, r.sigma, *b) * t;
        if (t.is_zero()) continue;
        auto k = static_cast<std::size_t>(r.I.n);
        minv[k] = std::min(minv[k], h_valuation_any(G, t));
        terms[k].push_back(std::move(t));
    }
    std::vector<HElem> shell;
    for (auto& v : terms) {
        shell.push_back(detail::balanced_sum(G, std::move(v)));
        rep.shell_valuation.push_back(shell.back().is_zero() ? kExact : h_valuation_any(G, shell.back()));
    }
    rep.tail = detail::fit_tail(G, minv, n, rep.tail_monotone);

    PiTilde pt = pi_tilde_general(G, place_series(G, N + 8 * G.N + 16), N);
    const long long vpi = pt.pi.valuation();
    const long long work = N + n * (-vpi) + 2;
    PlaceSeries P = place_series(G, work + G.N);
    TateSeries pin = sdiv(TateSeries::one(G.sctx), pt.pi.pow(n), work);

    std::optional<ReconResult> prev;
    long long prev_tail = 0;
    for (std::size_t i = 0; i < Ds.size(); ++i) {
        const int D = Ds[i];
        SpecialValueStep st;
        st.D = D;
        std::vector<HElem> head, tail;
        for (int k = 0; k <= Denum; ++k) (k <= D ? head : tail).push_back(shell[static_cast<std::size_t>(k)]);
        HElem S = detail::balanced_sum(G, head), T = detail::balanced_sum(G, tail);
        st.tail_bound = rep.tail.at(D + 1);
        st.tail_valuation = T.is_zero() ? kExact : h_valuation_any(G, T);
        if (st.tail_valuation < st.tail_bound) rep.bound_consistent = false;
        // the unseen part has valuation >= tail_bound; dividing by pi~^n adds n (-v(pi~))
        const long long cert = std::min(N, st.tail_bound + n * (-vpi));
        st.value = (h_series(G, P, S, work) * pin).truncated(cert);
        st.certified = st.value.prec();
        if (st.certified > 0) st.recon = rational_reconstruct(st.value, {{"x", P.X}}, dbound, dbound, st.certified);
        else st.recon.status = ReconResult::Status::Underdetermined;
        if (i > 0) {
            if (st.tail_valuation <= prev_tail) rep.tails_increasing = false;
            if (prev && prev->status != ReconResult::Status::Underdetermined &&
                st.recon.status != ReconResult::Status::Underdetermined &&
                (prev->status != st.recon.status || prev->expr != st.recon.expr))
                rep.recon_stable = false;
        }
        prev = st.recon;
        prev_tail = st.tail_valuation;
        rep.steps.push_back(std::move(st));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Evaluation bridge over F_q[theta]: f^{(i)} omega at t = theta^{q^i}, divided by pi~^{q^i}

struct BridgeReport {
    int i = 0;
    long long certified = 0;
    TateSeries value;   // in a variable-free theta context
    ReconResult recon;
};

namespace detail {
/// Copies a series whose coefficients are constants into `target` (same field size).
inline TateSeries constants_only(const TateSeries& S, const SeriesCtxPtr& target) {
    TateSeries out(target, S.prec());
    for (const auto& [e, c] : S.terms()) {
        if (!c.is_constant()) throw std::domain_error("constants_only: coefficient depends on a variable");
        out.set(e, Coef::constant(target->vs, FE::from_int(target->F, c.constant_term().value())));
    }
    return out;
}
}  // namespace detail

/**
 * f^{(i)} omega = omega^{(i+1)} / prod_{j<i} f^{(j)}, evaluated at t = theta^{q^i}.
 * In omega^{(i+1)} the t^k terms start at u-exponent q^{i+1}(-1 + (q-1)k).
 */
inline BridgeReport evaluation_bridge(int q, int i, long long N, int d_num, int d_den) {
    if (i < 0) throw std::invalid_argument("evaluation_bridge: i must be >= 0");
    auto ctx = theta_series_context(q, {"t"});
    auto ctx0 = theta_series_context(q, {});
    BridgeReport rep;
    rep.i = i;
    const long long Q = ipow(q, i), Q1 = Q * q;
    const long long n0 = N / q + 2 * q + 4;
    TateSeries w = omega_carlitz(ctx, n0).twist(i + 1, kExact);
    TateSeries ev = detail::constants_only(eval_var(w, 0, theta_power_series(ctx, Q), -Q1, (q - 1) * Q1), ctx0);
    TateSeries tv = theta_power_series(ctx0, Q);
    TateSeries den = TateSeries::one(ctx0);
    for (int j = 0; j < i; ++j) den = den * (tv - theta_power_series(ctx0, ipow(q, j)));
    TateSeries pi = pi_tilde_product(ctx0, ev.prec() + 2 * q * Q + 4);
    rep.value = sdiv(ev, den * pi.pow(Q), std::min(N, ev.prec()));
    rep.certified = rep.value.prec();
    rep.recon = rational_reconstruct(rep.value, {{"theta", theta_series(ctx0)}}, d_num, d_den, rep.certified);
    return rep;
}

}  // namespace drinfeld
