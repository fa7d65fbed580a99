#pragma once

/**
 * @file tate_series.hpp
 * @brief Precision-tracked Laurent series in u, u^{q^d - 1} = -pi.
 *
 * Coefficients are LocPoly<FE> over F_{q^d}. A series stores the coefficients
 * of u^lo .. u^{hi-1} densely and a precision N: everything from u^N on is
 * unknown. Exact series (finite sums) carry N = kExact.
 *
 * Valuations are integers in u-units; one pi-unit is q^d - 1 u-units.
 */

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "drinfeld/locpoly.hpp"

namespace drinfeld {

inline constexpr long long kExact = 1LL << 60;

inline long long sat_add(long long a, long long b) {
    if (a >= kExact / 2 || b >= kExact / 2) return kExact;
    return a + b;
}

struct SeriesContext {
    int q = 2;
    int d = 1;
    Field F;            // F_{q^d}
    VarSpacePtr vs;     // motivic variables and atoms
    FE zeta;            // distinguished root in F_{q^d}

    long long N() const { return ipow(q, d) - 1; }
};
using SeriesCtxPtr = std::shared_ptr<const SeriesContext>;

inline SeriesCtxPtr make_series_context(int q, int d, Field F, VarSpacePtr vs, FE zeta) {
    auto c = std::make_shared<SeriesContext>();
    c->q = q;
    c->d = d;
    c->F = std::move(F);
    c->vs = std::move(vs);
    c->zeta = zeta;
    return c;
}

/// Thrown when a computation cannot see far enough to decide.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TateSeries {
public:
    TateSeries() = default;
    /// Zero known up to u^prec.
    TateSeries(SeriesCtxPtr ctx, long long prec) : ctx_(std::move(ctx)), prec_(prec) {}

    static TateSeries monomial(const SeriesCtxPtr& ctx, const Coef& c, long long e, long long prec = kExact) {
        TateSeries s(ctx, prec);
        if (e < prec) s.set(e, c);
        return s;
    }
    static TateSeries constant(const SeriesCtxPtr& ctx, const FE& c, long long prec = kExact) {
        return monomial(ctx, Coef::constant(ctx->vs, c), 0, prec);
    }
    static TateSeries one(const SeriesCtxPtr& ctx, long long prec = kExact) { return constant(ctx, FE(ctx->F, 1), prec); }
    /// The variable z_v (or t_v).
    static TateSeries var(const SeriesCtxPtr& ctx, int v) { return monomial(ctx, Coef::var(ctx->vs, v), 0); }
    /// u^e with coefficient c in F_{q^d}.
    static TateSeries u_power(const SeriesCtxPtr& ctx, long long e, const FE& c) {
        return monomial(ctx, Coef::constant(ctx->vs, c), e);
    }

    const SeriesCtxPtr& ctx() const { return ctx_; }
    long long prec() const { return prec_; }
    bool exact() const { return prec_ >= kExact; }
    long long lo() const { return lo_; }
    long long hi() const { return lo_ + static_cast<long long>(c_.size()); }
    Coef coeff(long long e) const {
        if (e < lo_ || e >= hi()) return Coef();
        return c_[static_cast<std::size_t>(e - lo_)];
    }
    void set(long long e, const Coef& c) {
        if (e >= prec_) throw std::out_of_range("TateSeries::set beyond precision");
        if (c_.empty()) {
            if (c.is_zero()) return;
            lo_ = e;
            c_.push_back(c);
            return;
        }
        if (e < lo_) {
            c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - e), Coef());
            lo_ = e;
        }
        if (e >= hi()) c_.resize(static_cast<std::size_t>(e - lo_ + 1));
        c_[static_cast<std::size_t>(e - lo_)] = c;
    }

    /// True when every known coefficient vanishes.
    bool is_zero() const {
        for (const auto& c : c_) if (!c.is_zero()) return false;
        return true;
    }
    long long valuation() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return lo_ + static_cast<long long>(i);
        throw PrecisionError("series is indistinguishable from zero at precision " + std::to_string(prec_));
    }
    /// Valuation, or the precision when no coefficient is known to be nonzero.
    long long valuation_or_prec() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return lo_ + static_cast<long long>(i);
        return prec_;
    }
    Coef lead() const { return coeff(valuation()); }

    TateSeries truncated(long long n) const {
        TateSeries r(*this);
        r.prec_ = std::min(prec_, n);
        if (r.hi() > r.prec_) r.c_.resize(static_cast<std::size_t>(std::max<long long>(0, r.prec_ - r.lo_)));
        r.tidy();
        return r;
    }
    /// Multiplication by u^s.
    TateSeries shifted(long long s) const {
        TateSeries r(*this);
        r.lo_ += s;
        r.prec_ = sat_add(prec_, s);
        return r;
    }

    friend TateSeries operator+(const TateSeries& a, const TateSeries& b) { return add(a, b, false); }
    friend TateSeries operator-(const TateSeries& a, const TateSeries& b) { return add(a, b, true); }
    TateSeries operator-() const {
        TateSeries r(*this);
        for (auto& c : r.c_) c = -c;
        return r;
    }
    TateSeries& operator+=(const TateSeries& o) { return *this = *this + o; }
    TateSeries& operator-=(const TateSeries& o) { return *this = *this - o; }

    friend TateSeries operator*(const Coef& s, const TateSeries& a) {
        TateSeries r(a);
        for (auto& c : r.c_) c = s * c;
        r.tidy();
        return r;
    }
    friend TateSeries operator*(const TateSeries& a, const Coef& s) { return s * a; }
    friend TateSeries operator*(const FE& s, const TateSeries& a) { return Coef::constant(a.ctx_->vs, s) * a; }

    friend TateSeries operator*(const TateSeries& a, const TateSeries& b) {
        const SeriesCtxPtr& ctx = a.ctx_ ? a.ctx_ : b.ctx_;
        long long va = a.valuation_or_prec(), vb = b.valuation_or_prec();
        bool za = va >= a.prec_, zb = vb >= b.prec_;
        long long prec = std::min(sat_add(a.prec_, vb), sat_add(b.prec_, va));
        TateSeries r(ctx, prec);
        if (za || zb) return r;
        long long top = std::min(prec, a.hi() + b.hi() - 1);
        if (top <= va + vb) return r;
        r.lo_ = va + vb;
        r.c_.assign(static_cast<std::size_t>(top - r.lo_), Coef());
        for (long long i = va; i < a.hi(); ++i) {
            const Coef& ai = a.c_[static_cast<std::size_t>(i - a.lo_)];
            if (ai.is_zero()) continue;
            for (long long j = vb; j < b.hi() && i + j < top; ++j) {
                const Coef& bj = b.c_[static_cast<std::size_t>(j - b.lo_)];
                if (bj.is_zero()) continue;
                auto& slot = r.c_[static_cast<std::size_t>(i + j - r.lo_)];
                slot += ai * bj;
            }
        }
        r.tidy();
        return r;
    }
    TateSeries& operator*=(const TateSeries& o) { return *this = *this * o; }

    /// a / b, precision capped at `cap`. The leading coefficient of b must be a unit.
    static TateSeries div(const TateSeries& a, const TateSeries& b, long long cap = kExact) {
        const SeriesCtxPtr& ctx = a.ctx_ ? a.ctx_ : b.ctx_;
        long long vb = b.valuation();
        long long va = a.valuation_or_prec();
        long long prec = std::min({a.exact() ? kExact : a.prec_ - vb,
                                   b.exact() ? kExact : sat_add(b.prec_, va - 2 * vb), cap});
        if (prec >= kExact) throw std::invalid_argument("TateSeries::div: an exact quotient needs a precision cap");
        TateSeries r(ctx, prec);
        if (va >= a.prec_ || va - vb >= prec) return r;
        Coef lb = b.coeff(vb).inv();
        std::vector<std::pair<long long, Coef>> tail;
        for (long long j = vb + 1; j < b.hi(); ++j) {
            Coef c = b.coeff(j);
            if (!c.is_zero()) tail.push_back({j - vb, c});
        }
        long long qlo = va - vb;
        r.lo_ = qlo;
        r.c_.assign(static_cast<std::size_t>(prec - qlo), Coef());
        for (long long k = qlo; k < prec; ++k) {
            Coef acc = a.coeff(k + vb);
            for (const auto& [off, c] : tail) {
                long long idx = k - off;
                if (idx < qlo) break;
                const Coef& qq = r.c_[static_cast<std::size_t>(idx - qlo)];
                if (!qq.is_zero()) acc -= c * qq;
            }
            if (!acc.is_zero()) r.c_[static_cast<std::size_t>(k - qlo)] = acc * lb;
        }
        r.tidy();
        return r;
    }
    TateSeries inv(long long cap = kExact) const { return div(one(ctx_), *this, cap); }

    TateSeries pow(long long k, long long cap = kExact) const {
        if (k < 0) return inv(cap).pow(-k, cap);
        TateSeries r = one(ctx_), b = *this;
        while (k > 0) {
            if (k & 1) r = (r * b).truncated(cap);
            k >>= 1;
            if (k) b = (b * b).truncated(cap);
        }
        return r;
    }

    /// tau^k: constants to the q^k, variables fixed, u^j -> u^{q^k j}.
    TateSeries twist(long long k, long long cap = kExact) const {
        if (k == 0) return truncated(cap);
        long long Q = ipow(ctx_->q, static_cast<int>(k));
        long long prec = prec_ >= kExact ? kExact : prec_ * Q;
        prec = std::min(prec, cap);
        TateSeries r(ctx_, prec);
        for (long long e = lo_; e < hi(); ++e) {
            const Coef& c = c_[static_cast<std::size_t>(e - lo_)];
            if (c.is_zero() || e * Q >= prec) continue;
            r.set(e * Q, c.frob(k));
        }
        return r;
    }

    /// Applies `fn` to every coefficient.
    template <class Fn>
    TateSeries map(Fn fn) const {
        TateSeries r(*this);
        for (auto& c : r.c_) if (!c.is_zero()) c = fn(c);
        r.tidy();
        return r;
    }

    /// Ordered (exponent, coefficient) pairs with nonzero coefficients.
    std::vector<std::pair<long long, Coef>> terms() const {
        std::vector<std::pair<long long, Coef>> out;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) out.push_back({lo_ + static_cast<long long>(i), c_[i]});
        return out;
    }

private:
    static TateSeries add(const TateSeries& a, const TateSeries& b, bool subtract) {
        const SeriesCtxPtr& ctx = a.ctx_ ? a.ctx_ : b.ctx_;
        TateSeries r(ctx, std::min(a.prec_, b.prec_));
        long long lo = std::min(a.c_.empty() ? b.lo_ : a.lo_, b.c_.empty() ? a.lo_ : b.lo_);
        long long hi = std::min(std::max(a.hi(), b.hi()), r.prec_);
        if (hi <= lo) return r;
        r.lo_ = lo;
        r.c_.assign(static_cast<std::size_t>(hi - lo), Coef());
        for (long long e = std::max(lo, a.lo_); e < std::min(hi, a.hi()); ++e)
            r.c_[static_cast<std::size_t>(e - lo)] = a.c_[static_cast<std::size_t>(e - a.lo_)];
        for (long long e = std::max(lo, b.lo_); e < std::min(hi, b.hi()); ++e) {
            auto& slot = r.c_[static_cast<std::size_t>(e - lo)];
            const Coef& c = b.c_[static_cast<std::size_t>(e - b.lo_)];
            if (c.is_zero()) continue;
            slot = subtract ? slot - c : slot + c;
        }
        r.tidy();
        return r;
    }
    void tidy() {
        std::size_t first = 0;
        while (first < c_.size() && c_[first].is_zero()) ++first;
        if (first == c_.size()) {
            c_.clear();
            lo_ = 0;
            return;
        }
        std::size_t last = c_.size();
        while (last > first && c_[last - 1].is_zero()) --last;
        if (first > 0 || last < c_.size()) {
            c_ = std::vector<Coef>(c_.begin() + static_cast<std::ptrdiff_t>(first),
                                   c_.begin() + static_cast<std::ptrdiff_t>(last));
            lo_ += static_cast<long long>(first);
        }
    }

    SeriesCtxPtr ctx_;
    long long lo_ = 0;
    std::vector<Coef> c_;
    long long prec_ = kExact;
};

/// a / b with cap, as a free function.
inline TateSeries sdiv(const TateSeries& a, const TateSeries& b, long long cap = kExact) {
    return TateSeries::div(a, b, cap);
}

/// Residual check: true when the series vanishes up to u^n (and is known that far).
inline bool vanishes_to(const TateSeries& s, long long n) { return s.prec() >= n && s.valuation_or_prec() >= n; }

/// Evaluates a polynomial with coefficients in F_p or F_{q^d} at a series.
inline TateSeries poly_at(const FPoly& p, const TateSeries& X) {
    const auto& ctx = X.ctx();
    TateSeries acc(ctx, kExact);
    for (int i = p.degree(); i >= 0; --i)
        acc = acc * X + TateSeries::constant(ctx, to_field(p.coeff(i), ctx->F.get()));
    return acc;
}
/// Rational function at a series, precision capped.
inline TateSeries ratfn_at(const RatFn& r, const TateSeries& X, long long cap) {
    TateSeries n = poly_at(r.num(), X);
    if (r.is_poly()) return n.truncated(cap);
    return sdiv(n, poly_at(r.den(), X), cap);
}

/// Product of factors 1 + O(u^{m_i}) with m_i strictly increasing, to precision n.
/// `factor(i)` returns factor i; consumption stops once m_i >= n.
inline TateSeries inf_product(const SeriesCtxPtr& ctx, const std::function<TateSeries(int)>& factor, long long n,
                              int max_factors = 4096) {
    TateSeries acc = TateSeries::one(ctx, n);
    long long last_m = 0;
    for (int i = 0; i < max_factors; ++i) {
        TateSeries f = factor(i);
        TateSeries t = f - TateSeries::one(ctx);
        long long m = t.valuation_or_prec();
        if (m <= 0) throw std::invalid_argument("inf_product: factor " + std::to_string(i) + " is not 1 + O(u)");
        if (m >= n) return acc.truncated(n);
        if (i > 0 && m <= last_m)
            throw std::invalid_argument("inf_product: factor valuations stalled at factor " + std::to_string(i));
        last_m = m;
        acc = (acc * f).truncated(n);
    }
    throw std::runtime_error("inf_product: factor stream did not reach the target precision");
}

/**
 * Newton iteration for a simple root of E(Y) = sum E[i] Y^i near `seed`.
 * Requires v(E(seed)) > 2 v(E'(seed)).
 */
inline TateSeries hensel_root(const std::vector<TateSeries>& E, const TateSeries& seed, long long n) {
    if (E.empty()) throw std::invalid_argument("hensel_root: empty equation");
    const auto& ctx = seed.ctx();
    const int p = ctx->F->characteristic();
    auto evalE = [&](const TateSeries& y) {
        TateSeries acc(ctx, kExact);
        for (int i = static_cast<int>(E.size()) - 1; i >= 0; --i) acc = (acc * y + E[i]).truncated(n + 1);
        return acc;
    };
    auto evalD = [&](const TateSeries& y) {
        TateSeries acc(ctx, kExact);
        for (int i = static_cast<int>(E.size()) - 1; i >= 1; --i) {
            TateSeries term = FE::from_int(ctx->F, i % p) * E[i];
            acc = (acc * y + term).truncated(n + 1);
        }
        return acc;
    };
    TateSeries y = seed;
    TateSeries e0 = evalE(y), d0 = evalD(y);
    long long vd = d0.valuation_or_prec();
    if (vd >= d0.prec() || e0.valuation_or_prec() <= 2 * vd)
        throw std::domain_error("hensel_root: simple-root condition fails at the seed");
    for (int it = 0; it < 200; ++it) {
        TateSeries e = evalE(y);
        if (vanishes_to(e, n)) return y.truncated(n);
        TateSeries step = sdiv(e, evalD(y), n);
        y = (y - step).truncated(n);
    }
    throw std::runtime_error("hensel_root: no convergence");
}

/// Valuation and leading coefficient.
struct SgnLead {
    long long uexp = 0;       // in u-units
    long long num = 0, den = 1;  // valuation in pi-units, reduced
    Coef lead;
};
inline SgnLead sgn_lead(const TateSeries& s) {
    SgnLead r;
    r.uexp = s.valuation();
    long long N = s.ctx()->N();
    long long g = std::gcd(r.uexp < 0 ? -r.uexp : r.uexp, N);
    if (g == 0) g = 1;
    r.num = r.uexp / g;
    r.den = N / g;
    r.lead = s.coeff(r.uexp);
    return r;
}
/// sgn of an element of K_inf(F_{q^d}): c u^{kN} has sign c (-1)^k.
inline FE paper_sgn(const TateSeries& s) {
    SgnLead l = sgn_lead(s);
    long long N = s.ctx()->N();
    if (l.uexp % N != 0) throw std::domain_error("paper_sgn: valuation is not an integer in pi-units");
    if (!l.lead.is_constant()) throw std::domain_error("paper_sgn: leading coefficient is not a constant");
    FE c = to_field(l.lead.constant_term(), s.ctx()->F.get());
    long long k = l.uexp / N;
    return (k % 2 == 0) ? c : -c;
}

/// c with a = c b on all coefficients known in both, for variable-free series over
/// contexts sharing q, d and u (possibly built independently). nullopt if none exists.
inline std::optional<FE> unit_ratio(const TateSeries& a, const TateSeries& b) {
    const GF* F = a.ctx()->F.get();
    long long n = std::min(a.prec(), b.prec());
    if (n >= kExact) throw std::invalid_argument("unit_ratio: both series exact");
    auto val = [F](const Coef& c) {
        if (c.is_zero()) return FE(F, 0);
        if (!c.is_constant()) throw std::domain_error("unit_ratio: series has variables");
        return to_field(c.constant_term(), F);
    };
    long long vb = b.valuation();
    if (vb >= n) return std::nullopt;
    FE r = val(a.coeff(vb)) * val(b.coeff(vb)).inv();
    long long lo = std::min(a.lo(), b.lo());
    for (long long e = lo; e < n; ++e)
        if (val(a.coeff(e)) != r * val(b.coeff(e))) return std::nullopt;
    if (r.is_zero()) return std::nullopt;
    return r;
}

struct IntegralityReport {
    bool ok = true;
    long long witness = 0;   // first offending exponent
};
/// Every coefficient's reduced denominator must use only the allowed atoms (var, k).
inline IntegralityReport integrality_check(const TateSeries& s, const std::vector<std::pair<int, int>>& allowed) {
    IntegralityReport rep;
    const auto& vs = s.ctx()->vs;
    for (const auto& [e, c] : s.terms()) {
        if (!c.has_den()) continue;
        Coef n = c.normalized();
        for (int v = 0; v < vs->nvars(); ++v)
            for (int k = 0; k < vs->d; ++k) {
                if (!n.has_den() || n.den_exp(v, k) == 0) continue;
                bool ok = std::find(allowed.begin(), allowed.end(), std::make_pair(v, k)) != allowed.end();
                if (!ok) {
                    rep.ok = false;
                    rep.witness = e;
                    return rep;
                }
            }
    }
    return rep;
}

/// JSON form {context, precision, terms}; see to_string(Coef) for the coefficient grammar.
inline nlohmann::json to_json(const TateSeries& s) {
    const auto& c = *s.ctx();
    nlohmann::json ctx;
    ctx["q"] = c.q;
    ctx["d_inf"] = c.d;
    ctx["p"] = c.F->characteristic();
    ctx["e"] = c.F->degree();
    ctx["modulus"] = c.F->modulus();
    ctx["vars"] = c.vs->names;
    ctx["atoms"] = c.vs->d;
    ctx["zeta"] = c.zeta.value();
    nlohmann::json j;
    j["context"] = ctx;
    if (s.exact()) j["precision"] = "exact";
    else j["precision"] = s.prec();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, coef] : s.terms()) {
        Coef nc = coef.normalized();
        if (nc.is_zero()) continue;
        terms.push_back({e, to_string(nc)});
    }
    j["terms"] = terms;
    return j;
}

inline TateSeries series_from_json(const nlohmann::json& j) {
    const auto& cj = j.at("context");
    int q = cj.at("q"), d = cj.at("d_inf"), p = cj.at("p"), e = cj.at("e");
    int base = 0;
    for (long long t = 1; t < q; t *= p) ++base;
    if (ipow(p, base) != q || e % base != 0) throw std::invalid_argument("series_from_json: inconsistent q, p, e");
    Field F = make_field(p, e, base);
    if (cj.at("modulus").get<std::vector<int>>() != F->modulus())
        throw std::invalid_argument("series_from_json: modulus differs from the canonical choice");
    FE zeta(F, cj.at("zeta").get<std::uint32_t>());
    int atoms = cj.at("atoms");
    std::vector<FE> roots;
    for (int k = 0; k < atoms; ++k) roots.push_back(frobenius(zeta, k));
    auto vs = make_varspace(cj.at("vars").get<std::vector<std::string>>(), F, roots);
    auto ctx = make_series_context(q, d, F, vs, zeta);
    long long prec = j.at("precision").is_string() ? kExact : j.at("precision").get<long long>();
    TateSeries s(ctx, prec);
    for (const auto& t : j.at("terms")) s.set(t.at(0).get<long long>(), parse_coef(t.at(1).get<std::string>(), vs, F));
    return s;
}

}  // namespace drinfeld
