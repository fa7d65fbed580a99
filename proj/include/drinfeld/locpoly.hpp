#pragma once

/**
 * @file locpoly.hpp
 * @brief Sparse polynomials in up to four "motivic" variables, localized at the
 * atoms (z_v - r_k) where r_k = zeta^{q^k} runs over a Frobenius orbit.
 *
 * A value is numerator / prod (z_v - r_k)^{e_{v,k}}. The numerator is a sorted
 * list of (monomial, coefficient) pairs with nonzero coefficients; monomials
 * pack four 16-bit exponents into one 64-bit word. Frobenius on constants
 * shifts the atom index k -> k + 1 (mod d), which keeps the representation
 * closed under the twist.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/ratfn.hpp"

namespace drinfeld {

inline constexpr int kMaxVars = 4;
inline constexpr int kMaxAtoms = 16;

/// Variable names and the atom roots shared by a family of LocPoly values.
struct VarSpace {
    std::vector<std::string> names;
    int d = 0;               // atoms per variable (0: plain polynomials)
    std::vector<FE> roots;   // roots[k] = zeta^{q^k}, k < d
    const GF* field = nullptr;

    int nvars() const { return static_cast<int>(names.size()); }
};
using VarSpacePtr = std::shared_ptr<const VarSpace>;

inline VarSpacePtr make_varspace(std::vector<std::string> names, const Field& field, std::vector<FE> roots = {}) {
    if (names.size() > static_cast<std::size_t>(kMaxVars)) throw std::invalid_argument("VarSpace: at most 4 variables");
    if (names.size() * roots.size() > static_cast<std::size_t>(kMaxAtoms))
        throw std::invalid_argument("VarSpace: too many atoms");
    auto v = std::make_shared<VarSpace>();
    v->names = std::move(names);
    v->d = static_cast<int>(roots.size());
    v->roots = std::move(roots);
    v->field = field.get();
    return v;
}

using Mono = std::uint64_t;
inline int mono_exp(Mono m, int v) { return static_cast<int>((m >> (16 * v)) & 0xffff); }
inline Mono mono_var(int v, int e = 1) { return static_cast<Mono>(e) << (16 * v); }
inline Mono mono_clear(Mono m, int v) { return m & ~(Mono{0xffff} << (16 * v)); }

template <class R>
class LocPoly {
public:
    using Term = std::pair<Mono, R>;

    LocPoly() = default;
    LocPoly(int k) { if (k != 0) t_.push_back({0, R(k)}); }  // NOLINT(google-explicit-constructor)
    LocPoly(const R& c) { if (!drinfeld::is_zero(c)) t_.push_back({0, c}); }  // NOLINT
    LocPoly(VarSpacePtr vs, std::vector<Term> terms) : vs_(std::move(vs)), t_(std::move(terms)) { canon_terms(); }

    static R one(const VarSpacePtr& vs) { return (vs && vs->field) ? R(FE(vs->field, 1)) : R(1); }
    static LocPoly var(VarSpacePtr vs, int v) {
        R c = one(vs);
        return LocPoly(std::move(vs), {{mono_var(v), c}});
    }
    static LocPoly constant(VarSpacePtr vs, const R& c) {
        LocPoly r(c);
        r.vs_ = std::move(vs);
        return r;
    }
    /// (z_v - r_k)^{-e}
    static LocPoly atom_inv(VarSpacePtr vs, int v, int k, int e = 1) {
        LocPoly r = constant(vs, one(vs));
        r.den_[v * vs->d + k] = static_cast<std::uint16_t>(e);
        return r;
    }
    /// z_v - r_k as a polynomial.
    static LocPoly atom(VarSpacePtr vs, int v, int k) {
        LocPoly r = var(vs, v);
        return r - constant(vs, R(vs->roots[k]));
    }

    const VarSpacePtr& space() const { return vs_; }
    const std::vector<Term>& terms() const { return t_; }
    int den_exp(int v, int k) const { return den_[v * vs_->d + k]; }
    bool is_zero() const { return t_.empty(); }
    bool has_den() const {
        for (auto e : den_) if (e) return true;
        return false;
    }
    bool is_constant() const { return !has_den() && (t_.empty() || (t_.size() == 1 && t_[0].first == 0)); }
    R constant_term() const { return (!t_.empty() && t_[0].first == 0) ? t_[0].second : R(0); }
    int degree(int v) const {
        int m = -1;
        for (const auto& [mo, c] : t_) m = std::max(m, mono_exp(mo, v));
        return m;
    }

    friend LocPoly operator+(const LocPoly& a, const LocPoly& b) { return combine(a, b, false); }
    friend LocPoly operator-(const LocPoly& a, const LocPoly& b) { return combine(a, b, true); }
    LocPoly operator-() const {
        LocPoly r(*this);
        for (auto& tc : r.t_) tc.second = -tc.second;
        return r;
    }
    friend LocPoly operator*(const LocPoly& a, const LocPoly& b) {
        LocPoly r;
        r.vs_ = a.vs_ ? a.vs_ : b.vs_;
        if (a.is_zero() || b.is_zero()) return r;
        for (int i = 0; i < kMaxAtoms; ++i) r.den_[i] = static_cast<std::uint16_t>(a.den_[i] + b.den_[i]);
        r.t_ = mul_terms(a.t_, b.t_);
        return r;
    }
    friend LocPoly operator*(const R& s, const LocPoly& a) {
        LocPoly r(a);
        if (drinfeld::is_zero(s)) { r.t_.clear(); r.den_ = {}; return r; }
        for (auto& tc : r.t_) tc.second = s * tc.second;
        r.canon_terms();
        return r;
    }
    LocPoly& operator+=(const LocPoly& o) { return *this = *this + o; }
    LocPoly& operator-=(const LocPoly& o) { return *this = *this - o; }
    LocPoly& operator*=(const LocPoly& o) { return *this = *this * o; }

    friend bool operator==(const LocPoly& a, const LocPoly& b) { return (a - b).is_zero(); }
    friend bool operator!=(const LocPoly& a, const LocPoly& b) { return !(a == b); }

    /// Inverse of a unit c * prod atoms^{e}; throws for anything else.
    LocPoly inv() const {
        if (is_zero()) throw std::domain_error("LocPoly: inverse of zero");
        LocPoly n = *this;
        n.den_ = {};
        std::array<std::uint16_t, kMaxAtoms> extracted{};
        auto is_const = [&n] { return n.t_.size() == 1 && n.t_[0].first == 0; };
        if (vs_) {
            for (int v = 0; v < vs_->nvars(); ++v)
                for (int k = 0; k < vs_->d; ++k)
                    while (!is_const() && n.divide_atom(v, k)) ++extracted[v * vs_->d + k];
        }
        if (n.t_.size() != 1 || n.t_[0].first != 0)
            throw std::domain_error("LocPoly: element is not a unit of the localized ring");
        LocPoly r = constant(vs_, n.t_[0].second.inv());
        for (int i = 0; i < kMaxAtoms; ++i)
            if (den_[i]) r = r * atom_power(i, den_[i]);
        r.den_ = extracted;
        return r;
    }
    bool is_unit() const {
        try { (void)inv(); return true; } catch (const std::domain_error&) { return false; }
    }

    LocPoly pow(long long k) const {
        LocPoly r = constant(vs_, one(vs_)), b = *this;
        if (k < 0) { b = inv(); k = -k; }
        while (k > 0) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    /// Coefficients through frob(., k); atoms shift k -> k + shift.
    LocPoly frob(long long k) const { return map_coeffs([k](const R& c) { return drinfeld::frob(c, k); }, k); }
    LocPoly frob_const(long long k) const {
        return map_coeffs([k](const R& c) { return drinfeld::frob_const(c, k); }, k);
    }
    /// Applies `fn` to every coefficient and shifts atoms by `shift`.
    template <class Fn>
    LocPoly map_coeffs(Fn fn, long long shift) const {
        LocPoly r;
        r.vs_ = vs_;
        r.t_.reserve(t_.size());
        for (const auto& [m, c] : t_) r.t_.push_back({m, fn(c)});
        r.canon_terms();
        if (vs_ && vs_->d > 0) {
            int d = vs_->d;
            int s = static_cast<int>(((shift % d) + d) % d);
            for (int v = 0; v < vs_->nvars(); ++v)
                for (int k = 0; k < d; ++k) r.den_[v * d + (k + s) % d] = den_[v * d + k];
        } else {
            r.den_ = den_;
        }
        if (r.t_.empty()) r.den_ = {};
        return r;
    }

    /// Substitutes every variable; values must avoid the atom roots.
    template <class T>
    T eval(const std::vector<T>& vals) const {
        T acc = T(0);
        for (const auto& [m, c] : t_) {
            T term = T(c);
            for (int v = 0; v < kMaxVars; ++v) {
                int e = mono_exp(m, v);
                for (int i = 0; i < e; ++i) term = term * vals[v];
            }
            acc = acc + term;
        }
        if (!has_den()) return acc;
        T den = T(1);
        for (int v = 0; v < vs_->nvars(); ++v)
            for (int k = 0; k < vs_->d; ++k) {
                int e = den_[v * vs_->d + k];
                if (!e) continue;
                T a = vals[v] - T(vs_->roots[k]);
                for (int i = 0; i < e; ++i) den = den * a;
            }
        return acc / den;
    }

    /// Relabels variables into another space (var v -> map[v]).
    LocPoly relabel(VarSpacePtr target, const std::vector<int>& map) const {
        LocPoly r;
        r.vs_ = target;
        for (const auto& [m, c] : t_) {
            Mono nm = 0;
            for (int v = 0; v < kMaxVars; ++v)
                if (int e = mono_exp(m, v)) nm += mono_var(map[v], e);
            r.t_.push_back({nm, c});
        }
        r.canon_terms();
        if (vs_)
            for (int v = 0; v < vs_->nvars(); ++v)
                for (int k = 0; k < vs_->d; ++k) r.den_[map[v] * target->d + k] = den_[v * vs_->d + k];
        return r;
    }

    /// Cancels every atom that divides the numerator. After this the
    /// representation is canonical.
    LocPoly normalized() const {
        LocPoly r(*this);
        if (!vs_ || r.is_zero()) { r.den_ = {}; return r; }
        for (int v = 0; v < vs_->nvars(); ++v)
            for (int k = 0; k < vs_->d; ++k)
                while (r.den_[v * vs_->d + k] > 0 && r.divide_atom(v, k)) --r.den_[v * vs_->d + k];
        return r;
    }

    /// Multiplies the numerator by (z_v - r_k)^e without touching the denominator.
    LocPoly times_atom_power(int v, int k, int e) const {
        LocPoly r(*this);
        r.t_ = mul_terms(t_, atom_power(v * vs_->d + k, e).t_);
        return r;
    }
    void set_den(int v, int k, int e) { den_[v * vs_->d + k] = static_cast<std::uint16_t>(e); }
    const std::array<std::uint16_t, kMaxAtoms>& den_array() const { return den_; }
    /// Numerator as a plain polynomial (denominator dropped).
    LocPoly numerator() const {
        LocPoly r(*this);
        r.den_ = {};
        return r;
    }
    /// Returns this value rewritten over the denominator `den` (componentwise >=
    /// the own one); only the numerator of the result is meaningful.
    LocPoly numerator_over(const std::array<std::uint16_t, kMaxAtoms>& den) const {
        LocPoly r(*this);
        for (int i = 0; i < kMaxAtoms; ++i) {
            if (den[i] < den_[i]) throw std::logic_error("LocPoly: denominator not a multiple");
            if (den[i] > den_[i]) r.t_ = mul_terms(r.t_, atom_power(i, den[i] - den_[i]).t_);
        }
        r.den_ = den;
        return r;
    }

private:
    void canon_terms() {
        std::sort(t_.begin(), t_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        std::vector<Term> out;
        out.reserve(t_.size());
        for (auto& tc : t_) {
            if (!out.empty() && out.back().first == tc.first) out.back().second = out.back().second + tc.second;
            else out.push_back(std::move(tc));
        }
        std::vector<Term> nz;
        nz.reserve(out.size());
        for (auto& tc : out)
            if (!drinfeld::is_zero(tc.second)) nz.push_back(std::move(tc));
        t_ = std::move(nz);
        if (t_.empty()) den_ = {};
    }

    static std::vector<Term> mul_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
        std::vector<Term> r;
        if (a.empty() || b.empty()) return r;
        if (a.size() == 1 && a[0].first == 0) {
            for (const auto& [m, c] : b) {
                R p = a[0].second * c;
                if (!drinfeld::is_zero(p)) r.push_back({m, p});
            }
            return r;
        }
        if (b.size() == 1 && b[0].first == 0) return mul_terms(b, a);
        r.reserve(a.size() * b.size());
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) r.push_back({ma + mb, ca * cb});
        LocPoly tmp;
        tmp.t_ = std::move(r);
        tmp.canon_terms();
        return std::move(tmp.t_);
    }

    // (z_v - r_k)^e as a numerator, atom index i = v * d + k.
    LocPoly atom_power(int i, int e) const {
        int v = i / vs_->d, k = i % vs_->d;
        LocPoly base = atom(vs_, v, k);
        LocPoly r = constant(vs_, one(vs_));
        for (int j = 0; j < e; ++j) r = r * base;
        return r;
    }

    static LocPoly combine(const LocPoly& a, const LocPoly& b, bool subtract) {
        VarSpacePtr vs = a.vs_ ? a.vs_ : b.vs_;
        if (a.is_zero()) {
            LocPoly r = subtract ? -b : b;
            r.vs_ = vs;
            return r;
        }
        if (b.is_zero()) {
            LocPoly r = a;
            r.vs_ = vs;
            return r;
        }
        LocPoly r;
        r.vs_ = vs;
        std::vector<Term> ta = a.t_, tb = b.t_;
        if (a.den_ != b.den_) {
            for (int i = 0; i < kMaxAtoms; ++i) {
                int e = std::max(a.den_[i], b.den_[i]);
                if (e > a.den_[i]) ta = mul_terms(ta, a.atom_power_vs(vs, i, e - a.den_[i]));
                if (e > b.den_[i]) tb = mul_terms(tb, a.atom_power_vs(vs, i, e - b.den_[i]));
                r.den_[i] = static_cast<std::uint16_t>(e);
            }
        } else {
            r.den_ = a.den_;
        }
        // Merge of two sorted term lists.
        std::vector<Term> out;
        out.reserve(ta.size() + tb.size());
        std::size_t i = 0, j = 0;
        while (i < ta.size() || j < tb.size()) {
            if (j == tb.size() || (i < ta.size() && ta[i].first < tb[j].first)) {
                out.push_back(ta[i++]);
            } else if (i == ta.size() || tb[j].first < ta[i].first) {
                out.push_back({tb[j].first, subtract ? -tb[j].second : tb[j].second});
                ++j;
            } else {
                R c = subtract ? ta[i].second - tb[j].second : ta[i].second + tb[j].second;
                if (!drinfeld::is_zero(c)) out.push_back({ta[i].first, c});
                ++i;
                ++j;
            }
        }
        r.t_ = std::move(out);
        if (r.t_.empty()) r.den_ = {};
        return r;
    }
    std::vector<Term> atom_power_vs(const VarSpacePtr& vs, int i, int e) const {
        LocPoly tmp;
        tmp.vs_ = vs;
        return tmp.atom_power(i, e).t_;
    }

    // Divides the numerator by (z_v - r_k) if exact; returns false otherwise.
    bool divide_atom(int v, int k) {
        R r(vs_->roots[k]);
        // Group by the monomial with variable v removed; synthetic division in z_v.
        std::vector<Term> sorted = t_;
        std::sort(sorted.begin(), sorted.end(), [v](const Term& a, const Term& b) {
            Mono ra = mono_clear(a.first, v), rb = mono_clear(b.first, v);
            if (ra != rb) return ra < rb;
            return mono_exp(a.first, v) > mono_exp(b.first, v);
        });
        std::vector<Term> out;
        std::size_t i = 0;
        while (i < sorted.size()) {
            Mono rest = mono_clear(sorted[i].first, v);
            int top = mono_exp(sorted[i].first, v);
            std::vector<R> c(static_cast<std::size_t>(top) + 1, R(0));
            while (i < sorted.size() && mono_clear(sorted[i].first, v) == rest) {
                c[mono_exp(sorted[i].first, v)] = sorted[i].second;
                ++i;
            }
            // c(z) / (z - r): quotient coefficients from the top.
            R carry(0);
            std::vector<R> qc(top > 0 ? top : 0, R(0));
            for (int e = top; e >= 1; --e) {
                carry = c[e] + carry * r;
                qc[e - 1] = carry;
            }
            R rem = c[0] + carry * r;
            if (!drinfeld::is_zero(rem)) return false;
            for (int e = 0; e < static_cast<int>(qc.size()); ++e)
                if (!drinfeld::is_zero(qc[e])) out.push_back({rest + mono_var(v, e), qc[e]});
        }
        t_ = std::move(out);
        canon_terms_keep_den();
        return true;
    }
    void canon_terms_keep_den() {
        auto den = den_;
        canon_terms();
        den_ = den;
    }

    VarSpacePtr vs_;
    std::vector<Term> t_;
    std::array<std::uint16_t, kMaxAtoms> den_{};
};

using Coef = LocPoly<FE>;
using ZFrac = LocPoly<RatFn>;

inline std::string mono_string(Mono m, const VarSpace& vs) {
    std::string s;
    for (int v = 0; v < vs.nvars(); ++v) {
        int e = mono_exp(m, v);
        if (!e) continue;
        if (!s.empty()) s += "*";
        s += vs.names[v];
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

/**
 * Canonical text of a series coefficient.
 *
 *   coef  := num [ "/" atoms ]
 *   num   := "0" | term { " + " term }
 *   term  := int [ "*" mono ]          (int = encoded field element)
 *   mono  := var [ "^" int ] { "*" var [ "^" int ] }
 *   atoms := atom { "*" atom }
 *   atom  := "(" var "-r" k ")" [ "^" int ]   (r k stands for zeta^{q^k})
 *
 * Terms are ordered by packed monomial, atoms by (variable, k).
 */
inline std::string to_string(const Coef& c0) {
    Coef c = c0.normalized();
    if (c.is_zero()) return "0";
    const VarSpace* vs = c.space().get();
    std::string s;
    for (const auto& [m, a] : c.terms()) {
        if (!s.empty()) s += " + ";
        s += std::to_string(a.value());
        if (m) s += "*" + mono_string(m, *vs);
    }
    if (c.has_den()) {
        std::string d;
        for (int v = 0; v < vs->nvars(); ++v)
            for (int k = 0; k < vs->d; ++k) {
                int e = c.den_exp(v, k);
                if (!e) continue;
                if (!d.empty()) d += "*";
                d += "(" + vs->names[v] + "-r" + std::to_string(k) + ")";
                if (e > 1) d += "^" + std::to_string(e);
            }
        s += "/" + d;
    }
    return s;
}

/// Parses the grammar above. Field elements are attached to `f`.
inline Coef parse_coef(const std::string& s, const VarSpacePtr& vs, const Field& f) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("parse_coef: " + why + " at offset " + std::to_string(pos) + " in '" + s + "'");
    };
    auto skip_ws = [&] { while (pos < s.size() && s[pos] == ' ') ++pos; };
    auto read_int = [&]() -> long long {
        skip_ws();
        std::size_t st = pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (st == pos) fail("expected integer");
        return std::stoll(s.substr(st, pos - st));
    };
    auto read_var = [&]() -> int {
        skip_ws();
        for (int v = 0; v < vs->nvars(); ++v) {
            const auto& n = vs->names[v];
            if (s.compare(pos, n.size(), n) == 0) {
                std::size_t after = pos + n.size();
                if (after < s.size() && isalnum(static_cast<unsigned char>(s[after]))) continue;
                pos = after;
                return v;
            }
        }
        fail("unknown variable");
        return -1;
    };
    std::vector<Coef::Term> terms;
    skip_ws();
    if (s.compare(pos, 1, "0") == 0 && (pos + 1 == s.size())) return Coef::constant(vs, FE(f, 0));
    while (true) {
        long long c = read_int();
        if (c < 0 || c >= static_cast<long long>(f->size())) fail("coefficient out of range");
        Mono m = 0;
        skip_ws();
        while (pos < s.size() && s[pos] == '*') {
            ++pos;
            int v = read_var();
            int e = 1;
            if (pos < s.size() && s[pos] == '^') { ++pos; e = static_cast<int>(read_int()); }
            m += mono_var(v, e);
            skip_ws();
        }
        terms.push_back({m, FE(f, static_cast<std::uint32_t>(c))});
        skip_ws();
        if (pos < s.size() && s[pos] == '+') { ++pos; continue; }
        break;
    }
    Coef r(vs, std::move(terms));
    skip_ws();
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        while (true) {
            skip_ws();
            if (pos >= s.size() || s[pos] != '(') fail("expected atom");
            ++pos;
            int v = read_var();
            if (s.compare(pos, 2, "-r") != 0) fail("expected -r");
            pos += 2;
            int k = static_cast<int>(read_int());
            if (k >= vs->d) fail("atom index out of range");
            if (pos >= s.size() || s[pos] != ')') fail("expected )");
            ++pos;
            int e = 1;
            if (pos < s.size() && s[pos] == '^') { ++pos; e = static_cast<int>(read_int()); }
            r.set_den(v, k, r.den_exp(v, k) + e);
            skip_ws();
            if (pos < s.size() && s[pos] == '*') { ++pos; continue; }
            break;
        }
    }
    skip_ws();
    if (pos != s.size()) fail("trailing characters");
    return r;
}

}  // namespace drinfeld
