#pragma once

/**
 * @file field.hpp
 * @brief Table-driven arithmetic in finite fields F_{p^e}.
 *
 * An element of F_{p^e} is stored as the integer encoding sum c_i p^i of its
 * canonical representative c_0 + c_1 a + ... + c_{e-1} a^{e-1}, where a is a
 * root of the modulus. The modulus is the lexicographically least monic
 * irreducible of degree e (ordered by the same encoding of its lower
 * coefficients), so every field, and everything built on top of it, is
 * bit-reproducible.
 *
 * Fields are limited to p^e <= 2^16 so log/antilog tables stay small.
 */

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace drinfeld {

class GF;
using Field = std::shared_ptr<const GF>;

inline constexpr std::uint32_t kMaxFieldSize = 1u << 16;

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

class GF {
public:
    /// Builds F_{p^e}. `base_degree` fixes the Frobenius q = p^{base_degree}
    /// used by frob(); it must divide e.
    GF(int p, int e, int base_degree = 1) : p_(p), e_(e), base_deg_(base_degree) {
        if (!is_prime(p)) throw std::invalid_argument("make_field: p = " + std::to_string(p) + " is not prime");
        if (e < 1) throw std::invalid_argument("make_field: extension degree must be >= 1");
        if (base_degree < 1 || e % base_degree != 0)
            throw std::invalid_argument("make_field: base degree must divide the extension degree");
        std::uint64_t sz = 1;
        for (int i = 0; i < e; ++i) {
            sz *= static_cast<std::uint64_t>(p);
            if (sz > kMaxFieldSize) throw std::invalid_argument("make_field: p^e exceeds 2^16");
        }
        size_ = static_cast<std::uint32_t>(sz);
        pow_p_.resize(e + 1, 1);
        for (int i = 1; i <= e; ++i) pow_p_[i] = pow_p_[i - 1] * static_cast<std::uint32_t>(p);
        choose_modulus();
        build_tables();
    }

    int characteristic() const { return p_; }
    int degree() const { return e_; }
    int base_degree() const { return base_deg_; }
    std::uint32_t size() const { return size_; }
    /// q = p^{base_degree}
    std::uint32_t base_size() const { return pow_p_[base_deg_]; }
    /// Lower coefficients c_0..c_{e-1} of the monic modulus (empty meaning for e = 1: X).
    const std::vector<int>& modulus() const { return modulus_; }
    std::uint32_t generator() const { return gen_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        if (p_ == 2) return a ^ b;
        if (!add_table_.empty()) return add_table_[a * size_ + b];
        return add_digits(a, b);
    }
    std::uint32_t neg(std::uint32_t a) const {
        if (p_ == 2) return a;
        std::uint32_t r = 0;
        for (int i = 0; i < e_; ++i) {
            std::uint32_t d = (a / pow_p_[i]) % p_;
            r += ((p_ - d) % p_) * pow_p_[i];
        }
        return r;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        std::uint32_t s = log_[a] + log_[b];
        if (s >= size_ - 1) s -= size_ - 1;
        return exp_[s];
    }
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("finite field: inverse of zero");
        std::uint32_t l = log_[a];
        return exp_[l == 0 ? 0 : (size_ - 1) - l];
    }
    std::uint32_t pow(std::uint32_t a, long long k) const {
        if (a == 0) {
            if (k == 0) return 1;
            if (k < 0) throw std::domain_error("finite field: negative power of zero");
            return 0;
        }
        long long ord = size_ - 1;
        long long l = (static_cast<long long>(log_[a]) * (((k % ord) + ord) % ord)) % ord;
        return exp_[static_cast<std::uint32_t>(l)];
    }
    /// Discrete logarithm to the table generator.
    std::uint32_t dlog(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("finite field: log of zero");
        return log_[a];
    }
    std::uint32_t from_int(long long k) const {
        long long r = ((k % p_) + p_) % p_;
        return static_cast<std::uint32_t>(r);
    }
    /// x^{p^k}
    std::uint32_t frob_p(std::uint32_t a, long long k) const {
        if (a == 0) return 0;
        long long ord = size_ - 1;
        long long l = log_[a];
        long long kk = ((k % e_) + e_) % e_;
        for (long long i = 0; i < kk; ++i) l = (l * p_) % ord;
        return exp_[static_cast<std::uint32_t>(l)];
    }
    /// x^{q^k} with q the designated base.
    std::uint32_t frob(std::uint32_t a, long long k) const { return frob_p(a, k * base_deg_); }

    /// Digit c_i of the representative.
    int digit(std::uint32_t a, int i) const { return static_cast<int>((a / pow_p_[i]) % p_); }

private:
    std::uint32_t add_digits(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t r = 0;
        for (int i = 0; i < e_; ++i) {
            std::uint32_t d = ((a / pow_p_[i]) % p_ + (b / pow_p_[i]) % p_) % p_;
            r += d * pow_p_[i];
        }
        return r;
    }

    // Multiply two encoded polynomials modulo the modulus (slow path, table build only).
    std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
        std::vector<int> x(e_), y(e_), z(2 * e_, 0);
        for (int i = 0; i < e_; ++i) { x[i] = digit(a, i); y[i] = digit(b, i); }
        for (int i = 0; i < e_; ++i)
            for (int j = 0; j < e_; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p_;
        for (int k = 2 * e_ - 1; k >= e_; --k) {
            int c = z[k];
            if (c == 0) continue;
            z[k] = 0;
            // X^e = -sum m_i X^i
            for (int i = 0; i < e_; ++i)
                z[k - e_ + i] = ((z[k - e_ + i] - c * modulus_[i]) % p_ + p_) % p_;
        }
        std::uint32_t r = 0;
        for (int i = 0; i < e_; ++i) r += static_cast<std::uint32_t>(z[i]) * pow_p_[i];
        return r;
    }

    // Irreducibility of X^e + sum m_i X^i over F_p by trial division with all monic
    // polynomials of degree <= e/2.
    bool irreducible(const std::vector<int>& m) const {
        std::vector<int> f(m);
        f.push_back(1);
        for (int d = 1; d <= e_ / 2; ++d) {
            std::uint32_t count = 1;
            for (int i = 0; i < d; ++i) count *= p_;
            for (std::uint32_t code = 0; code < count; ++code) {
                std::vector<int> g(d + 1);
                std::uint32_t c = code;
                for (int i = 0; i < d; ++i) { g[i] = c % p_; c /= p_; }
                g[d] = 1;
                std::vector<int> r(f);
                for (int k = static_cast<int>(r.size()) - 1; k >= d; --k) {
                    int lc = r[k];
                    if (!lc) continue;
                    for (int i = 0; i <= d; ++i) r[k - d + i] = ((r[k - d + i] - lc * g[i]) % p_ + p_) % p_;
                }
                bool zero = true;
                for (int i = 0; i < d; ++i) zero = zero && r[i] == 0;
                if (zero) return false;
            }
        }
        return true;
    }

    void choose_modulus() {
        if (e_ == 1) {
            modulus_ = {0};
            return;
        }
        for (std::uint32_t code = 0; code < size_; ++code) {
            std::vector<int> m(e_);
            std::uint32_t c = code;
            for (int i = 0; i < e_; ++i) { m[i] = c % p_; c /= p_; }
            if (m[0] == 0) continue;
            if (irreducible(m)) { modulus_ = m; return; }
        }
        throw std::logic_error("make_field: no irreducible modulus found");
    }

    void build_tables() {
        log_.assign(size_, 0);
        exp_.assign(size_, 0);
        if (size_ == 2) {
            gen_ = 1;
            exp_[0] = 1;
            exp_[1] = 1;
            log_[1] = 0;
        } else {
            for (std::uint32_t cand = 2; cand < size_; ++cand) {
                std::uint32_t x = 1;
                std::uint32_t order = 0;
                do {
                    x = (e_ == 1) ? static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * cand) % p_)
                                  : slow_mul(x, cand);
                    ++order;
                } while (x != 1 && order < size_);
                if (order == size_ - 1) { gen_ = cand; break; }
            }
            std::uint32_t x = 1;
            for (std::uint32_t i = 0; i < size_ - 1; ++i) {
                exp_[i] = x;
                log_[x] = i;
                x = (e_ == 1) ? static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) * gen_) % p_)
                              : slow_mul(x, gen_);
            }
            exp_[size_ - 1] = 1;
        }
        if (p_ != 2 && size_ <= 256) {
            add_table_.resize(static_cast<std::size_t>(size_) * size_);
            for (std::uint32_t a = 0; a < size_; ++a)
                for (std::uint32_t b = 0; b < size_; ++b) add_table_[a * size_ + b] = add_digits(a, b);
        }
    }

    int p_, e_, base_deg_;
    std::uint32_t size_ = 0;
    std::vector<std::uint32_t> pow_p_;
    std::vector<int> modulus_;
    std::vector<std::uint32_t> log_, exp_, add_table_;
    std::uint32_t gen_ = 1;
};

inline Field make_field(int p, int e, int base_degree = 1) { return std::make_shared<const GF>(p, e, base_degree); }

/**
 * Element of a finite field. A default-constructed or integer-constructed FE
 * with no field attached is a "floating" integer constant; it adopts the field
 * of whatever it is combined with. This lets generic code write R(0), R(1).
 * The owning Field must outlive every FE that points into it.
 */
class FE {
public:
    FE() = default;
    FE(int k) : f_(nullptr), v_(static_cast<std::uint32_t>(k)), k_(k) {}  // NOLINT(google-explicit-constructor)
    FE(const GF* f, std::uint32_t v) : f_(f), v_(v) {}
    FE(const Field& f, std::uint32_t v) : f_(f.get()), v_(v) {}

    static FE from_int(const Field& f, long long k) { return FE(f.get(), f->from_int(k)); }

    const GF* field() const { return f_; }
    bool floating() const { return f_ == nullptr; }
    /// Encoded value; only meaningful with a field attached.
    std::uint32_t value() const { return f_ ? v_ : static_cast<std::uint32_t>(k_); }
    int constant() const { return k_; }

    bool is_zero() const { return f_ ? v_ == 0 : k_ == 0; }
    bool is_one() const { return f_ ? v_ == 1 : k_ == 1; }

    FE in(const GF* f) const {
        if (f_ || !f) return *this;
        return FE(f, f->from_int(k_));
    }

    friend FE operator+(const FE& a, const FE& b) {
        const GF* f = a.f_ ? a.f_ : b.f_;
        if (!f) return FE(a.k_ + b.k_);
        return FE(f, f->add(a.in(f).v_, b.in(f).v_));
    }
    friend FE operator-(const FE& a, const FE& b) {
        const GF* f = a.f_ ? a.f_ : b.f_;
        if (!f) return FE(a.k_ - b.k_);
        return FE(f, f->sub(a.in(f).v_, b.in(f).v_));
    }
    FE operator-() const {
        if (!f_) return FE(-k_);
        return FE(f_, f_->neg(v_));
    }
    friend FE operator*(const FE& a, const FE& b) {
        const GF* f = a.f_ ? a.f_ : b.f_;
        if (!f) return FE(a.k_ * b.k_);
        return FE(f, f->mul(a.in(f).v_, b.in(f).v_));
    }
    FE inv() const {
        if (!f_) {
            if (k_ == 1 || k_ == -1) return *this;
            throw std::domain_error("FE: cannot invert a floating constant other than +-1");
        }
        return FE(f_, f_->inv(v_));
    }
    friend FE operator/(const FE& a, const FE& b) { return a * b.inv(); }
    FE& operator+=(const FE& o) { return *this = *this + o; }
    FE& operator-=(const FE& o) { return *this = *this - o; }
    FE& operator*=(const FE& o) { return *this = *this * o; }

    FE pow(long long k) const {
        if (!f_) {
            if (k_ == 0 || k_ == 1) return *this;
            if (k_ == -1) return FE((k % 2 == 0) ? 1 : -1);
            throw std::domain_error("FE: pow of floating constant");
        }
        return FE(f_, f_->pow(v_, k));
    }

    friend bool operator==(const FE& a, const FE& b) {
        const GF* f = a.f_ ? a.f_ : b.f_;
        if (!f) return a.k_ == b.k_;
        return a.in(f).v_ == b.in(f).v_;
    }
    friend bool operator!=(const FE& a, const FE& b) { return !(a == b); }
    /// Total order by canonical representative.
    friend bool operator<(const FE& a, const FE& b) { return a.value() < b.value(); }

private:
    const GF* f_ = nullptr;
    std::uint32_t v_ = 0;
    int k_ = 0;
};

/// x^{q^k} for the field's designated base q. Floating constants lie in F_p.
inline FE frobenius(const FE& x, long long k) {
    if (x.floating()) return x;
    return FE(x.field(), x.field()->frob(x.value(), k));
}

/// x^{p^k}
inline FE frobenius_p(const FE& x, long long k) {
    if (x.floating()) return x;
    return FE(x.field(), x.field()->frob_p(x.value(), k));
}

inline std::vector<FE> all_elements(const Field& f) {
    std::vector<FE> out;
    out.reserve(f->size());
    for (std::uint32_t v = 0; v < f->size(); ++v) out.emplace_back(f, v);
    return out;
}

/// Encoded element of the subfield F_p generated by an integer.
inline FE fe(const Field& f, long long k) { return FE::from_int(f, k); }

/// Human readable integer encoding.
inline std::string to_string(const FE& x) { return std::to_string(x.value()); }

}  // namespace drinfeld
