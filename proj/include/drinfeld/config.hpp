#pragma once

/**
 * @file config.hpp
 * @brief Run configuration shared by the command-line front end and the tests.
 */

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drinfeld/carlitz.hpp"

namespace drinfeld {

/// Rejected configuration; `field` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& why)
        : std::invalid_argument(field + ": " + why), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    int q = 2;
    int p = 0;                          // 0: derived from q
    int e = 1;
    std::vector<long long> pinf{0, 1};  // coefficients of P_inf, constant term first
    long long precision = 64;
    int degree = 3;
    int vars = 1;
    std::string command;
    std::string target;                 // suite or object name
    std::string format = "json";
    std::string out;

    int d_inf() const { return static_cast<int>(pinf.size()) - 1; }
};

/// "1,1,1" or "1 1 1", constant term first.
inline std::vector<long long> parse_pinf(const std::string& s) {
    std::vector<long long> out;
    std::string norm = s;
    for (auto& ch : norm)
        if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream in(norm);
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("pinf", "not an integer: '" + tok + "'");
        }
        if (used != tok.size()) throw ConfigError("pinf", "not an integer: '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("pinf", "no coefficients");
    return out;
}

/// Checks every field before any computation runs.
inline void validate(RunConfig& c) {
    if (!is_prime_int(c.q)) throw ConfigError("q", "must be a prime (prime powers are not supported)");
    if (c.p == 0) c.p = c.q;
    if (c.p != c.q || c.e != 1) throw ConfigError("e", "only q = p with e = 1 is supported");
    if (c.pinf.size() < 2) throw ConfigError("pinf", "P_inf must have degree >= 1");
    for (auto& a : c.pinf) a = ((a % c.q) + c.q) % c.q;
    if (c.pinf.back() != 1) throw ConfigError("pinf", "P_inf must be monic");
    if (c.d_inf() > 4) throw ConfigError("pinf", "degree of P_inf must be <= 4");
    Field F = make_field(c.q, 1);
    std::vector<FE> co;
    for (long long a : c.pinf) co.push_back(FE::from_int(F, a));
    if (!is_irreducible(FPoly(co), F)) throw ConfigError("pinf", "P_inf is not irreducible over F_q");
    if (c.precision <= 0) throw ConfigError("precision", "precision must be positive");
    if (c.degree < 0) throw ConfigError("degree", "must be >= 0");
    if (c.vars < 1 || c.vars > 4) throw ConfigError("vars", "must be in [1, 4]");
    if (c.format != "json" && c.format != "csv" && c.format != "text")
        throw ConfigError("format", "must be one of json, csv, text");
}

}  // namespace drinfeld
