#pragma once

/**
 * @file linalg.hpp
 * @brief Row reduction, nullspaces and linear solves over a finite field.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "drinfeld/field.hpp"

namespace drinfeld {

using Matrix = std::vector<std::vector<FE>>;

struct Echelon {
    Matrix rows;             // reduced row echelon form
    std::vector<int> pivots; // pivot column of each nonzero row
};

/// Reduced row echelon form; entries are pinned to `f`.
inline Echelon rref(Matrix m, const GF* f) {
    Echelon out;
    if (m.empty()) return out;
    const std::size_t ncols = m[0].size();
    for (auto& row : m)
        for (auto& x : row) x = x.in(f);
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[r]);
        FE ip = m[r][c].inv();
        for (auto& x : m[r]) x = x * ip;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            FE k = m[i][c];
            for (std::size_t j = c; j < ncols; ++j) m[i][j] = m[i][j] - k * m[r][j];
        }
        out.pivots.push_back(static_cast<int>(c));
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

inline int rank(const Matrix& m, const GF* f) { return static_cast<int>(rref(m, f).pivots.size()); }

/// Basis of {v : M v = 0}; `ncols` is needed when M has no rows.
inline Matrix nullspace(const Matrix& m, std::size_t ncols, const GF* f) {
    Echelon e = rref(m, f);
    std::vector<bool> is_piv(ncols, false);
    for (int p : e.pivots) is_piv[static_cast<std::size_t>(p)] = true;
    Matrix basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_piv[free]) continue;
        std::vector<FE> v(ncols, FE(f, 0));
        v[free] = FE(f, 1);
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[static_cast<std::size_t>(e.pivots[i])] = -e.rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of M v = b, or nullopt when inconsistent.
inline std::optional<std::vector<FE>> solve(const Matrix& m, const std::vector<FE>& b, std::size_t ncols, const GF* f) {
    if (m.size() != b.size()) throw std::invalid_argument("solve: row count mismatch");
    Matrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    Echelon e = rref(aug, f);
    std::vector<FE> v(ncols, FE(f, 0));
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (static_cast<std::size_t>(e.pivots[i]) == ncols) return std::nullopt;
        v[static_cast<std::size_t>(e.pivots[i])] = e.rows[i][ncols];
    }
    return v;
}

/// Nullspace basis over Z/p (p prime) for matrices with entries in [0, p).
/// Rows are reduced in place as bytes; used for large sparse-ish systems over prime fields.
inline std::vector<std::vector<int>> nullspace_mod_p(std::vector<std::vector<std::uint8_t>> m, std::size_t ncols, int p) {
    if (p < 2 || p > 127) throw std::invalid_argument("nullspace_mod_p: p must be a prime below 128");
    std::vector<int> inv(static_cast<std::size_t>(p), 0);
    for (int a = 1; a < p; ++a)
        for (int b = 1; b < p; ++b)
            if (a * b % p == 1) inv[static_cast<std::size_t>(a)] = b;
    std::vector<int> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[r]);
        auto& pr = m[r];
        int ip = inv[pr[c]];
        for (std::size_t j = c; j < ncols; ++j) pr[j] = static_cast<std::uint8_t>(pr[j] * ip % p);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            auto& row = m[i];
            int k = p - row[c];
            for (std::size_t j = c; j < ncols; ++j)
                if (pr[j]) row[j] = static_cast<std::uint8_t>((row[j] + k * pr[j]) % p);
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<bool> is_piv(ncols, false);
    for (int c : pivots) is_piv[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<int>> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_piv[free]) continue;
        std::vector<int> v(ncols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[static_cast<std::size_t>(pivots[i])] = (p - m[i][free]) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace drinfeld
