#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "phylotoric/integers.hpp"

namespace phylotoric {

// Decides whether {x >= 0 : A x = b} is nonempty, exactly over the rationals.
// Phase-one simplex on the artificial objective with Bland's pivoting rule,
// which rules out cycling, so the tableau walk always terminates.
inline bool rational_feasible(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t m = a.size();
    if (b.size() != m) throw std::invalid_argument("rational_feasible: rhs length mismatch");
    const std::size_t n = m == 0 ? 0 : a[0].size();
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("rational_feasible: ragged system");
    if (m == 0) return true;

    for (std::size_t i = 0; i < m; ++i)
        if (b[i] < 0) {
            for (auto& x : a[i]) x = -x;
            b[i] = -b[i];
        }

    // Tableau columns: the n structural variables then one artificial per row.
    const std::size_t total = n + m;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(total));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = std::move(a[i][j]);
        t[i][n + i] = 1;
        basis[i] = n + i;
    }

    // Reduced costs for minimizing the artificial sum; objective value is the
    // current artificial mass and feasibility means driving it to zero.
    std::vector<Rational> cost(total);
    Rational value = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost[j] -= t[i][j];
        value += b[i];
    }

    for (;;) {
        std::size_t enter = total;
        for (std::size_t j = 0; j < total; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == total) break;

        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = b[i] / t[i][enter];
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave]))
                best = ratio, leave = i;
        }
        if (leave == m)
            throw std::logic_error("rational_feasible: unbounded artificial objective");

        Rational pivot = t[leave][enter];
        for (auto& x : t[leave]) x /= pivot;
        b[leave] /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rational f = t[i][enter];
            for (std::size_t j = 0; j < total; ++j) t[i][j] -= f * t[leave][j];
            b[i] -= f * b[leave];
        }
        Rational f = cost[enter];
        for (std::size_t j = 0; j < total; ++j) cost[j] -= f * t[leave][j];
        value += f * b[leave];
        basis[leave] = enter;
    }
    return value == 0;
}

}  // namespace phylotoric
