#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's solvers; they re-derive values by brute force.

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "multichan/core_model.hpp"
#include "multichan/lp_exact.hpp"
#include "multichan/rational.hpp"

namespace oracle {

using multichan::Rational;

/// Gaussian elimination on a square rational system; nullopt if singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t r = col; r < n; ++r) {
            if (!a[r][col].is_zero()) {
                piv = r;
                break;
            }
        }
        if (piv == n) {
            return std::nullopt;
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) {
                continue;
            }
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = b[i] / a[i][i];
    }
    return x;
}

/// Max of a bounded LP by enumerating every vertex: choose n tight rows among
/// constraints and bounds x_j = 0, solve, keep the feasible ones.
inline std::optional<Rational> lp_by_vertices(const multichan::LinearProgram& lp)
{
    const std::size_t n = lp.variables();
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (const auto& c : lp.constraints()) {
        std::vector<Rational> row(n);
        for (const auto& t : c.terms) {
            row[t.variable] += t.coefficient;
        }
        rows.push_back(row);
        rhs.push_back(c.rhs);
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> row(n);
        row[j] = Rational(1);
        rows.push_back(row);
        rhs.push_back(Rational());
    }
    const std::size_t total = rows.size();
    std::optional<Rational> best;
    for (unsigned long mask = 0; mask < (1UL << total); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountl(mask)) != n) {
            continue;
        }
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (std::size_t i = 0; i < total; ++i) {
            if (mask >> i & 1UL) {
                a.push_back(rows[i]);
                b.push_back(rhs[i]);
            }
        }
        const auto x = solve_square(a, b);
        if (!x || !multichan::satisfies(lp, *x)) {
            continue;
        }
        Rational value;
        for (std::size_t j = 0; j < n; ++j) {
            value += lp.objective()[j] * (*x)[j];
        }
        if (!best || value > *best) {
            best = value;
        }
    }
    return best;
}

/// Concavification at `prior` (probability of state index 1) of a function
/// on finitely many binary-state points, by trying every point and pair.
inline Rational concavify_binary(const std::map<Rational, Rational>& u, const Rational& prior)
{
    std::optional<Rational> best;
    auto consider = [&](const Rational& v) {
        if (!best || v > *best) {
            best = v;
        }
    };
    for (const auto& [a, ua] : u) {
        if (a == prior) {
            consider(ua);
        }
        for (const auto& [b, ub] : u) {
            if (a < prior && prior < b) {
                const Rational wb = (prior - a) / (b - a);
                consider(ua * (Rational(1) - wb) + ub * wb);
            }
        }
    }
    return *best;
}

/// Optimum of a 2-receiver chain (receiver 1 sees everything receiver 2 sees)
/// with binary states and posteriors restricted to a grid: receiver 2's
/// distribution is any Bayes-plausible one, and each of its atoms is spread
/// optimally for receiver 1, so the value is cav(u2 + cav u1) at the prior.
inline Rational chain_value_binary(const std::map<Rational, Rational>& u1, const std::map<Rational, Rational>& u2,
                                   const Rational& prior)
{
    std::map<Rational, Rational> inner;
    for (const auto& [q, v] : u2) {
        inner[q] = v + concavify_binary(u1, q);
    }
    return concavify_binary(inner, prior);
}

/// Literal entrywise row comparison on a raw matrix (1-based pairs not used).
inline bool row_dominates(const std::vector<std::vector<int>>& m, std::size_t a, std::size_t b)
{
    for (std::size_t j = 0; j < m[a].size(); ++j) {
        if (m[a][j] < m[b][j]) {
            return false;
        }
    }
    return true;
}

inline std::vector<std::vector<int>> matrix_from_bits(unsigned long bits, std::size_t k, std::size_t n)
{
    std::vector<std::vector<int>> m(k, std::vector<int>(n));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = static_cast<int>(bits >> (i * n + j) & 1UL);
        }
    }
    return m;
}

inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long max_den)
{
    std::uniform_int_distribution<long> den(1, max_den);
    const long d = den(rng);
    std::uniform_int_distribution<long> num(lo * d, hi * d);
    return Rational(num(rng), d);
}

} // namespace oracle
