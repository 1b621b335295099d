#pragma once

// Exact feasibility of small linear systems over the rationals.
// Phase-1 simplex with Bland's rule: decides whether Ax = b has a solution
// with x >= 0.  Dimensions here are tiny (supports of a spoke graph), so a
// dense tableau is plenty.

#include <boost/multiprecision/cpp_int.hpp>

#include <set>
#include <vector>

namespace gapcode {

using Rational = boost::multiprecision::cpp_rational;

inline bool rational_system_feasible(std::vector<std::vector<Rational>> a,
                                     std::vector<Rational> b) {
    const size_t m = a.size();
    if (m == 0) return true;
    const size_t n = a[0].size();
    for (size_t i = 0; i < m; ++i)
        if (b[i] < 0) {
            for (auto& v : a[i]) v = -v;
            b[i] = -b[i];
        }
    // Tableau: n structural columns, m artificial columns, rhs.
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(n + m + 1, 0));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1;
        t[i][n + m] = b[i];
    }
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;
    // Phase-1 objective: minimize the sum of artificials.  Reduced-cost row.
    std::vector<Rational> z(n + m + 1, 0);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j <= n + m; ++j) z[j] -= t[i][j];
    for (size_t i = 0; i < m; ++i) z[n + i] = 0;

    while (true) {
        // Bland: least-index column with negative reduced cost.
        size_t enter = n + m;
        for (size_t j = 0; j < n + m; ++j)
            if (z[j] < 0) { enter = j; break; }
        if (enter == n + m) break;  // optimal
        // Ratio test; ties break on least basis index.
        size_t leave = m;
        Rational best;
        for (size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][n + m] / t[i][enter];
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave]))
                { leave = i; best = ratio; }
        }
        if (leave == m) break;  // unbounded below cannot happen in phase 1
        Rational piv = t[leave][enter];
        for (size_t j = 0; j <= n + m; ++j) t[leave][j] /= piv;
        for (size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rational f = t[i][enter];
            for (size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        if (z[enter] != 0) {
            Rational f = z[enter];
            for (size_t j = 0; j <= n + m; ++j) z[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    // Feasible iff the artificial objective reaches zero, i.e. -z[rhs] == 0.
    return z[n + m] == 0;
}

// Existence of c_i >= 1 whose sums over the given index groups are all equal.
// (Scale invariance makes c_i >= 1 equivalent to c_i > 0.)  Substituting
// x = c - 1 >= 0 turns the equal-sum constraints into an Ax = b system.
inline bool equal_sum_positive_feasible(const std::vector<std::set<int>>& groups, int nvars) {
    if (groups.empty()) return true;
    for (auto& g : groups)
        if (g.empty() != groups.front().empty()) return false;
    if (groups.front().empty()) return true;  // all sums are empty, trivially equal
    const auto& base = groups.front();
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (size_t j = 1; j < groups.size(); ++j) {
        if (groups[j] == base) continue;
        std::vector<Rational> row(nvars, 0);
        for (int i : groups[j]) row[i] += 1;
        for (int i : base) row[i] -= 1;
        a.push_back(std::move(row));
        b.push_back(Rational((long long)base.size()) - Rational((long long)groups[j].size()));
    }
    return rational_system_feasible(std::move(a), std::move(b));
}

}  // namespace gapcode
