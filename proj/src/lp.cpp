#include "posync/lp.hpp"

#include <cmath>
#include <cstddef>

namespace posync {

namespace {

// Dense tableau: rows 0..m-1 are constraints, row m is the z-row
// (z_j - c_j, with the objective value in the rhs column).
struct Tableau {
    std::size_t m, ncols; // ncols excludes the rhs column
    std::vector<Vector> t; // (m+1) x (ncols+1)
    std::vector<std::size_t> basis; // basis[i] = column basic in row i

    double& at(std::size_t i, std::size_t j) { return t[i][j]; }
    double rhs(std::size_t i) const { return t[i][ncols]; }
};

void pivot(Tableau& tb, std::size_t r, std::size_t c) {
    const double piv = tb.t[r][c];
    for (double& v : tb.t[r]) v /= piv;
    for (std::size_t i = 0; i <= tb.m; ++i) {
        if (i == r) continue;
        const double f = tb.t[i][c];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= tb.ncols; ++j) tb.t[i][j] -= f * tb.t[r][j];
    }
    tb.basis[r] = c;
}

enum class CoreResult { Optimal, Unbounded };

// Bland's rule: lowest eligible column enters; ratio ties are broken by the
// lowest basic variable index. enter_limit restricts the entering columns
// (phase 2 must not re-enter artificials).
CoreResult simplex_core(Tableau& tb, std::size_t enter_limit, double tol, int& budget) {
    for (;;) {
        std::size_t enter = enter_limit;
        for (std::size_t j = 0; j < enter_limit; ++j) {
            if (tb.t[tb.m][j] < -tol) {
                enter = j;
                break;
            }
        }
        if (enter == enter_limit) return CoreResult::Optimal;

        std::size_t leave = tb.m; // sentinel
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < tb.m; ++i) {
            const double a = tb.t[i][enter];
            if (a <= tol) continue;
            const double ratio = tb.rhs(i) / a;
            if (leave == tb.m || ratio < best_ratio - tol ||
                (ratio < best_ratio + tol && tb.basis[i] < tb.basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == tb.m) return CoreResult::Unbounded;

        if (--budget < 0) throw SolverStallError();
        pivot(tb, leave, enter);
    }
}

} // namespace

LpOutcome solve_lp(const LinearProgram& lp, double tol, int max_pivots) {
    const std::size_t n = lp.c.size();
    const std::size_t m = lp.h.size();
    if (lp.G.rows() != m || lp.G.cols() != n) {
        throw std::invalid_argument("solve_lp: inconsistent dimensions");
    }

    // columns: [0,n) structural, [n,n+m) slacks, then artificials for rows
    // whose rhs is negative
    std::vector<std::size_t> art_rows;
    for (std::size_t i = 0; i < m; ++i)
        if (lp.h[i] < 0.0) art_rows.push_back(i);
    const std::size_t n_art = art_rows.size();
    const std::size_t ncols = n + m + n_art;

    Tableau tb{m, ncols, std::vector<Vector>(m + 1, Vector(ncols + 1, 0.0)),
               std::vector<std::size_t>(m)};

    std::size_t art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = lp.h[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tb.at(i, j) = sign * lp.G(i, j);
        tb.at(i, n + i) = sign;
        tb.at(i, ncols) = sign * lp.h[i];
        if (lp.h[i] < 0.0) {
            tb.at(i, n + m + art) = 1.0;
            tb.basis[i] = n + m + art;
            ++art;
        } else {
            tb.basis[i] = n + i;
        }
    }

    int budget = max_pivots;

    if (n_art > 0) {
        // phase 1: maximize -sum(artificials); z-row = sum of artificial rows,
        // negated, with artificial columns cancelling to 0
        for (std::size_t j = 0; j <= ncols; ++j) {
            double s = 0.0;
            for (std::size_t i : art_rows) s += tb.at(i, j);
            tb.at(m, j) = -s;
        }
        for (std::size_t j = n + m; j < ncols; ++j) tb.at(m, j) += 1.0;

        simplex_core(tb, ncols, tol, budget); // phase 1 is always bounded
        if (tb.t[m][ncols] < -tol) {
            return {LpStatus::Infeasible, {}, 0.0};
        }
        // pivot remaining artificials out of the basis where possible
        for (std::size_t i = 0; i < m; ++i) {
            if (tb.basis[i] < n + m) continue;
            for (std::size_t j = 0; j < n + m; ++j) {
                if (std::fabs(tb.at(i, j)) > tol) {
                    if (--budget < 0) throw SolverStallError();
                    pivot(tb, i, j);
                    break;
                }
            }
            // a row that cannot be pivoted is redundant; its artificial stays
            // basic at value 0 and is barred from re-entering in phase 2
        }
    }

    // phase 2 z-row from the original objective
    for (std::size_t j = 0; j <= ncols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t b = tb.basis[i];
            if (b < n && lp.c[b] != 0.0) s += lp.c[b] * tb.at(i, j);
        }
        tb.at(m, j) = s;
    }
    for (std::size_t j = 0; j < n; ++j) tb.at(m, j) -= lp.c[j];

    const CoreResult res = simplex_core(tb, n + m, tol, budget);
    if (res == CoreResult::Unbounded) {
        return {LpStatus::Unbounded, {}, 0.0};
    }

    Vector x(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tb.basis[i] < n) x[tb.basis[i]] = tb.rhs(i);
    double value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += lp.c[j] * x[j];
    return {LpStatus::Optimal, std::move(x), value};
}

LpOutcome solve_feasibility(const Matrix& G, const Vector& h, double tol, int max_pivots) {
    LinearProgram lp{Vector(G.cols(), 0.0), G, h};
    return solve_lp(lp, tol, max_pivots);
}

} // namespace posync
