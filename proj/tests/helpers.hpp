#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "posync/lp.hpp"
#include "posync/regulator.hpp"

namespace posync::testing {

/// the agent from the committed reproduction scenarios: unstable Metzler A, single input
inline AgentDynamics reference_agent() {
    return {Matrix{{-2.21, 2.40}, {0.43, -0.44}},
            Matrix{{0.27}, {0.0}},
            Matrix{{0.06, 0.6}},
            Vector{1.0, 1.0}};
}

/// Gaussian elimination with partial pivoting; nullopt when near-singular.
inline std::optional<Vector> solve_linear(Matrix a, Vector b, double pivot_tol = 1e-9) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
        if (std::fabs(a(piv, col)) < pivot_tol) return std::nullopt;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
        x[i] = s / a(i, i);
    }
    return x;
}

struct OracleResult {
    LpStatus status;
    double value = 0.0;
};

/// Independent LP oracle by brute-force basic-solution enumeration.
/// The feasible region {Gx <= h, x >= 0} is pointed, so it is nonempty iff it
/// has a vertex; unboundedness is detected on the recession polytope
/// {Gd <= 0, 0 <= d <= 1}.
inline OracleResult lp_oracle(const LinearProgram& lp, double tol = 1e-7) {
    const std::size_t n = lp.c.size();
    const std::size_t m = lp.h.size();
    const std::size_t total = m + n; // G rows then nonnegativity rows

    auto row = [&](std::size_t r, std::size_t j) {
        return r < m ? lp.G(r, j) : (r - m == j ? -1.0 : 0.0);
    };
    auto rhs = [&](std::size_t r) { return r < m ? lp.h[r] : 0.0; };

    auto best_vertex = [&](const Vector& obj) -> std::optional<double> {
        std::optional<double> best;
        std::vector<std::size_t> pick(n);
        // iterate over all n-subsets of the rows
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (;;) {
            Matrix a(n, n);
            Vector b(n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t j = 0; j < n; ++j) a(r, j) = row(idx[r], j);
                b[r] = rhs(idx[r]);
            }
            if (auto x = solve_linear(a, b)) {
                bool feasible = true;
                for (std::size_t r = 0; r < total && feasible; ++r) {
                    double lhs = 0.0;
                    for (std::size_t j = 0; j < n; ++j) lhs += row(r, j) * (*x)[j];
                    if (lhs > rhs(r) + tol) feasible = false;
                }
                if (feasible) {
                    double v = 0.0;
                    for (std::size_t j = 0; j < n; ++j) v += obj[j] * (*x)[j];
                    if (!best || v > *best) best = v;
                }
            }
            // next combination
            std::size_t k = n;
            while (k > 0 && idx[k - 1] == total - n + (k - 1)) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t i = k; i < n; ++i) idx[i] = idx[i - 1] + 1;
        }
        return best;
    };

    const std::optional<double> best = best_vertex(lp.c);
    if (!best) return {LpStatus::Infeasible};

    // recession direction check on the boxed cone
    LinearProgram cone{lp.c, Matrix(m + n, n), Vector(m + n, 0.0)};
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < n; ++j) cone.G(r, j) = lp.G(r, j);
    for (std::size_t j = 0; j < n; ++j) {
        cone.G(m + j, j) = 1.0;
        cone.h[m + j] = 1.0;
    }
    OracleResult res;
    const LinearProgram& boxed = cone;
    const std::size_t bm = boxed.h.size();
    // reuse the enumeration on the boxed cone
    auto cone_row = [&](std::size_t r, std::size_t j) {
        return r < bm ? boxed.G(r, j) : (r - bm == j ? -1.0 : 0.0);
    };
    auto cone_rhs = [&](std::size_t r) { return r < bm ? boxed.h[r] : 0.0; };
    double ray_best = 0.0;
    {
        const std::size_t ctotal = bm + n;
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (;;) {
            Matrix a(n, n);
            Vector b(n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t j = 0; j < n; ++j) a(r, j) = cone_row(idx[r], j);
                b[r] = cone_rhs(idx[r]);
            }
            if (auto x = solve_linear(a, b)) {
                bool feasible = true;
                for (std::size_t r = 0; r < ctotal && feasible; ++r) {
                    double lhs = 0.0;
                    for (std::size_t j = 0; j < n; ++j) lhs += cone_row(r, j) * (*x)[j];
                    if (lhs > cone_rhs(r) + tol) feasible = false;
                }
                if (feasible) {
                    double v = 0.0;
                    for (std::size_t j = 0; j < n; ++j) v += lp.c[j] * (*x)[j];
                    ray_best = std::max(ray_best, v);
                }
            }
            std::size_t k = n;
            while (k > 0 && idx[k - 1] == ctotal - n + (k - 1)) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t i = k; i < n; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    if (ray_best > tol) return {LpStatus::Unbounded};
    return {LpStatus::Optimal, *best};
}

/// the 2x2 costate oracle for the reference agent: solve A'p = E'(B'p) - s under
/// the positive-sign hypothesis and confirm p >= 0
inline Vector reference_costate_oracle() {
    const AgentDynamics dyn = reference_agent();
    // (A' - E'B') p = -s
    const Matrix lhs = dyn.A.transpose() - dyn.E.transpose() * dyn.B.transpose();
    Vector rhs(dyn.s.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -dyn.s[i];
    const auto p = solve_linear(lhs, rhs);
    if (!p) throw std::runtime_error("reference_costate_oracle: singular system");
    for (double v : *p)
        if (v < 0.0) throw std::runtime_error("reference_costate_oracle: sign hypothesis failed");
    return *p;
}

} // namespace posync::testing
