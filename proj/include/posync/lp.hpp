#pragma once

#include <stdexcept>

#include "posync/matrix.hpp"

namespace posync {

/// max c'x subject to Gx <= h, x >= 0. Free variables must be encoded by the
/// caller as differences of two nonnegative variables.
struct LinearProgram {
    Vector c;
    Matrix G;
    Vector h;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
    LpStatus status;
    Vector x;     // valid iff Optimal
    double value; // valid iff Optimal
};

struct SolverStallError : std::runtime_error {
    SolverStallError() : std::runtime_error("simplex: pivot cap exceeded") {}
};

/// Two-phase primal simplex with Bland's rule (lowest index enters and
/// leaves). One tolerance governs feasibility, reduced-cost and ratio tests.
LpOutcome solve_lp(const LinearProgram& lp, double tol = 1e-9, int max_pivots = 10000);

/// Pure feasibility of {x >= 0 : Gx <= h}; Optimal carries some feasible point.
LpOutcome solve_feasibility(const Matrix& G, const Vector& h, double tol = 1e-9,
                            int max_pivots = 10000);

} // namespace posync
