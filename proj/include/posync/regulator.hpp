#pragma once

#include <stdexcept>

#include "posync/lp.hpp"
#include "posync/matrix.hpp"

namespace posync {

/// Agent data (A, B, E, s). A must be Metzler, E elementwise nonnegative,
/// s strictly positive. E plays the role of the (already scaled) input-bound
/// matrix of the regulator problem; the protocol layer passes E/rho here.
struct AgentDynamics {
    Matrix A;
    Matrix B;
    Matrix E;
    Vector s;

    std::size_t state_dim() const { return A.rows(); }
    std::size_t input_dim() const { return B.cols(); }
    void validate() const;

    /// same agent with the input bound scaled to E/rho
    AgentDynamics with_input_bound_scaled(double rho) const;
};

struct RegulatorSolution {
    Vector p;        // costate, >= 0
    Vector zeta;     // LP auxiliary, >= 0
    Matrix K;        // diag(sign(B'p)) * E
    double lp_value; // 1'p at the optimum
    double residual; // inf-norm of A'p - E'|B'p| + s
};

struct NotStabilizableError : std::runtime_error {
    NotStabilizableError()
        : std::runtime_error("regulator LP has no finite optimum: pair is not E-stabilizable") {}
};

struct VerificationError : std::runtime_error {
    double residual;
    explicit VerificationError(double r);
};

/// Feasibility of {x >= 0, |u| <= Ex : Ax + Bu <= -1}, which characterizes
/// E-stabilizability for Metzler A.
bool check_e_stabilizable(const AgentDynamics& dyn, double tol = 1e-9);

/// The regulator LP in canonical form over nonnegative (p, zeta):
/// maximize 1'p subject to the Bellman inequality A'p >= E'zeta - s and
/// zeta >= |B'p|.
LinearProgram build_regulator_lp(const AgentDynamics& dyn);

/// Solves the LP, extracts the gain, and verifies that the maximizer
/// satisfies the algebraic equation A'p = E'|B'p| - s within tol.
RegulatorSolution solve_regulator(const AgentDynamics& dyn, double tol = 1e-7);

/// p'x0, the minimal cost from x0 >= 0
double optimal_cost(const RegulatorSolution& sol, const Vector& x0);

/// alpha = sup{tau >= 0 : A - tau|B|(E/rho) is Metzler}; +infinity when the
/// off-diagonal of |B|(E/rho) vanishes
double compute_alpha(const AgentDynamics& dyn, double rho);

/// the protocol applicability condition alpha >= gamma/beta
bool check_alpha_condition(double alpha, double beta, double gamma);

} // namespace posync
