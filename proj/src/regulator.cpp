#include "posync/regulator.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace posync {

void AgentDynamics::validate() const {
    const std::size_t n = A.rows();
    const std::size_t m = B.cols();
    if (!A.is_square()) throw std::invalid_argument("AgentDynamics: A must be square");
    if (B.rows() != n) throw std::invalid_argument("AgentDynamics: B row count must match A");
    if (E.rows() != m || E.cols() != n) {
        throw std::invalid_argument("AgentDynamics: E must be input_dim x state_dim");
    }
    if (s.size() != n) throw std::invalid_argument("AgentDynamics: s dimension must match A");
    if (!is_metzler(A)) throw std::invalid_argument("AgentDynamics: A must be Metzler");
    if (!is_nonnegative(E)) throw std::invalid_argument("AgentDynamics: E must be nonnegative");
    for (double v : s)
        if (v <= 0.0) throw std::invalid_argument("AgentDynamics: s must be strictly positive");
}

AgentDynamics AgentDynamics::with_input_bound_scaled(double rho) const {
    if (rho <= 0.0) throw std::invalid_argument("with_input_bound_scaled: rho must be positive");
    AgentDynamics scaled = *this;
    scaled.E *= 1.0 / rho;
    return scaled;
}

VerificationError::VerificationError(double r)
    : std::runtime_error("regulator: algebraic equation residual " + std::to_string(r) +
                         " exceeds tolerance"),
      residual(r) {}

bool check_e_stabilizable(const AgentDynamics& dyn, double tol) {
    dyn.validate();
    const std::size_t n = dyn.state_dim();
    const std::size_t m = dyn.input_dim();
    // variables (x, u+, u-), all >= 0; u = u+ - u-
    Matrix G(n + 2 * m, n + 2 * m);
    Vector h(n + 2 * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) G(i, j) = dyn.A(i, j);
        for (std::size_t k = 0; k < m; ++k) {
            G(i, n + k) = dyn.B(i, k);
            G(i, n + m + k) = -dyn.B(i, k);
        }
        h[i] = -1.0;
    }
    for (std::size_t k = 0; k < m; ++k) {
        // u - Ex <= 0 and -u - Ex <= 0
        for (std::size_t j = 0; j < n; ++j) {
            G(n + k, j) = -dyn.E(k, j);
            G(n + m + k, j) = -dyn.E(k, j);
        }
        G(n + k, n + k) = 1.0;
        G(n + k, n + m + k) = -1.0;
        G(n + m + k, n + k) = -1.0;
        G(n + m + k, n + m + k) = 1.0;
    }
    return solve_feasibility(G, h, tol).status == LpStatus::Optimal;
}

LinearProgram build_regulator_lp(const AgentDynamics& dyn) {
    dyn.validate();
    const std::size_t n = dyn.state_dim();
    const std::size_t m = dyn.input_dim();
    // variables (p, zeta) >= 0
    Matrix G(n + 2 * m, n + m);
    Vector h(n + 2 * m, 0.0);
    // Bellman inequality rows: -A'p + E'zeta <= s
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) G(i, j) = -dyn.A(j, i);
        for (std::size_t k = 0; k < m; ++k) G(i, n + k) = dyn.E(k, i);
        h[i] = dyn.s[i];
    }
    // |B'p| <= zeta
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            G(n + k, j) = dyn.B(j, k);
            G(n + m + k, j) = -dyn.B(j, k);
        }
        G(n + k, n + k) = -1.0;
        G(n + m + k, n + k) = -1.0;
    }
    Vector c(n + m, 0.0);
    for (std::size_t i = 0; i < n; ++i) c[i] = 1.0;
    return {std::move(c), std::move(G), std::move(h)};
}

RegulatorSolution solve_regulator(const AgentDynamics& dyn, double tol) {
    const LinearProgram lp = build_regulator_lp(dyn);
    const LpOutcome out = solve_lp(lp);
    // (p, zeta) = 0 is always feasible, so a missing finite optimum shows up
    // as unboundedness and means the pair is not E-stabilizable
    if (out.status != LpStatus::Optimal) throw NotStabilizableError();

    const std::size_t n = dyn.state_dim();
    const std::size_t m = dyn.input_dim();
    RegulatorSolution sol{Vector(out.x.begin(), out.x.begin() + n),
                          Vector(out.x.begin() + n, out.x.end()),
                          Matrix(m, n), out.value, 0.0};

    const Vector btp = dyn.B.transpose() * sol.p;
    for (std::size_t k = 0; k < m; ++k) {
        double sign = 0.0;
        if (btp[k] > tol) sign = 1.0;
        else if (btp[k] < -tol) sign = -1.0;
        for (std::size_t j = 0; j < n; ++j) sol.K(k, j) = sign * dyn.E(k, j);
    }

    // residual of A'p = E'|B'p| - s
    Vector abs_btp(m);
    for (std::size_t k = 0; k < m; ++k) abs_btp[k] = std::fabs(btp[k]);
    const Vector atp = dyn.A.transpose() * sol.p;
    const Vector etb = dyn.E.transpose() * abs_btp;
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res = std::max(res, std::fabs(atp[i] - etb[i] + dyn.s[i]));
    }
    sol.residual = res;
    if (res > tol) throw VerificationError(res);
    return sol;
}

double optimal_cost(const RegulatorSolution& sol, const Vector& x0) {
    for (double v : x0)
        if (v < 0.0) throw std::invalid_argument("optimal_cost: x0 must be nonnegative");
    return dot(sol.p, x0);
}

double compute_alpha(const AgentDynamics& dyn, double rho) {
    dyn.validate();
    const Matrix be = dyn.B.abs() * dyn.E * (1.0 / rho);
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < be.rows(); ++i)
        for (std::size_t j = 0; j < be.cols(); ++j)
            if (i != j && be(i, j) > 0.0) alpha = std::min(alpha, dyn.A(i, j) / be(i, j));
    return alpha;
}

bool check_alpha_condition(double alpha, double beta, double gamma) {
    if (beta <= 0.0 || beta > gamma) {
        throw std::invalid_argument("check_alpha_condition: need 0 < beta <= gamma");
    }
    return alpha >= gamma / beta;
}

} // namespace posync
