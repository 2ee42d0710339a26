#include "posync/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace posync {

ProtocolConfig make_protocol(const AgentDynamics& dyn, double beta, double gamma, double rho,
                             double tol) {
    if (beta <= 0.0 || gamma < beta) {
        throw std::invalid_argument("make_protocol: need 0 < beta <= gamma");
    }
    if (rho <= 0.0) throw std::invalid_argument("make_protocol: rho must be positive");
    return {beta, gamma, rho, solve_regulator(dyn.with_input_bound_scaled(rho), tol)};
}

ValidationReport validate_protocol(const AgentDynamics& dyn, double beta, double gamma,
                                   double rho) {
    ValidationReport rep{true, {}};
    auto fail = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };

    if (rho < 1.0 / beta) {
        std::ostringstream os;
        os << "rho = " << rho << " is below 1/beta = " << 1.0 / beta;
        fail(os.str());
    }
    // gamma*rho*|B|(E/rho) = gamma*|B|E
    const Matrix shifted = dyn.A - gamma * (dyn.B.abs() * dyn.E);
    if (!is_metzler(shifted, 1e-12)) {
        fail("A - gamma*rho*|B|(E/rho) is not Metzler");
    }
    const double alpha = compute_alpha(dyn, rho);
    if (!check_alpha_condition(alpha, beta, gamma)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " is below gamma/beta = " << gamma / beta;
        fail(os.str());
    }
    return rep;
}

ValidationReport validate_protocol(const AgentDynamics& dyn, const ProtocolConfig& cfg) {
    return validate_protocol(dyn, cfg.beta, cfg.gamma, cfg.rho);
}

namespace {

Matrix mode_matrix(const AgentDynamics& dyn, const ProtocolConfig& cfg, double lambda_i) {
    return dyn.A - (lambda_i * cfg.rho) * (dyn.B * cfg.regulator.K);
}

} // namespace

ModeCertificate certify_mode(const AgentDynamics& dyn, const ProtocolConfig& cfg,
                             double lambda_i, double tol) {
    if (lambda_i < cfg.beta - tol || lambda_i > cfg.gamma + tol) {
        throw std::invalid_argument("certify_mode: lambda_i outside [beta, gamma]");
    }
    const Matrix m = mode_matrix(dyn, cfg, lambda_i);
    if (!is_metzler(m, tol)) {
        std::ostringstream os;
        os << "certify_mode: A - lambda*rho*BK is not Metzler at lambda = " << lambda_i;
        throw HypothesisViolationError(os.str());
    }
    // Hurwitz for Metzler M iff {p >= 0 : M'p <= -1} is nonempty
    const std::size_t n = m.rows();
    const LpOutcome out = solve_feasibility(m.transpose(), Vector(n, -1.0));
    if (out.status != LpStatus::Optimal) {
        std::ostringstream os;
        os << "certify_mode: no Hurwitz certificate at lambda = " << lambda_i;
        throw NotHurwitzError(os.str());
    }
    const Vector mtp = m.transpose() * out.x;
    double margin = std::numeric_limits<double>::infinity();
    for (double v : mtp) margin = std::min(margin, -v);
    return {lambda_i, out.x, margin};
}

PositivityVerdict check_positivity(const AgentDynamics& dyn, const ProtocolConfig& cfg,
                                   double tol) {
    const Matrix bk = dyn.B * cfg.regulator.K;
    for (std::size_t i = 0; i < bk.rows(); ++i)
        for (std::size_t j = 0; j < bk.cols(); ++j)
            if (bk(i, j) < -tol) return {false, i, j};
    return {true};
}

Matrix closed_loop_matrix(const AgentDynamics& dyn, const ProtocolConfig& cfg, const Graph& g) {
    const Matrix bk = dyn.B * cfg.regulator.K;
    Matrix cl = kron(Matrix::identity(g.n), dyn.A);
    if (g.n > 1) cl -= cfg.rho * kron(laplacian(g), bk);
    return cl;
}

ViolationWitness construct_violation_trajectory(const AgentDynamics& dyn,
                                                const ProtocolConfig& cfg, const Graph& g,
                                                std::size_t p_idx, std::size_t q_idx,
                                                double tol_exit) {
    const Matrix bk = dyn.B * cfg.regulator.K;
    if (bk(p_idx, q_idx) >= 0.0) {
        throw std::invalid_argument("construct_violation_trajectory: BK entry is not negative");
    }
    if (g.edges.empty()) {
        throw std::invalid_argument("construct_violation_trajectory: graph has no edge");
    }
    const std::size_t n = dyn.state_dim();
    const Edge& e = g.edges.front();
    const std::size_t agent_i = e.i; // starts at zero in coordinate p_idx
    const std::size_t agent_j = e.j; // carries the large mass in coordinate q_idx

    const Matrix cl = closed_loop_matrix(dyn, cfg, g);
    const double t_end = 5.0, dt = 1e-3;

    for (int k = 0; k <= 40; ++k) {
        const double magnitude = std::ldexp(1.0, k);
        Vector x0(g.n * n, 0.0);
        x0[agent_j * n + q_idx] = magnitude;

        // algebraic witness: xdot_i(0)_p = rho * w_ij * (BK)_{p,q} * magnitude
        const double deriv = cfg.rho * e.w * bk(p_idx, q_idx) * magnitude;
        if (deriv >= 0.0) {
            throw ConstructionFailureError(
                "construct_violation_trajectory: derivative witness is not negative");
        }

        const Trajectory traj = integrate_linear(cl, x0, t_end, dt, 1);
        for (std::size_t step = 0; step < traj.times.size(); ++step) {
            for (double v : traj.states[step]) {
                if (v < -tol_exit) {
                    return {x0, traj.times[step], deriv};
                }
            }
        }
    }
    throw ConstructionFailureError(
        "construct_violation_trajectory: no orthant exit up to magnitude 2^40; "
        "this contradicts the positivity characterization");
}

ProtocolCertificate certify_graph(const AgentDynamics& dyn, const ProtocolConfig& cfg,
                                  const Graph& g, double tol) {
    const SpectralSummary spec = spectral_summary(g);
    ProtocolCertificate cert;
    for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k) {
        cert.mode_certificates.push_back(certify_mode(dyn, cfg, spec.eigenvalues[k], tol));
    }
    cert.positivity = check_positivity(dyn, cfg, tol);
    double max_deg = 0.0;
    for (double d : weighted_degrees(g)) max_deg = std::max(max_deg, d);
    cert.degree_bound_ok = max_deg <= cfg.gamma + tol;
    cert.assembled = true;
    return cert;
}

} // namespace posync
