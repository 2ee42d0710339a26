#pragma once

#include <string>

#include "posync/graph.hpp"
#include "posync/regulator.hpp"

namespace posync {

/// Protocol parameters plus the regulator solution obtained with the scaled
/// input bound E/rho. The effective coupling gain applied to zeta_i is rho*K.
struct ProtocolConfig {
    double beta;
    double gamma;
    double rho;
    RegulatorSolution regulator;
};

/// Solves the regulator for E/rho and bundles the protocol parameters.
ProtocolConfig make_protocol(const AgentDynamics& dyn, double beta, double gamma, double rho,
                             double tol = 1e-7);

struct ValidationReport {
    bool ok;
    std::vector<std::string> violations;
};

/// Checks the protocol's standing hypotheses: rho >= 1/beta, Metzler-ness of
/// A - gamma*rho*|B|(E/rho), and alpha >= gamma/beta. None of them involve
/// the regulator solution, so a parameter-only overload is provided.
ValidationReport validate_protocol(const AgentDynamics& dyn, double beta, double gamma,
                                   double rho);
ValidationReport validate_protocol(const AgentDynamics& dyn, const ProtocolConfig& cfg);

struct ModeCertificate {
    double lambda;
    Vector p;      // >= 0, with (A - lambda*rho*B*K)' p <= -margin * 1
    double margin; // > 0
};

struct HypothesisViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHurwitzError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hurwitz certificate for the mode matrix A - lambda*rho*B*K: Metzler check,
/// then a feasible p >= 0 with M'p <= -1. Throws when either step fails.
ModeCertificate certify_mode(const AgentDynamics& dyn, const ProtocolConfig& cfg,
                             double lambda_i, double tol = 1e-9);

struct PositivityVerdict {
    bool guaranteed;
    std::size_t p_idx = 0; // indices of a negative BK entry when violated
    std::size_t q_idx = 0;
};

PositivityVerdict check_positivity(const AgentDynamics& dyn, const ProtocolConfig& cfg,
                                   double tol = 0.0);

struct ViolationWitness {
    Vector x0; // stacked N*n initial state, agent-major
    double exit_time;
    double initial_derivative; // the algebraic witness, < 0
};

struct ConstructionFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Builds the orthant-exit witness for a negative BK entry: one agent starts
/// with coordinate p_idx at zero and a neighbor carries an escalating mass in
/// coordinate q_idx (doubling search, cap 2^40). Asserts the sign of the
/// initial derivative before simulating.
ViolationWitness construct_violation_trajectory(const AgentDynamics& dyn,
                                                const ProtocolConfig& cfg, const Graph& g,
                                                std::size_t p_idx, std::size_t q_idx,
                                                double tol_exit = 1e-9);

/// I_N (x) A - rho * (L (x) BK)
Matrix closed_loop_matrix(const AgentDynamics& dyn, const ProtocolConfig& cfg, const Graph& g);

struct ProtocolCertificate {
    std::vector<ModeCertificate> mode_certificates;
    PositivityVerdict positivity;
    bool degree_bound_ok; // max weighted degree <= gamma (positivity proof side condition)
    bool assembled;
};

/// Certifies every nonzero Laplacian eigenvalue of the concrete graph.
ProtocolCertificate certify_graph(const AgentDynamics& dyn, const ProtocolConfig& cfg,
                                  const Graph& g, double tol = 1e-9);

} // namespace posync
