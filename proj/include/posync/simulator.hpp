#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "posync/protocol.hpp"

namespace posync {

struct SimConfig {
    double t_end = 20.0;
    double dt = 1e-3;
    std::size_t output_stride = 100;
    // explicit per-agent initial states, or a seeded uniform draw on [0, scale]
    std::optional<std::vector<Vector>> init_states;
    std::uint64_t init_seed = 0;
    double init_scale = 5.0;
};

struct SyncMetrics {
    Vector times;
    Vector disagreement;   // max over agent pairs of the inf-norm difference
    Vector min_coordinate; // global minimum state entry
    Vector sync_error;     // max over agents of |x_i(t) - x_s(t)|_inf
    double half_life;      // +inf when never reached within the horizon
};

std::vector<Vector> initial_agent_states(const AgentDynamics& dyn, const Graph& g,
                                         const SimConfig& sim);

/// RK4 integration of the assembled closed-loop matrix. States are stacked
/// agent-major: agent i occupies block [i*n, (i+1)*n).
Trajectory simulate(const AgentDynamics& dyn, const ProtocolConfig& cfg, const Graph& g,
                    const SimConfig& sim);

/// e^{At} applied to the mean initial agent state, sampled at the given times
std::vector<Vector> reference_trajectory(const AgentDynamics& dyn,
                                         const std::vector<Vector>& x0_agents,
                                         const Vector& times);

SyncMetrics compute_metrics(const Trajectory& traj, const std::vector<Vector>& reference,
                            std::size_t n_agents, std::size_t state_dim);

/// largest elementwise violation of |u_i| <= E|zeta_i| over all recorded
/// samples, with u_i = -rho*K*zeta_i and zeta_i = sum_j l_ij x_j
double input_bound_max_violation(const Trajectory& traj, const AgentDynamics& dyn,
                                 const ProtocolConfig& cfg, const Graph& g);

// trajectory CSV: "t,agent,coord,value", times with 6 fractional digits
void write_trajectory_csv(const Trajectory& traj, std::size_t n_agents, std::size_t state_dim,
                          const std::string& path);
void write_metrics_json(const SyncMetrics& metrics, const std::string& path);

} // namespace posync
