#include "posync/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include <json.hpp>

namespace posync {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::vector<Vector> initial_agent_states(const AgentDynamics& dyn, const Graph& g,
                                         const SimConfig& sim) {
    const std::size_t n = dyn.state_dim();
    if (sim.init_states) {
        if (sim.init_states->size() != g.n) {
            throw std::invalid_argument("initial_agent_states: need one state per agent");
        }
        for (const Vector& x : *sim.init_states)
            if (x.size() != n) {
                throw std::invalid_argument("initial_agent_states: state dimension mismatch");
            }
        return *sim.init_states;
    }
    std::mt19937_64 rng(sim.init_seed);
    std::uniform_real_distribution<double> u(0.0, sim.init_scale);
    std::vector<Vector> states(g.n, Vector(n));
    for (Vector& x : states)
        for (double& v : x) v = u(rng);
    return states;
}

Trajectory simulate(const AgentDynamics& dyn, const ProtocolConfig& cfg, const Graph& g,
                    const SimConfig& sim) {
    if (sim.dt <= 0.0 || sim.dt > sim.t_end) {
        throw std::invalid_argument("simulate: need 0 < dt <= t_end");
    }
    const std::size_t n = dyn.state_dim();
    const Matrix cl = closed_loop_matrix(dyn, cfg, g);
    const std::vector<Vector> init = initial_agent_states(dyn, g, sim);
    Vector x0(g.n * n);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t k = 0; k < n; ++k) x0[i * n + k] = init[i][k];
    return integrate_linear(cl, x0, sim.t_end, sim.dt, sim.output_stride);
}

std::vector<Vector> reference_trajectory(const AgentDynamics& dyn,
                                         const std::vector<Vector>& x0_agents,
                                         const Vector& times) {
    const std::size_t n = dyn.state_dim();
    Vector mean(n, 0.0);
    for (const Vector& x : x0_agents)
        for (std::size_t k = 0; k < n; ++k) mean[k] += x[k];
    for (double& v : mean) v /= static_cast<double>(x0_agents.size());

    std::vector<Vector> ref;
    ref.reserve(times.size());
    for (double t : times) ref.push_back(expm(dyn.A, t) * mean);
    return ref;
}

SyncMetrics compute_metrics(const Trajectory& traj, const std::vector<Vector>& reference,
                            std::size_t n_agents, std::size_t state_dim) {
    if (reference.size() != traj.times.size()) {
        throw std::invalid_argument("compute_metrics: reference not aligned with trajectory");
    }
    SyncMetrics m;
    m.times = traj.times;
    const std::size_t samples = traj.times.size();
    m.disagreement.resize(samples);
    m.min_coordinate.resize(samples);
    m.sync_error.resize(samples);

    for (std::size_t s = 0; s < samples; ++s) {
        const Vector& x = traj.states[s];
        double dis = 0.0;
        double min_coord = std::numeric_limits<double>::infinity();
        // max over pairs of the inf-norm equals the per-coordinate max-minus-min
        for (std::size_t k = 0; k < state_dim; ++k) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = 0; i < n_agents; ++i) {
                const double v = x[i * state_dim + k];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            dis = std::max(dis, hi - lo);
            min_coord = std::min(min_coord, lo);
        }
        double err = 0.0;
        for (std::size_t i = 0; i < n_agents; ++i)
            for (std::size_t k = 0; k < state_dim; ++k)
                err = std::max(err, std::fabs(x[i * state_dim + k] - reference[s][k]));
        m.disagreement[s] = n_agents > 1 ? dis : 0.0;
        m.min_coordinate[s] = min_coord;
        m.sync_error[s] = err;
    }

    if (m.disagreement[0] == 0.0) {
        m.half_life = 0.0;
    } else {
        m.half_life = std::numeric_limits<double>::infinity();
        const double target = 0.5 * m.disagreement[0];
        for (std::size_t s = 0; s < samples; ++s) {
            if (m.disagreement[s] <= target) {
                m.half_life = m.times[s];
                break;
            }
        }
    }
    return m;
}

double input_bound_max_violation(const Trajectory& traj, const AgentDynamics& dyn,
                                 const ProtocolConfig& cfg, const Graph& g) {
    const std::size_t n = dyn.state_dim();
    const std::size_t mdim = dyn.input_dim();
    const Matrix lap = laplacian(g);
    double worst = 0.0;
    Vector zeta(n);
    for (const Vector& x : traj.states) {
        for (std::size_t i = 0; i < g.n; ++i) {
            std::fill(zeta.begin(), zeta.end(), 0.0);
            for (std::size_t j = 0; j < g.n; ++j) {
                const double lij = lap(i, j);
                if (lij == 0.0) continue;
                for (std::size_t k = 0; k < n; ++k) zeta[k] += lij * x[j * n + k];
            }
            for (std::size_t r = 0; r < mdim; ++r) {
                double u = 0.0, bound = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    u -= cfg.rho * cfg.regulator.K(r, k) * zeta[k];
                    bound += dyn.E(r, k) * std::fabs(zeta[k]);
                }
                worst = std::max(worst, std::fabs(u) - bound);
            }
        }
    }
    return worst;
}

void write_trajectory_csv(const Trajectory& traj, std::size_t n_agents, std::size_t state_dim,
                          const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "t,agent,coord,value\n";
    char tbuf[32];
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::snprintf(tbuf, sizeof(tbuf), "%.6f", traj.times[s]);
        for (std::size_t i = 0; i < n_agents; ++i)
            for (std::size_t k = 0; k < state_dim; ++k)
                os << tbuf << "," << i << "," << k << ","
                   << fmt17(traj.states[s][i * state_dim + k]) << "\n";
    }
}

void write_metrics_json(const SyncMetrics& metrics, const std::string& path) {
    nlohmann::json j;
    j["times"] = metrics.times;
    j["disagreement"] = metrics.disagreement;
    j["min_coordinate"] = metrics.min_coordinate;
    j["sync_error_vs_reference"] = metrics.sync_error;
    if (std::isinf(metrics.half_life)) {
        j["half_life"] = nullptr;
    } else {
        j["half_life"] = metrics.half_life;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << j.dump(2) << "\n";
}

} // namespace posync
