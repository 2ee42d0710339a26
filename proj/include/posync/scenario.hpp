#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "posync/simulator.hpp"

namespace posync {

struct GraphSpec {
    std::string kind; // "regular", "erdos_renyi", "complete", "path", "cycle", "file"
    std::size_t n = 0;
    std::size_t d = 0;
    double p_edge = 0.0;
    std::uint64_t seed = 0;
    std::string file;
};

struct Scenario {
    AgentDynamics dynamics;
    double beta = 1.0;
    double gamma = 1.0;
    double rho = 1.0; // defaults to 1/beta when the file omits it
    GraphSpec graph;
    SimConfig sim;
    std::string outputs = "out";
    nlohmann::json echo; // normalized form, re-parses to the same Scenario
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

Graph resolve_graph(const GraphSpec& spec, std::optional<std::uint64_t> seed_override = {});

struct CheckReport {
    bool a_metzler = false;
    bool e_stabilizable = false;
    double alpha = 0.0;
    bool alpha_ok = false;
    bool rho_ok = false;
    bool shifted_metzler = false; // A - gamma*rho*|B|(E/rho)
    bool positivity_guaranteed = false;
    bool all_ok = false;
    nlohmann::json to_json() const;
};

CheckReport run_check(const Scenario& sc);

struct SolveReport {
    RegulatorSolution solution;
    bool gain_equals_input_bound; // K == E/rho elementwise
    nlohmann::json to_json() const;
};

SolveReport run_solve(const Scenario& sc);

struct SimulateReport {
    std::uint64_t seed;
    std::string graph_hash;
    double min_margin;
    SyncMetrics metrics;
    std::string trajectory_csv;
    std::string metrics_json;
    std::string summary_json;
};

/// full certify-then-simulate pipeline; writes the three artifacts under
/// out_dir and aborts (throws) if any mode fails certification
SimulateReport run_simulate(const Scenario& sc, std::optional<std::uint64_t> seed_override,
                            const std::string& out_dir);

struct BoundsReport {
    double lambda2;
    double lambdaN;
    double anderson_morley;
    bool regular;
    std::size_t degree;    // valid iff regular
    bool in_family;
    bool connected;
    nlohmann::json to_json() const;
};

BoundsReport run_bounds(const Graph& g, double beta, double gamma);

std::string graph_hash(const Graph& g);

} // namespace posync
