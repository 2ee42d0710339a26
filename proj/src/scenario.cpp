#include "posync/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace posync {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError("scenario: " + path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing field");
    return j.at(key);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

Matrix parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) fail(path + "[0]", "expected a nonempty row");
    const std::size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::ostringstream rp;
        rp << path << "[" << i << "]";
        if (!j[i].is_array() || j[i].size() != cols) fail(rp.str(), "ragged row");
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = as_number(j[i][k], rp.str() + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

Vector parse_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[i] = as_number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

Scenario parse_scenario(const json& j) {
    const json& dyn = require(j, "dynamics", "");
    Matrix a = parse_matrix(require(dyn, "A", "dynamics"), "dynamics.A");
    Matrix b = parse_matrix(require(dyn, "B", "dynamics"), "dynamics.B");
    Matrix e = parse_matrix(require(dyn, "E", "dynamics"), "dynamics.E");
    Vector s = dyn.contains("s") ? parse_vector(dyn.at("s"), "dynamics.s")
                                 : Vector(a.rows(), 1.0);
    Scenario sc{AgentDynamics{std::move(a), std::move(b), std::move(e), std::move(s)}};

    const std::size_t n = sc.dynamics.A.rows();
    const std::size_t m = sc.dynamics.B.cols();
    if (!sc.dynamics.A.is_square()) fail("dynamics.A", "must be square");
    if (sc.dynamics.B.rows() != n) fail("dynamics.B", "row count must match A");
    if (sc.dynamics.E.rows() != m || sc.dynamics.E.cols() != n) {
        fail("dynamics.E", "must be " + std::to_string(m) + "x" + std::to_string(n));
    }
    if (sc.dynamics.s.size() != n) fail("dynamics.s", "dimension must match A");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (i != k && sc.dynamics.A(i, k) < 0.0) {
                std::ostringstream os;
                os << "entry [" << i << "][" << k << "] = " << sc.dynamics.A(i, k)
                   << " makes A non-Metzler";
                fail("dynamics.A", os.str());
            }
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t k = 0; k < n; ++k)
            if (sc.dynamics.E(r, k) < 0.0) {
                fail("dynamics.E", "entry [" + std::to_string(r) + "][" + std::to_string(k) +
                                       "] is negative");
            }
    for (std::size_t i = 0; i < n; ++i)
        if (sc.dynamics.s[i] <= 0.0) fail("dynamics.s", "entries must be strictly positive");

    const json& prot = require(j, "protocol", "");
    sc.beta = as_number(require(prot, "beta", "protocol"), "protocol.beta");
    sc.gamma = as_number(require(prot, "gamma", "protocol"), "protocol.gamma");
    if (sc.beta <= 0.0) fail("protocol.beta", "must be positive");
    if (sc.gamma < sc.beta) fail("protocol.gamma", "must be >= beta");
    sc.rho = prot.contains("rho") ? as_number(prot.at("rho"), "protocol.rho") : 1.0 / sc.beta;
    if (sc.rho <= 0.0) fail("protocol.rho", "must be positive");

    const json& gr = require(j, "graph", "");
    if (gr.contains("file")) {
        sc.graph.kind = "file";
        sc.graph.file = gr.at("file").get<std::string>();
    } else {
        sc.graph.kind = require(gr, "kind", "graph").get<std::string>();
        sc.graph.n = static_cast<std::size_t>(as_number(require(gr, "n", "graph"), "graph.n"));
        if (sc.graph.kind == "regular") {
            sc.graph.d = static_cast<std::size_t>(as_number(require(gr, "d", "graph"), "graph.d"));
            sc.graph.seed = gr.value("seed", 0ULL);
        } else if (sc.graph.kind == "erdos_renyi") {
            sc.graph.p_edge = as_number(require(gr, "p_edge", "graph"), "graph.p_edge");
            sc.graph.seed = gr.value("seed", 0ULL);
        } else if (sc.graph.kind != "complete" && sc.graph.kind != "path" &&
                   sc.graph.kind != "cycle") {
            fail("graph.kind", "unknown kind \"" + sc.graph.kind + "\"");
        }
    }

    if (j.contains("sim")) {
        const json& sim = j.at("sim");
        sc.sim.t_end = sim.value("t_end", sc.sim.t_end);
        sc.sim.dt = sim.value("dt", sc.sim.dt);
        sc.sim.output_stride = sim.value("output_stride", sc.sim.output_stride);
        if (sc.sim.t_end <= 0.0 || sc.sim.dt <= 0.0 || sc.sim.dt > sc.sim.t_end) {
            fail("sim", "need 0 < dt <= t_end");
        }
        if (sc.sim.output_stride == 0) fail("sim.output_stride", "must be >= 1");
        if (sim.contains("init")) {
            const json& init = sim.at("init");
            if (init.contains("states")) {
                std::vector<Vector> states;
                for (std::size_t i = 0; i < init.at("states").size(); ++i) {
                    states.push_back(parse_vector(init.at("states")[i],
                                                  "sim.init.states[" + std::to_string(i) + "]"));
                }
                sc.sim.init_states = std::move(states);
            } else {
                sc.sim.init_seed = init.value("seed", 0ULL);
                sc.sim.init_scale = init.value("scale", 5.0);
            }
        }
    }
    sc.outputs = j.value("outputs", std::string("out"));

    // normalized echo (round-trips to an identical Scenario)
    json echo;
    echo["dynamics"]["A"] = matrix_to_json(sc.dynamics.A);
    echo["dynamics"]["B"] = matrix_to_json(sc.dynamics.B);
    echo["dynamics"]["E"] = matrix_to_json(sc.dynamics.E);
    echo["dynamics"]["s"] = sc.dynamics.s;
    echo["protocol"] = {{"beta", sc.beta}, {"gamma", sc.gamma}, {"rho", sc.rho}};
    if (sc.graph.kind == "file") {
        echo["graph"] = {{"file", sc.graph.file}};
    } else {
        echo["graph"] = {{"kind", sc.graph.kind}, {"n", sc.graph.n}};
        if (sc.graph.kind == "regular") {
            echo["graph"]["d"] = sc.graph.d;
            echo["graph"]["seed"] = sc.graph.seed;
        } else if (sc.graph.kind == "erdos_renyi") {
            echo["graph"]["p_edge"] = sc.graph.p_edge;
            echo["graph"]["seed"] = sc.graph.seed;
        }
    }
    echo["sim"] = {{"t_end", sc.sim.t_end},
                   {"dt", sc.sim.dt},
                   {"output_stride", sc.sim.output_stride}};
    if (sc.sim.init_states) {
        echo["sim"]["init"]["states"] = *sc.sim.init_states;
    } else {
        echo["sim"]["init"] = {{"seed", sc.sim.init_seed}, {"scale", sc.sim.init_scale}};
    }
    echo["outputs"] = sc.outputs;
    sc.echo = std::move(echo);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ScenarioError("scenario: cannot open " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ScenarioError("scenario: " + path + ": " + e.what());
    }
    return parse_scenario(j);
}

Graph resolve_graph(const GraphSpec& spec, std::optional<std::uint64_t> seed_override) {
    const std::uint64_t seed = seed_override.value_or(spec.seed);
    if (spec.kind == "file") return load_edge_list_file(spec.file);
    if (spec.kind == "regular") return gen_random_regular(spec.n, spec.d, seed);
    if (spec.kind == "erdos_renyi") return gen_erdos_renyi(spec.n, spec.p_edge, seed);
    if (spec.kind == "complete") return gen_complete(spec.n);
    if (spec.kind == "path") return gen_path(spec.n);
    if (spec.kind == "cycle") return gen_cycle(spec.n);
    throw ScenarioError("scenario: unknown graph kind \"" + spec.kind + "\"");
}

json CheckReport::to_json() const {
    return {{"a_metzler", a_metzler},
            {"e_stabilizable", e_stabilizable},
            {"alpha", std::isinf(alpha) ? json(nullptr) : json(alpha)},
            {"alpha_condition", alpha_ok},
            {"rho_condition", rho_ok},
            {"shifted_metzler", shifted_metzler},
            {"positivity_guaranteed", positivity_guaranteed},
            {"all_ok", all_ok}};
}

CheckReport run_check(const Scenario& sc) {
    CheckReport rep;
    rep.a_metzler = is_metzler(sc.dynamics.A);
    const AgentDynamics scaled = sc.dynamics.with_input_bound_scaled(sc.rho);
    rep.e_stabilizable = check_e_stabilizable(scaled);
    rep.alpha = compute_alpha(sc.dynamics, sc.rho);
    rep.alpha_ok = check_alpha_condition(rep.alpha, sc.beta, sc.gamma);
    rep.rho_ok = sc.rho >= 1.0 / sc.beta;
    rep.shifted_metzler =
        is_metzler(sc.dynamics.A - sc.gamma * sc.rho * (sc.dynamics.B.abs() * scaled.E), 1e-12);
    if (rep.e_stabilizable) {
        const ProtocolConfig cfg{sc.beta, sc.gamma, sc.rho, solve_regulator(scaled)};
        rep.positivity_guaranteed = check_positivity(sc.dynamics, cfg).guaranteed;
    }
    rep.all_ok = rep.a_metzler && rep.e_stabilizable && rep.alpha_ok && rep.rho_ok &&
                 rep.shifted_metzler && rep.positivity_guaranteed;
    return rep;
}

json SolveReport::to_json() const {
    return {{"p", solution.p},
            {"zeta", solution.zeta},
            {"K", matrix_to_json(solution.K)},
            {"lp_objective", solution.lp_value},
            {"residual", solution.residual},
            {"gain_equals_input_bound", gain_equals_input_bound}};
}

SolveReport run_solve(const Scenario& sc) {
    const AgentDynamics scaled = sc.dynamics.with_input_bound_scaled(sc.rho);
    SolveReport rep{solve_regulator(scaled), true};
    for (std::size_t r = 0; r < scaled.E.rows(); ++r)
        for (std::size_t k = 0; k < scaled.E.cols(); ++k)
            if (rep.solution.K(r, k) != scaled.E(r, k)) rep.gain_equals_input_bound = false;
    return rep;
}

std::string graph_hash(const Graph& g) {
    std::ostringstream os;
    save_edge_list(g, os);
    const std::string text = os.str();
    // FNV-1a
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

SimulateReport run_simulate(const Scenario& sc, std::optional<std::uint64_t> seed_override,
                            const std::string& out_dir) {
    const Graph g = resolve_graph(sc.graph, seed_override);
    if (!bfs_connected(g)) throw ScenarioError("simulate: graph is not connected");

    const ValidationReport val = validate_protocol(sc.dynamics, sc.beta, sc.gamma, sc.rho);
    if (!val.ok) {
        std::string msg = "simulate: protocol hypotheses violated:";
        for (const std::string& v : val.violations) msg += " " + v + ";";
        throw ScenarioError(msg);
    }

    const ProtocolConfig cfg = make_protocol(sc.dynamics, sc.beta, sc.gamma, sc.rho);
    const ProtocolCertificate cert = certify_graph(sc.dynamics, cfg, g);

    SimConfig sim = sc.sim;
    if (seed_override && !sim.init_states) sim.init_seed = *seed_override;

    const Trajectory traj = simulate(sc.dynamics, cfg, g, sim);
    const std::vector<Vector> init = initial_agent_states(sc.dynamics, g, sim);
    const std::vector<Vector> ref = reference_trajectory(sc.dynamics, init, traj.times);
    const SyncMetrics metrics = compute_metrics(traj, ref, g.n, sc.dynamics.state_dim());

    std::filesystem::create_directories(out_dir);
    SimulateReport rep;
    rep.seed = seed_override.value_or(sim.init_seed);
    rep.graph_hash = graph_hash(g);
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const ModeCertificate& mc : cert.mode_certificates) {
        rep.min_margin = std::min(rep.min_margin, mc.margin);
    }
    rep.metrics = metrics;
    rep.trajectory_csv = out_dir + "/trajectory.csv";
    rep.metrics_json = out_dir + "/metrics.json";
    rep.summary_json = out_dir + "/summary.json";

    write_trajectory_csv(traj, g.n, sc.dynamics.state_dim(), rep.trajectory_csv);
    write_metrics_json(metrics, rep.metrics_json);

    json summary;
    summary["seed"] = rep.seed;
    summary["graph_hash"] = rep.graph_hash;
    summary["scenario"] = sc.echo;
    summary["positivity_guaranteed"] = cert.positivity.guaranteed;
    summary["degree_bound_ok"] = cert.degree_bound_ok;
    json margins = json::array();
    for (const ModeCertificate& mc : cert.mode_certificates) {
        margins.push_back({{"lambda", mc.lambda}, {"margin", mc.margin}});
    }
    summary["mode_certificates"] = margins;
    summary["half_life"] =
        std::isinf(metrics.half_life) ? json(nullptr) : json(metrics.half_life);
    std::ofstream os(rep.summary_json);
    if (!os) throw std::runtime_error("cannot open for writing: " + rep.summary_json);
    os << summary.dump(2) << "\n";
    return rep;
}

json BoundsReport::to_json() const {
    json j = {{"lambda2", lambda2},
              {"lambdaN", lambdaN},
              {"anderson_morley", anderson_morley},
              {"connected", connected},
              {"in_family", in_family},
              {"regular", regular}};
    if (regular) j["two_d_bound"] = 2.0 * static_cast<double>(degree);
    return j;
}

BoundsReport run_bounds(const Graph& g, double beta, double gamma) {
    const SpectralSummary s = spectral_summary(g);
    BoundsReport rep;
    rep.lambda2 = s.lambda2;
    rep.lambdaN = s.lambdaN;
    rep.anderson_morley = g.edges.empty() ? 0.0 : anderson_morley_bound(g);
    rep.connected = s.is_connected;
    const std::vector<double> deg = weighted_degrees(g);
    rep.regular = !deg.empty();
    for (double d : deg)
        if (d != deg[0]) rep.regular = false;
    rep.degree = rep.regular ? static_cast<std::size_t>(std::llround(deg[0])) : 0;
    rep.in_family = in_family(g, beta, gamma);
    return rep;
}

} // namespace posync
