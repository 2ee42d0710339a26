#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "posync/scenario.hpp"

namespace {

using namespace posync;

void print_verdict(const char* name, bool ok) {
    std::printf("  %-28s %s\n", name, ok ? "ok" : "FAILED");
}

int do_check(const std::string& scenario_path) {
    const Scenario sc = load_scenario(scenario_path);
    const CheckReport rep = run_check(sc);
    std::printf("protocol hypotheses for %s:\n", scenario_path.c_str());
    print_verdict("A is Metzler", rep.a_metzler);
    print_verdict("pair is E-stabilizable", rep.e_stabilizable);
    std::printf("  alpha = %.6g, gamma/beta = %.6g\n", rep.alpha, sc.gamma / sc.beta);
    print_verdict("alpha >= gamma/beta", rep.alpha_ok);
    print_verdict("rho >= 1/beta", rep.rho_ok);
    print_verdict("A - gamma*rho*|B|E~ Metzler", rep.shifted_metzler);
    print_verdict("BK nonnegative (positivity)", rep.positivity_guaranteed);
    std::cout << rep.to_json().dump(2) << "\n";
    return rep.all_ok ? 0 : 1;
}

int do_solve(const std::string& scenario_path, const std::string& out_dir) {
    const Scenario sc = load_scenario(scenario_path);
    const SolveReport rep = run_solve(sc);
    std::printf("K =\n");
    for (std::size_t r = 0; r < rep.solution.K.rows(); ++r) {
        for (std::size_t c = 0; c < rep.solution.K.cols(); ++c) {
            std::printf(" %.17g", rep.solution.K(r, c));
        }
        std::printf("\n");
    }
    std::printf("K equals the scaled input bound E/rho: %s\n",
                rep.gain_equals_input_bound ? "yes" : "no");
    std::printf("residual = %.3g, objective = %.17g\n", rep.solution.residual,
                rep.solution.lp_value);
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/regulator.json";
    std::ofstream os(path);
    os << rep.to_json().dump(2) << "\n";
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int do_simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                const std::string& out_dir, unsigned batch) {
    const Scenario sc = load_scenario(scenario_path);
    const std::string base = out_dir.empty() ? sc.outputs : out_dir;
    int rc = 0;
    for (unsigned k = 0; k < std::max(batch, 1u); ++k) {
        std::optional<std::uint64_t> run_seed = seed;
        if (batch > 1) run_seed = seed.value_or(sc.sim.init_seed) + k;
        const std::string dir =
            batch > 1 ? base + "/seed_" + std::to_string(*run_seed) : base;
        const SimulateReport rep = run_simulate(sc, run_seed, dir);
        const double final_dis = rep.metrics.disagreement.back();
        std::printf("seed %llu: graph %s, min margin %.4g, final disagreement %.6g, "
                    "half-life %s\n",
                    static_cast<unsigned long long>(rep.seed), rep.graph_hash.c_str(),
                    rep.min_margin, final_dis,
                    std::isinf(rep.metrics.half_life)
                        ? "not reached"
                        : std::to_string(rep.metrics.half_life).c_str());
        std::printf("wrote %s, %s, %s\n", rep.trajectory_csv.c_str(),
                    rep.metrics_json.c_str(), rep.summary_json.c_str());
    }
    return rc;
}

int do_bounds(const std::string& scenario_path, const std::string& graph_file, double beta,
              double gamma) {
    Graph g;
    double b = beta, c = gamma;
    if (!graph_file.empty()) {
        g = load_edge_list_file(graph_file);
    } else {
        const Scenario sc = load_scenario(scenario_path);
        g = resolve_graph(sc.graph);
        if (b <= 0.0) b = sc.beta;
        if (c <= 0.0) c = sc.gamma;
    }
    if (b <= 0.0) b = 1.0;
    if (c <= 0.0) c = b;
    const BoundsReport rep = run_bounds(g, b, c);
    std::cout << rep.to_json().dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-regulator synchronization protocol for positive multi-agent systems"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, graph_file;
    std::optional<std::uint64_t> seed;
    unsigned batch = 1;
    double beta = 0.0, gamma = 0.0;

    auto* check = app.add_subcommand("check", "verify the protocol hypotheses");
    check->add_option("--scenario", scenario_path, "scenario file")->required();

    auto* solve = app.add_subcommand("solve", "solve the regulator linear program");
    solve->add_option("--scenario", scenario_path, "scenario file")->required();
    solve->add_option("--out", out_dir, "output directory")->default_val("out");

    auto* simulate = app.add_subcommand("simulate", "certify all modes and simulate");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--seed", seed, "override graph/init seed");
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--batch", batch, "number of seeded repetitions");

    auto* bounds = app.add_subcommand("bounds", "Laplacian spectrum and literature bounds");
    bounds->add_option("--scenario", scenario_path, "scenario file providing the graph");
    bounds->add_option("--graph-file", graph_file, "edge-list file (overrides the scenario)");
    bounds->add_option("--beta", beta, "family lower bound");
    bounds->add_option("--gamma", gamma, "family upper bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return do_check(scenario_path);
        if (solve->parsed()) return do_solve(scenario_path, out_dir);
        if (simulate->parsed()) return do_simulate(scenario_path, seed, out_dir, batch);
        if (bounds->parsed()) {
            if (scenario_path.empty() && graph_file.empty()) {
                std::cerr << "bounds: need --scenario or --graph-file\n";
                return 2;
            }
            return do_bounds(scenario_path, graph_file, beta, gamma);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
