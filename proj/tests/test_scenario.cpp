#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "posync/scenario.hpp"

using namespace posync;
using nlohmann::json;

namespace {

json base_scenario() {
    return json{
        {"dynamics",
         {{"A", {{-2.21, 2.40}, {0.43, -0.44}}},
          {"B", {{0.27}, {0.0}}},
          {"E", {{0.06, 0.6}}},
          {"s", {1.0, 1.0}}}},
        {"protocol", {{"beta", 1.0}, {"gamma", 13.0}, {"rho", 1.0}}},
        {"graph", {{"kind", "regular"}, {"n", 20}, {"d", 5}, {"seed", 1}}},
        {"sim", {{"t_end", 2.0}, {"dt", 0.001}, {"output_stride", 100},
                 {"init", {{"seed", 7}, {"scale", 5.0}}}}},
        {"outputs", "out/test"}};
}

void expect_error(const json& j, const std::string& needle) {
    try {
        parse_scenario(j);
        FAIL_CHECK("expected ScenarioError mentioning \"" << needle << "\"");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

} // namespace

TEST_CASE("parse_scenario normalizes and round trips through its echo") {
    const Scenario sc = parse_scenario(base_scenario());
    CHECK(sc.dynamics.A(0, 1) == 2.40);
    CHECK(sc.beta == 1.0);
    CHECK(sc.gamma == 13.0);
    CHECK(sc.rho == 1.0);
    CHECK(sc.graph.kind == "regular");
    CHECK(sc.graph.d == 5);
    CHECK(sc.sim.init_seed == 7);
    CHECK(sc.outputs == "out/test");

    const Scenario again = parse_scenario(sc.echo);
    CHECK(again.echo == sc.echo);
}

TEST_CASE("parse_scenario defaults") {
    json j = base_scenario();
    j["protocol"].erase("rho");
    j["protocol"]["beta"] = 2.0;
    j["dynamics"].erase("s");
    j.erase("sim");
    j.erase("outputs");
    const Scenario sc = parse_scenario(j);
    CHECK(sc.rho == 0.5); // 1/beta
    CHECK(sc.dynamics.s == Vector{1.0, 1.0});
    CHECK(sc.sim.t_end == 20.0);
    CHECK(sc.outputs == "out");
}

TEST_CASE("parse_scenario reports the offending field") {
    SUBCASE("missing block") {
        json j = base_scenario();
        j.erase("dynamics");
        expect_error(j, "dynamics");
    }
    SUBCASE("negative off-diagonal in A names the entry") {
        json j = base_scenario();
        j["dynamics"]["A"][1][0] = -0.5;
        expect_error(j, "dynamics.A: entry [1][0]");
    }
    SUBCASE("ragged matrix row") {
        json j = base_scenario();
        j["dynamics"]["A"][1] = {1.0};
        expect_error(j, "dynamics.A[1]");
    }
    SUBCASE("negative input bound entry") {
        json j = base_scenario();
        j["dynamics"]["E"][0][1] = -0.6;
        expect_error(j, "dynamics.E");
    }
    SUBCASE("dimension mismatch in B") {
        json j = base_scenario();
        j["dynamics"]["B"] = {{0.27}};
        expect_error(j, "dynamics.B");
    }
    SUBCASE("gamma below beta") {
        json j = base_scenario();
        j["protocol"]["gamma"] = 0.5;
        expect_error(j, "protocol.gamma");
    }
    SUBCASE("nonpositive s entry") {
        json j = base_scenario();
        j["dynamics"]["s"][0] = 0.0;
        expect_error(j, "dynamics.s");
    }
    SUBCASE("unknown graph kind") {
        json j = base_scenario();
        j["graph"] = {{"kind", "torus"}, {"n", 9}};
        expect_error(j, "graph.kind");
    }
    SUBCASE("bad sim step") {
        json j = base_scenario();
        j["sim"]["dt"] = 5.0; // larger than t_end
        expect_error(j, "sim");
    }
}

TEST_CASE("resolve_graph honors the seed override") {
    GraphSpec spec{"regular", 20, 3, 0.0, 1, ""};
    const Graph a = resolve_graph(spec);
    const Graph b = resolve_graph(spec, 1ULL);
    REQUIRE(a.edges.size() == b.edges.size());
    CHECK(graph_hash(a) == graph_hash(b));
    const Graph c = resolve_graph(spec, 2ULL);
    CHECK(graph_hash(a) != graph_hash(c));
}

TEST_CASE("run_check") {
    SUBCASE("reference data passes every gate") {
        const CheckReport rep = run_check(parse_scenario(base_scenario()));
        CHECK(rep.a_metzler);
        CHECK(rep.e_stabilizable);
        CHECK(rep.alpha == doctest::Approx(2.40 / 0.162));
        CHECK(rep.alpha_ok);
        CHECK(rep.rho_ok);
        CHECK(rep.shifted_metzler);
        CHECK(rep.positivity_guaranteed);
        CHECK(rep.all_ok);
        const json j = rep.to_json();
        CHECK(j.at("all_ok") == true);
    }
    SUBCASE("gamma beyond alpha fails the gate") {
        json sj = base_scenario();
        sj["protocol"]["gamma"] = 20.0;
        const CheckReport rep = run_check(parse_scenario(sj));
        CHECK_FALSE(rep.alpha_ok);
        CHECK_FALSE(rep.shifted_metzler);
        CHECK_FALSE(rep.all_ok);
    }
}

TEST_CASE("run_solve reproduces the gain K = E") {
    const SolveReport rep = run_solve(parse_scenario(base_scenario()));
    CHECK(rep.gain_equals_input_bound);
    const Vector oracle = posync::testing::reference_costate_oracle();
    CHECK(rep.solution.p[0] == doctest::Approx(oracle[0]));
    CHECK(rep.solution.p[1] == doctest::Approx(oracle[1]));
    CHECK(rep.solution.residual <= 1e-7);
}

TEST_CASE("run_simulate writes deterministic artifacts") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "posync-scenario-test";
    fs::remove_all(dir);

    json sj = base_scenario();
    sj["graph"] = {{"kind", "cycle"}, {"n", 6}};
    sj["sim"]["t_end"] = 1.0;
    const Scenario sc = parse_scenario(sj);

    const SimulateReport a = run_simulate(sc, std::nullopt, (dir / "a").string());
    const SimulateReport b = run_simulate(sc, std::nullopt, (dir / "b").string());

    CHECK(fs::exists(a.trajectory_csv));
    CHECK(fs::exists(a.metrics_json));
    CHECK(fs::exists(a.summary_json));
    CHECK(a.graph_hash == b.graph_hash);
    CHECK(a.metrics.disagreement == b.metrics.disagreement);
    CHECK(a.min_margin > 0.0);

    // byte-identical artifacts across reruns
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(a.trajectory_csv) == slurp(b.trajectory_csv));
    CHECK(slurp(a.metrics_json) == slurp(b.metrics_json));

    SUBCASE("summary carries the scenario echo and certificates") {
        std::ifstream in(a.summary_json);
        json summary;
        in >> summary;
        CHECK(summary.at("scenario") == sc.echo);
        CHECK(summary.at("positivity_guaranteed") == true);
        CHECK(summary.at("mode_certificates").size() == 5);
    }
    SUBCASE("invalid parameters abort before any integration") {
        json bad = sj;
        bad["protocol"]["rho"] = 0.25;
        CHECK_THROWS_AS(run_simulate(parse_scenario(bad), std::nullopt, (dir / "c").string()),
                        ScenarioError);
    }
    fs::remove_all(dir);
}

TEST_CASE("run_bounds") {
    SUBCASE("cycle C6") {
        const BoundsReport rep = run_bounds(gen_cycle(6), 1.0, 4.0);
        CHECK(rep.lambda2 == doctest::Approx(1.0));
        CHECK(rep.lambdaN == doctest::Approx(4.0));
        CHECK(rep.anderson_morley == doctest::Approx(4.0));
        CHECK(rep.regular);
        CHECK(rep.degree == 2);
        CHECK(rep.connected);
        CHECK(rep.in_family);
        CHECK(rep.to_json().at("two_d_bound") == 4.0);
    }
    SUBCASE("path P3 is not regular") {
        const BoundsReport rep = run_bounds(gen_path(3), 1.0, 3.0);
        CHECK_FALSE(rep.regular);
        CHECK_FALSE(rep.to_json().contains("two_d_bound"));
    }
}
