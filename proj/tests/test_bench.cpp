#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "fixtures.hpp"
#include "gpmpc/bench.hpp"
#include "gpmpc/closed_loop.hpp"
#include "gpmpc/errors.hpp"
#include "gpmpc/oracle.hpp"
#include "gpmpc/plant.hpp"
#include "trace_laws.hpp"

using namespace gpmpc;

namespace {

const ArSpec kArx{1, 0, 1};

const GpModel& plant100() {
    static const GpModel model = fixtures::plant_model(100, 1);
    return model;
}

ArState measured(double y) {
    ArState s;
    s.past_means = Eigen::VectorXd::Constant(1, y);
    return s;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

void check_applied_inputs(const ClosedLoopResult& res) {
    double prev = 0.0;
    for (const StepLog& s : res.steps) {
        CHECK(s.u >= -1.0);
        CHECK(s.u <= 1.0);
        CHECK(s.u - prev >= -0.5);
        CHECK(s.u - prev <= 0.5);
        prev = s.u;
    }
}

}  // namespace

TEST_CASE("plant dynamics") {
    CHECK(plant_dynamics(0.0, 0.0) == 0.0);
    CHECK(plant_dynamics(0.0, 1.0) == doctest::Approx(-0.5 * std::tanh(1.0)).epsilon(1e-15));
    CHECK(std::abs(plant_dynamics(0.0, 1.0) + 0.3808) < 1e-4);
    CHECK(plant_dynamics(1.0, -1.0) == 1.0);

    PlantState quiet(0.0, 3);
    CHECK(plant_step(quiet, 1.0, false) == plant_dynamics(0.0, 1.0));
    CHECK(quiet.x == plant_dynamics(0.0, 1.0));
    CHECK_THROWS_AS(plant_step(quiet, std::nan(""), false), ContractError);
}

TEST_CASE("plant noise is seeded with the configured spread") {
    PlantState a(0.0, 9);
    PlantState b(0.0, 9);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double ya = a.measure(true);
        CHECK(ya == b.measure(true));
        sum += ya;
        sq += ya * ya;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean) < 4.0 * kPlantNoiseStd / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(sd - kPlantNoiseStd) < 0.05 * kPlantNoiseStd);
}

TEST_CASE("input clipping meets the limits exactly") {
    CHECK(clip_input(2.0, 0.0, -1.0, 1.0, -0.5, 0.5) == 0.5);
    CHECK(clip_input(-2.0, 0.9, -1.0, 1.0, -0.5, 0.5) == doctest::Approx(0.4));
    CHECK(clip_input(0.1, 0.0, -1.0, 1.0, -0.5, 0.5) == 0.1);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double prev = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double next = clip_input(3.0 * u(rng), prev, -1.0, 1.0, -0.5, 0.5);
        CHECK(next - prev <= 0.5);
        CHECK(next - prev >= -0.5);
        CHECK(std::abs(next) <= 1.0);
        prev = next;
    }
}

TEST_CASE("training data is reproducible and respects the input limits") {
    const TrainingData a = generate_training_data(300, 42);
    const TrainingData b = generate_training_data(300, 42);
    const TrainingData c = generate_training_data(300, 43);
    const TrainingData shorter = generate_training_data(120, 42);
    CHECK(a.inputs == b.inputs);
    CHECK(a.targets == b.targets);
    CHECK(a.inputs != c.inputs);
    CHECK(shorter.inputs == a.inputs.leftCols(120));
    CHECK(shorter.targets == a.targets.head(120));
    CHECK(a.inputs.rows() == 2);
    double prev = 0.0;
    for (Eigen::Index k = 0; k < a.inputs.cols(); ++k) {
        const double u = a.inputs(1, k);
        CHECK(u >= -1.0);
        CHECK(u <= 1.0);
        CHECK(u - prev <= 0.5);
        CHECK(u - prev >= -0.5);
        prev = u;
    }
    CHECK_THROWS_AS(generate_training_data(0, 1), ContractError);
}

TEST_CASE("noise-free training data follows the plant exactly") {
    DataGenConfig cfg;
    cfg.noise_on = false;
    const TrainingData d = generate_training_data(200, 7, cfg);
    CHECK(d.inputs(0, 0) == cfg.x0);
    for (Eigen::Index k = 0; k < d.inputs.cols(); ++k) {
        const double y_prev = d.inputs(0, k);
        const double u = d.inputs(1, k);
        CHECK(d.targets[k] == y_prev - 0.5 * std::tanh(y_prev + u * u * u));
        if (k + 1 < d.inputs.cols()) {
            CHECK(d.inputs(0, k + 1) == d.targets[k]);
        }
    }
}

TEST_CASE("reference schedule") {
    const ClosedLoopConfig cfg;
    CHECK(reference_at(cfg, 0) == -0.5);
    CHECK(reference_at(cfg, 50) == -0.5);
    CHECK(reference_at(cfg, 51) == -0.2);
    CHECK(reference_at(cfg, 99) == -0.2);
}

TEST_CASE("closed loop with no steps") {
    ClosedLoopConfig cfg;
    cfg.steps = 0;
    const ClosedLoopResult res = run_closed_loop(plant100(), TrackingMpcSpec{}, ScpConfig{}, cfg);
    CHECK(res.steps.empty());
    CHECK(res.reports.empty());
}

TEST_CASE("closed loop is deterministic and keeps inputs feasible") {
    ClosedLoopConfig cfg;
    cfg.steps = 12;
    cfg.seed = 5;
    const ClosedLoopResult a = run_closed_loop(plant100(), TrackingMpcSpec{}, ScpConfig{}, cfg);
    const ClosedLoopResult b = run_closed_loop(plant100(), TrackingMpcSpec{}, ScpConfig{}, cfg);
    REQUIRE(a.steps.size() == 12);
    REQUIRE(b.steps.size() == 12);
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].step == static_cast<int>(i));
        CHECK(a.steps[i].u == b.steps[i].u);
        CHECK(a.steps[i].y_meas == b.steps[i].y_meas);
        CHECK(a.steps[i].x_true == b.steps[i].x_true);
        CHECK(a.steps[i].y_pred == b.steps[i].y_pred);
        CHECK(a.steps[i].iterations == b.steps[i].iterations);
        CHECK(a.steps[i].phi == b.steps[i].phi);
    }
    check_applied_inputs(a);
    for (const ScpReport& r : a.reports) {
        CHECK(trace_laws::check(r, ScpConfig{}).empty());
    }

    const std::string csv = (std::filesystem::temp_directory_path() / "gpmpc_test_log.csv").string();
    write_log_csv(csv, a);
    const auto lines = read_lines(csv);
    std::filesystem::remove(csv);
    REQUIRE(lines.size() == 13);
    CHECK(lines[0].rfind("step,reference,u,", 0) == 0);
    const nlohmann::json trace = nlohmann::json::parse(trace_to_json(a));
    REQUIRE(trace.is_array());
    CHECK(trace.size() == 12);
    CHECK(trace[0].at("report").at("iterations").size() == a.reports[0].iterations.size());
}

TEST_CASE("closed loop tracks both setpoints with a 400-point model") {
    const GpModel model = fixtures::plant_model(400, 1);
    const ClosedLoopConfig cfg;
    const ClosedLoopResult res = run_closed_loop(model, TrackingMpcSpec{}, ScpConfig{}, cfg);
    REQUIRE(res.steps.size() == 100);
    check_applied_inputs(res);
    for (int t = 41; t <= 50; ++t) {
        CHECK(std::abs(res.steps[static_cast<std::size_t>(t)].y_pred - (-0.5)) <= 0.075);
    }
    for (int t = 90; t < 100; ++t) {
        CHECK(std::abs(res.steps[static_cast<std::size_t>(t)].y_pred - (-0.2)) <= 0.075);
    }
}

TEST_CASE("oracle restarts only improve") {
    TrackingMpcSpec spec;
    spec.horizon = 4;
    spec.set_constant_reference(-0.5);
    OracleConfig one;
    one.restarts = 1;
    OracleConfig many;
    many.restarts = 8;
    const OracleResult a = oracle_solve(plant100(), spec, kArx, measured(0.0), 1e3, one);
    const OracleResult b = oracle_solve(plant100(), spec, kArx, measured(0.0), 1e3, many);
    CHECK(b.cost <= a.cost);
    REQUIRE(b.best_after_restart.size() == 8);
    CHECK(b.best_after_restart[0] == a.cost);
    for (std::size_t i = 1; i < b.best_after_restart.size(); ++i) {
        CHECK(b.best_after_restart[i] <= b.best_after_restart[i - 1]);
    }
    const Rollout r = rollout_mean(plant100(), kArx, measured(0.0), b.inputs);
    CHECK(penalty_cost(spec, r, b.inputs, 1e3) == b.cost);
    CHECK(project_inputs(spec, b.inputs) == b.inputs);
}

TEST_CASE("oracle on a null objective costs nothing") {
    TrackingMpcSpec spec;
    spec.horizon = 3;
    spec.set_constant_reference(0.0);
    spec.weight_output = 0.0;
    spec.weight_input_rate = 0.0;
    spec.y_lo = -100.0;
    spec.y_hi = 100.0;
    spec.terminal_delta = 100.0;
    OracleConfig cfg;
    cfg.restarts = 3;
    const OracleResult res = oracle_solve(plant100(), spec, kArx, measured(0.1), 1e3, cfg);
    CHECK(res.cost == 0.0);
}

TEST_CASE("oracle agrees with the solver on a linear plant") {
    const GpModel model = fixtures::linear_plant_model(300, 4);
    TrackingMpcSpec spec;
    spec.horizon = 4;
    spec.set_constant_reference(0.2);
    spec.weight_input_rate = 1.0;
    spec.terminal_delta = 10.0;
    ScpConfig scp;
    const ScpReport rep = scp_solve(model, spec, kArx, measured(0.0), Eigen::MatrixXd::Zero(1, 4), scp);
    OracleConfig cfg;
    cfg.restarts = 5;
    const OracleResult orc = oracle_solve(model, spec, kArx, measured(0.0), rep.lambda, cfg);
    CHECK(std::abs(orc.cost - rep.phi) <= 1e-2);
}

TEST_CASE("N grid parsing") {
    CHECK(parse_n_grid("100:500:100") == std::vector<int>{100, 200, 300, 400, 500});
    CHECK(parse_n_grid("100:1500:100").size() == 15);
    CHECK(parse_n_grid("100,500,1000") == std::vector<int>{100, 500, 1000});
    CHECK(parse_n_grid("7") == std::vector<int>{7});
    CHECK_THROWS_AS(parse_n_grid("100:50:10"), ContractError);
    CHECK_THROWS_AS(parse_n_grid("a,b"), ContractError);
    CHECK_THROWS_AS(parse_n_grid("0"), ContractError);
    CHECK_THROWS_AS(parse_n_grid("1:5:0"), ContractError);
}

TEST_CASE("summary statistics") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(coefficient_of_variation({2.0, 2.0, 2.0}) == 0.0);
    CHECK(coefficient_of_variation({1.0, 3.0}) == doctest::Approx(0.5));

    BenchResult r;
    for (int step = 0; step < 4; ++step) {
        BenchRow row;
        row.n = 100;
        row.step = step;
        row.total_time = step == 0 ? 100.0 : static_cast<double>(step);
        row.iterations = 2;
        r.rows.push_back(row);
    }
    const std::vector<BenchSummary> s = summarize(r);
    REQUIRE(s.size() == 1);
    CHECK(s[0].n == 100);
    CHECK(s[0].median_total_time == 2.0);
    CHECK(s[0].mean_total_time == doctest::Approx(2.0));
    CHECK(s[0].mean_iterations == 2.0);
}

TEST_CASE("benchmark smoke run") {
    BenchConfig cfg;
    cfg.n_grid = {100};
    cfg.steps = 3;
    const BenchResult res = benchmark(cfg);
    CHECK(res.failed_n.empty());
    REQUIRE(res.rows.size() == 3);
    for (const BenchRow& row : res.rows) {
        CHECK(row.n == 100);
        CHECK(std::isfinite(row.total_time));
        CHECK(std::isfinite(row.subproblem_time));
        CHECK(std::isfinite(row.tracking_error));
        CHECK(std::isfinite(row.margin_lo));
        CHECK(std::isfinite(row.margin_hi));
        CHECK(row.iterations >= 1);
    }
    const std::string csv = (std::filesystem::temp_directory_path() / "gpmpc_test_bench.csv").string();
    write_bench_csv(csv, res);
    const auto lines = read_lines(csv);
    std::filesystem::remove(csv);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "n,step,total_time,subproblem_time,iterations,converged,tracking_error,margin_lo,margin_hi");
}

TEST_CASE("MPC configuration files") {
    const MpcConfig defaults = mpc_config_from_json("{}");
    CHECK(defaults.spec.horizon == 12);
    CHECK(defaults.spec.weight_output == 10.0);
    CHECK(defaults.spec.weight_input_rate == 0.1);
    CHECK(defaults.spec.terminal_delta == 0.075);
    CHECK(defaults.spec.kappa == 2.0);
    CHECK(defaults.spec.y_lo == -1.2);
    CHECK(defaults.spec.y_hi == 1.2);
    CHECK(defaults.spec.u_min[0] == -1.0);
    CHECK(defaults.spec.du_max[0] == 0.5);
    CHECK(defaults.scp.rho0 == 0.5);
    CHECK(defaults.scp.lambda == 1e3);
    CHECK(defaults.scp.j_max == 30);

    const MpcConfig custom = mpc_config_from_json(R"({"horizon": 6, "Q": 3.5, "rho0": 0.25, "noise_on": false})");
    CHECK(custom.spec.horizon == 6);
    CHECK(custom.spec.weight_output == 3.5);
    CHECK(custom.scp.rho0 == 0.25);
    CHECK_FALSE(custom.loop.noise_on);

    const MpcConfig back = mpc_config_from_json(mpc_config_to_json(custom));
    CHECK(back.spec.horizon == 6);
    CHECK(back.spec.weight_output == 3.5);
    CHECK(back.scp.rho0 == 0.25);
    CHECK_FALSE(back.loop.noise_on);

    CHECK_THROWS_AS(mpc_config_from_json(R"({"horizn": 6})"), ContractError);
    CHECK_THROWS_AS(mpc_config_from_json(R"({"horizon": "six"})"), ContractError);
    CHECK_THROWS_AS(mpc_config_from_json("[1, 2]"), ContractError);
    CHECK_THROWS_AS(load_mpc_config("/nonexistent/gpmpc.json"), ContractError);
}
