#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gpmpc/bench.hpp"
#include "gpmpc/closed_loop.hpp"
#include "gpmpc/errors.hpp"
#include "gpmpc/gp_model.hpp"
#include "gpmpc/oracle.hpp"
#include "gpmpc/plant.hpp"
#include "gpmpc/scp.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw gpmpc::ContractError("cannot open " + path + " for writing");
    }
    out << text << '\n';
}

int cmd_gen_data(Eigen::Index n, std::uint64_t seed, bool no_noise, const std::string& out) {
    gpmpc::DataGenConfig cfg;
    cfg.noise_on = !no_noise;
    gpmpc::write_training_csv(out, gpmpc::generate_training_data(n, seed, cfg));
    std::cout << "wrote " << n << " rows to " << out << '\n';
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& out, std::uint64_t seed, int starts,
              Eigen::Index fit_points) {
    const gpmpc::TrainingData data = gpmpc::read_training_csv(data_path);
    gpmpc::FitConfig cfg;
    cfg.seed = seed;
    cfg.n_starts = starts;
    cfg.max_fit_points = fit_points;
    const gpmpc::GpModel model = gpmpc::fit(data.inputs, data.targets, cfg);
    gpmpc::save_model(out, model);
    const auto& h = model.hyper();
    std::cout << "N=" << model.size() << " signal_variance=" << h.signal_variance << " lengthscales=["
              << h.lengthscales.transpose() << "] noise_variance=" << h.noise_variance << '\n';
    return 0;
}

gpmpc::MpcConfig config_or_default(const std::string& path) {
    if (path.empty()) {
        gpmpc::MpcConfig cfg;
        cfg.spec.set_constant_reference(0.0);
        return cfg;
    }
    return gpmpc::load_mpc_config(path);
}

int cmd_run(const std::string& model_path, int steps, std::uint64_t seed, const std::string& config_path,
            const std::string& out, const std::string& trace) {
    const gpmpc::GpModel model = gpmpc::load_model(model_path);
    gpmpc::MpcConfig cfg = config_or_default(config_path);
    cfg.loop.steps = steps;
    cfg.loop.seed = seed;
    const gpmpc::ClosedLoopResult result = gpmpc::run_closed_loop(model, cfg.spec, cfg.scp, cfg.loop);
    gpmpc::write_log_csv(out, result);
    if (!trace.empty()) {
        write_text(trace, gpmpc::trace_to_json(result));
    }
    int converged = 0;
    int failed = 0;
    for (const auto& s : result.steps) {
        converged += s.converged ? 1 : 0;
        failed += s.solved ? 0 : 1;
    }
    std::cout << "steps=" << steps << " converged=" << converged << " solver_failures=" << failed << '\n';
    return 0;
}

int cmd_bench(const std::string& grid, int steps, std::uint64_t seed, Eigen::Index fit_points,
              const std::string& config_path, const std::string& out) {
    gpmpc::BenchConfig cfg;
    cfg.n_grid = gpmpc::parse_n_grid(grid);
    cfg.steps = steps;
    cfg.seed = seed;
    cfg.fit_points = fit_points;
    const gpmpc::MpcConfig mpc = config_or_default(config_path);
    cfg.spec = mpc.spec;
    cfg.scp = mpc.scp;
    cfg.loop = mpc.loop;
    const gpmpc::BenchResult result =
        gpmpc::benchmark(cfg, [](const std::string& msg) { std::cerr << msg << '\n'; });
    gpmpc::write_bench_csv(out, result);
    std::cout << std::setw(6) << "N" << std::setw(16) << "median_total_s" << std::setw(16) << "mean_total_s"
              << std::setw(14) << "std_total_s" << std::setw(16) << "median_sub_s" << std::setw(12) << "mean_iter"
              << '\n';
    for (const auto& s : gpmpc::summarize(result)) {
        std::cout << std::setw(6) << s.n << std::setw(16) << s.median_total_time << std::setw(16)
                  << s.mean_total_time << std::setw(14) << s.std_total_time << std::setw(16)
                  << s.median_subproblem_time << std::setw(12) << s.mean_iterations << '\n';
    }
    if (!result.failed_n.empty()) {
        std::cerr << "training failed for " << result.failed_n.size() << " model size(s)\n";
        return 2;
    }
    return 0;
}

int cmd_oracle(const std::string& model_path, int horizon, int restarts, std::uint64_t seed,
               const std::string& config_path, double y0, double reference) {
    const gpmpc::GpModel model = gpmpc::load_model(model_path);
    gpmpc::MpcConfig cfg = config_or_default(config_path);
    cfg.spec.horizon = horizon;
    cfg.spec.set_constant_reference(reference);
    const gpmpc::ArSpec arspec;
    gpmpc::ArState init;
    init.past_means = Eigen::VectorXd::Constant(1, y0);

    const gpmpc::ScpReport scp =
        gpmpc::scp_solve(model, cfg.spec, arspec, init, Eigen::MatrixXd::Zero(1, horizon), cfg.scp);
    gpmpc::OracleConfig ocfg;
    ocfg.restarts = restarts;
    ocfg.seed = seed;
    const gpmpc::OracleResult oracle = gpmpc::oracle_solve(model, cfg.spec, arspec, init, scp.lambda, ocfg);
    std::cout << std::setprecision(10);
    std::cout << "lambda=" << scp.lambda << '\n';
    std::cout << "oracle_cost=" << oracle.cost << " evaluations=" << oracle.evaluations << '\n';
    std::cout << "oracle_inputs=" << oracle.inputs << '\n';
    std::cout << "scp_cost=" << scp.phi << " converged=" << (scp.converged ? "yes" : "no")
              << " iterations=" << scp.iterations.size() << '\n';
    std::cout << "scp_inputs=" << scp.inputs << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized-GP model predictive control: data, training, closed loop and benchmarks"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-data", "Generate plant training data");
    Eigen::Index gen_n = 400;
    std::uint64_t gen_seed = 0;
    bool gen_no_noise = false;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Number of observations")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_flag("--no-noise", gen_no_noise, "Noise-free outputs");
    gen->add_option("--out", gen_out, "Output CSV")->required();

    auto* train = app.add_subcommand("train", "Fit GP hyperparameters and save the model");
    std::string train_data;
    std::string train_out;
    std::uint64_t train_seed = 0;
    int train_starts = 5;
    Eigen::Index train_fit_points = 0;
    train->add_option("--data", train_data, "Training CSV")->required();
    train->add_option("--out", train_out, "Model JSON")->required();
    train->add_option("--seed", train_seed, "Seed for random restarts");
    train->add_option("--starts", train_starts, "Optimizer starts")->check(CLI::PositiveNumber);
    train->add_option("--fit-points", train_fit_points, "Fit hyperparameters on the first K rows (0 = all)");

    auto* run = app.add_subcommand("run", "Closed-loop MPC simulation");
    std::string run_model;
    int run_steps = 100;
    std::uint64_t run_seed = 1;
    std::string run_config;
    std::string run_out;
    std::string run_trace;
    run->add_option("--model", run_model, "Model JSON")->required();
    run->add_option("--steps", run_steps, "Closed-loop steps")->check(CLI::NonNegativeNumber);
    run->add_option("--seed", run_seed, "Plant noise seed");
    run->add_option("--config", run_config, "MPC config JSON");
    run->add_option("--out", run_out, "Log CSV")->required();
    run->add_option("--trace", run_trace, "Write the per-step solver trace as JSON");

    auto* bench = app.add_subcommand("bench", "Solve-time benchmark over model sizes");
    std::string bench_grid = "100:1500:100";
    int bench_steps = 100;
    std::uint64_t bench_seed = 1;
    Eigen::Index bench_fit_points = 400;
    std::string bench_config;
    std::string bench_out;
    bench->add_option("--n-grid", bench_grid, "start:stop:step or comma list");
    bench->add_option("--steps", bench_steps, "Closed-loop steps per model")->check(CLI::NonNegativeNumber);
    bench->add_option("--seed", bench_seed, "Data and noise seed");
    bench->add_option("--fit-points", bench_fit_points, "Hyperparameter fit subset size (0 = all)");
    bench->add_option("--config", bench_config, "MPC config JSON");
    bench->add_option("--out", bench_out, "Benchmark CSV")->required();

    auto* oracle = app.add_subcommand("oracle", "Compare SCP against a multi-start derivative-free search");
    std::string oracle_model;
    int oracle_horizon = 6;
    int oracle_restarts = 20;
    std::uint64_t oracle_seed = 0;
    std::string oracle_config;
    double oracle_y0 = 0.0;
    double oracle_reference = -0.5;
    oracle->add_option("--model", oracle_model, "Model JSON")->required();
    oracle->add_option("--horizon", oracle_horizon, "Horizon")->check(CLI::PositiveNumber);
    oracle->add_option("--restarts", oracle_restarts, "Search restarts")->check(CLI::PositiveNumber);
    oracle->add_option("--seed", oracle_seed, "Restart seed");
    oracle->add_option("--config", oracle_config, "MPC config JSON");
    oracle->add_option("--y0", oracle_y0, "Most recent measured output");
    oracle->add_option("--reference", oracle_reference, "Reference value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            return cmd_gen_data(gen_n, gen_seed, gen_no_noise, gen_out);
        }
        if (*train) {
            return cmd_train(train_data, train_out, train_seed, train_starts, train_fit_points);
        }
        if (*run) {
            return cmd_run(run_model, run_steps, run_seed, run_config, run_out, run_trace);
        }
        if (*bench) {
            return cmd_bench(bench_grid, bench_steps, bench_seed, bench_fit_points, bench_config, bench_out);
        }
        if (*oracle) {
            return cmd_oracle(oracle_model, oracle_horizon, oracle_restarts, oracle_seed, oracle_config, oracle_y0,
                              oracle_reference);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
