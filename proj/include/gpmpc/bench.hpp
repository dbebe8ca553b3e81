#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpmpc/closed_loop.hpp"
#include "gpmpc/plant.hpp"
#include "gpmpc/scp.hpp"

namespace gpmpc {

struct BenchConfig {
    std::vector<int> n_grid;
    int steps = 100;
    std::uint64_t seed = 1;
    /// Hyperparameters are fitted on the first `fit_points` observations.
    Eigen::Index fit_points = 400;
    int fit_starts = 3;
    TrackingMpcSpec spec;
    ScpConfig scp;
    ClosedLoopConfig loop;
};

struct BenchRow {
    int n = 0;
    int step = 0;
    double total_time = 0.0;
    double subproblem_time = 0.0;  ///< mean per outer iteration at this step
    int iterations = 0;
    bool converged = false;
    double tracking_error = 0.0;   ///< |y_pred - r|
    double margin_lo = 0.0;        ///< (y_pred - kappa sigma) - y_lo
    double margin_hi = 0.0;        ///< y_hi - (y_pred + kappa sigma)
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::vector<int> failed_n;
    std::vector<ClosedLoopResult> runs;  ///< one per trained N, grid order
};

/// Parses "a:b:step" (inclusive) or a comma-separated list.
std::vector<int> parse_n_grid(const std::string& text);

BenchResult benchmark(const BenchConfig& config, const std::function<void(const std::string&)>& progress = {});

void write_bench_csv(const std::string& path, const BenchResult& result);

struct BenchSummary {
    int n = 0;
    double median_total_time = 0.0;
    double mean_total_time = 0.0;
    double std_total_time = 0.0;
    double median_subproblem_time = 0.0;  ///< over all outer iterations
    double mean_iterations = 0.0;
};

/// Per-N statistics; step 0 of each run is excluded as warm-up.
std::vector<BenchSummary> summarize(const BenchResult& result);

/// Population standard deviation over mean.
double coefficient_of_variation(const std::vector<double>& values);

double median(std::vector<double> values);

/// Configuration file for `run`: every field optional, defaults follow the
/// benchmark example.
struct MpcConfig {
    TrackingMpcSpec spec;
    ScpConfig scp;
    ClosedLoopConfig loop;
};

MpcConfig mpc_config_from_json(const std::string& text);
MpcConfig load_mpc_config(const std::string& path);
std::string mpc_config_to_json(const MpcConfig& config);

}  // namespace gpmpc
