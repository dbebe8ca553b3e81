#pragma once

#include <cstdint>
#include <vector>

#include "gpmpc/argp.hpp"
#include "gpmpc/gp_model.hpp"
#include "gpmpc/scp.hpp"

namespace gpmpc {

struct OracleConfig {
    int restarts = 20;
    std::uint64_t seed = 0;
    double initial_step = 0.5;
    double min_step = 1e-7;
    int max_evaluations_per_restart = 20000;
};

struct OracleResult {
    Eigen::MatrixXd inputs;
    double cost = 0.0;
    int evaluations = 0;
    std::vector<double> best_after_restart;
};

/// Multi-start coordinate pattern search of the exact penalized cost over the
/// input set. Restart 0 starts from zero inputs; later restarts start from
/// seeded uniform draws, so a run with more restarts extends one with fewer.
OracleResult oracle_solve(const GpModel& model, const TrackingMpcSpec& spec, const ArSpec& arspec,
                          const ArState& init, double lambda, const OracleConfig& config = {});

}  // namespace gpmpc
