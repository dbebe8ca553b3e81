#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpmpc/gp_model.hpp"
#include "gpmpc/scp.hpp"

namespace gpmpc {

struct ClosedLoopConfig {
    int steps = 100;
    std::uint64_t seed = 1;
    double x0 = 0.0;
    double reference_first = -0.5;
    double reference_second = -0.2;
    int switch_step = 50;  ///< last step of the first reference segment
    bool noise_on = true;
};

double reference_at(const ClosedLoopConfig& config, int step);

struct StepLog {
    int step = 0;
    double reference = 0.0;
    double u = 0.0;            ///< applied input
    double y_pred = 0.0;       ///< predicted mean output after the applied input
    double sigma = 0.0;        ///< predicted standard deviation of that output
    double x_true = 0.0;       ///< plant state after the input
    double y_meas = 0.0;       ///< measured output after the input
    bool solved = true;        ///< false when the solver failed and the input was held
    bool converged = false;
    int iterations = 0;
    int passes = 0;
    double phi = 0.0;
    double lambda = 0.0;
    double violation = 0.0;
    double total_time = 0.0;
    double subproblem_time = 0.0;  ///< mean conic solve time per outer iteration
    std::string error;
};

struct ClosedLoopResult {
    std::vector<StepLog> steps;
    std::vector<ScpReport> reports;  ///< one per solved step
};

/// Receding-horizon control of the benchmark plant. `spec` supplies every
/// MPC field except the reference and previous input, which are set per step.
ClosedLoopResult run_closed_loop(const GpModel& model, const TrackingMpcSpec& spec, const ScpConfig& scp,
                                 const ClosedLoopConfig& config);

void write_log_csv(const std::string& path, const ClosedLoopResult& result);
std::string trace_to_json(const ClosedLoopResult& result);

}  // namespace gpmpc
