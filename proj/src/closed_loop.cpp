#include "gpmpc/closed_loop.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include <json.hpp>

#include "gpmpc/errors.hpp"
#include "gpmpc/plant.hpp"

namespace gpmpc {

double reference_at(const ClosedLoopConfig& config, int step) {
    return step <= config.switch_step ? config.reference_first : config.reference_second;
}

ClosedLoopResult run_closed_loop(const GpModel& model, const TrackingMpcSpec& spec, const ScpConfig& scp,
                                 const ClosedLoopConfig& config) {
    if (config.steps < 0) {
        throw ContractError("step count must be non-negative");
    }
    const ArSpec arspec;
    if (model.dim() != arspec.gp_dim()) {
        throw ContractError("closed loop expects a GP over (y_{k-1}, u_k)");
    }
    if (spec.input_dim() != 1) {
        throw ContractError("closed loop expects a scalar input");
    }
    ClosedLoopResult result;
    PlantState plant(config.x0, config.seed);
    double y_meas = plant.measure(config.noise_on);
    double u_prev = 0.0;
    ScpConfig step_config = scp;
    TrackingMpcSpec step_spec = spec;
    Eigen::MatrixXd warm = Eigen::MatrixXd::Zero(1, spec.horizon);
    bool have_solution = false;

    for (int t = 0; t < config.steps; ++t) {
        StepLog log;
        log.step = t;
        log.reference = reference_at(config, t);
        step_spec.set_constant_reference(log.reference);
        step_spec.previous_input = Eigen::VectorXd::Constant(1, u_prev);

        ArState init;
        init.past_means = Eigen::VectorXd::Constant(1, y_meas);

        Eigen::MatrixXd u_init = Eigen::MatrixXd::Zero(1, spec.horizon);
        if (have_solution) {
            u_init.leftCols(spec.horizon - 1) = warm.rightCols(spec.horizon - 1);
            u_init(0, spec.horizon - 1) = warm(0, spec.horizon - 1);
        }
        u_init = project_inputs(step_spec, u_init);

        double u = u_prev;
        try {
            ScpReport report = scp_solve(model, step_spec, arspec, init, u_init, step_config);
            u = report.inputs(0, 0);
            log.y_pred = report.rollout.means[0];
            log.sigma = std::sqrt(std::max(report.rollout.variances[0], 0.0));
            log.converged = report.converged;
            log.iterations = static_cast<int>(report.iterations.size());
            log.passes = report.passes;
            log.phi = report.phi;
            log.lambda = report.lambda;
            log.violation = report.violation;
            log.total_time = report.total_time;
            double sub_time = 0.0;
            for (const auto& rec : report.iterations) {
                sub_time += rec.subproblem_time;
            }
            log.subproblem_time = report.iterations.empty() ? 0.0 : sub_time / report.iterations.size();
            warm = report.inputs;
            have_solution = true;
            if (!scp.reset_rho_each_step) {
                step_config.rho0 = std::max(report.final_rho, scp.rho_min > 0.0 ? scp.rho_min : 1e-6);
            }
            result.reports.push_back(std::move(report));
        } catch (const ScpError& e) {
            log.solved = false;
            log.error = e.what();
            const GpPrediction p = gp_predict(model, init.gp_input(arspec, Eigen::VectorXd::Constant(1, u)));
            log.y_pred = p.mean;
            log.sigma = std::sqrt(p.variance);
        }
        log.u = u;
        y_meas = plant_step(plant, u, config.noise_on);
        log.x_true = plant.x;
        log.y_meas = y_meas;
        u_prev = u;
        result.steps.push_back(std::move(log));
    }
    return result;
}

void write_log_csv(const std::string& path, const ClosedLoopResult& result) {
    std::ofstream out(path);
    if (!out) {
        throw ContractError("cannot open " + path + " for writing");
    }
    out << std::setprecision(17);
    out << "step,reference,u,y_pred,sigma,x_true,y_meas,solved,converged,iterations,passes,phi,lambda,violation,"
           "total_time,subproblem_time\n";
    for (const auto& s : result.steps) {
        out << s.step << ',' << s.reference << ',' << s.u << ',' << s.y_pred << ',' << s.sigma << ',' << s.x_true
            << ',' << s.y_meas << ',' << (s.solved ? 1 : 0) << ',' << (s.converged ? 1 : 0) << ',' << s.iterations
            << ',' << s.passes << ',' << s.phi << ',' << s.lambda << ',' << s.violation << ',' << s.total_time << ','
            << s.subproblem_time << '\n';
    }
}

std::string trace_to_json(const ClosedLoopResult& result) {
    nlohmann::json steps = nlohmann::json::array();
    std::size_t r = 0;
    for (const auto& s : result.steps) {
        nlohmann::json entry;
        entry["step"] = s.step;
        entry["solved"] = s.solved;
        if (s.solved) {
            entry["report"] = nlohmann::json::parse(report_to_json(result.reports.at(r++)));
        } else {
            entry["error"] = s.error;
        }
        steps.push_back(entry);
    }
    return steps.dump(2);
}

}  // namespace gpmpc
