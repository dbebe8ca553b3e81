#include <json.hpp>

#include "gpmpc/scp.hpp"

namespace gpmpc {

namespace {

nlohmann::json to_json_array(const Eigen::VectorXd& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

}  // namespace

std::string report_to_json(const ScpReport& report) {
    using nlohmann::json;
    json j;
    j["converged"] = report.converged;
    j["stop"] = to_string(report.stop);
    j["phi"] = report.phi;
    j["lambda"] = report.lambda;
    j["violation"] = report.violation;
    j["final_rho"] = report.final_rho;
    j["passes"] = report.passes;
    j["total_time"] = report.total_time;
    json inputs = json::array();
    for (Eigen::Index r = 0; r < report.inputs.rows(); ++r) {
        inputs.push_back(to_json_array(report.inputs.row(r).transpose()));
    }
    j["inputs"] = inputs;
    j["means"] = to_json_array(report.rollout.means);
    j["variances"] = to_json_array(report.rollout.variances);
    json iters = json::array();
    for (const auto& rec : report.iterations) {
        iters.push_back({{"pass", rec.pass},
                         {"iteration", rec.iteration},
                         {"lambda", rec.lambda},
                         {"phi", rec.phi},
                         {"phi_candidate", rec.phi_candidate},
                         {"phi_predicted", rec.phi_predicted},
                         {"delta_actual", rec.delta_actual},
                         {"delta_predicted", rec.delta_predicted},
                         {"ratio", rec.ratio},
                         {"rho", rec.rho},
                         {"rho_next", rec.rho_next},
                         {"accepted", rec.accepted},
                         {"terminal", rec.terminal},
                         {"conic_iterations", rec.conic_iterations},
                         {"subproblem_time", rec.subproblem_time},
                         {"rollout_time", rec.rollout_time},
                         {"linearize_time", rec.linearize_time}});
    }
    j["iterations"] = iters;
    return j.dump(2);
}

}  // namespace gpmpc
