#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gpmpc/bench.hpp"
#include "gpmpc/errors.hpp"

namespace gpmpc {

namespace {

using nlohmann::json;

// Accepts a number (one input) or an array of numbers.
Eigen::VectorXd bound_from_json(const json& j) {
    if (j.is_number()) {
        return Eigen::VectorXd::Constant(1, j.get<double>());
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
    }
    return v;
}

json bound_to_json(const Eigen::VectorXd& v) {
    if (v.size() == 1) {
        return v[0];
    }
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "horizon", "Q", "R", "S", "u_min", "u_max", "du_min", "du_max", "y_lo", "y_hi", "kappa", "delta",
        "rho0", "lambda", "r0", "r1", "r2", "beta_fail", "beta_succ", "epsilon", "j_max", "lambda_growth",
        "lambda_max", "max_penalty_rounds", "violation_tol", "rho_min", "reset_rho_each_step",
        "conic_tol_feas", "conic_tol_gap", "conic_max_iter",
        "x0", "reference_first", "reference_second", "switch_step", "noise_on"};
    return keys;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

}  // namespace

MpcConfig mpc_config_from_json(const std::string& text) {
    MpcConfig cfg;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) {
            throw ContractError("MPC config must be a JSON object");
        }
        for (const auto& item : j.items()) {
            if (known_keys().count(item.key()) == 0) {
                throw ContractError("unknown MPC config key '" + item.key() + "'");
            }
        }
        TrackingMpcSpec& s = cfg.spec;
        read(j, "horizon", s.horizon);
        read(j, "Q", s.weight_output);
        read(j, "R", s.weight_input_rate);
        read(j, "S", s.weight_variance);
        if (j.contains("u_min")) s.u_min = bound_from_json(j.at("u_min"));
        if (j.contains("u_max")) s.u_max = bound_from_json(j.at("u_max"));
        if (j.contains("du_min")) s.du_min = bound_from_json(j.at("du_min"));
        if (j.contains("du_max")) s.du_max = bound_from_json(j.at("du_max"));
        read(j, "y_lo", s.y_lo);
        read(j, "y_hi", s.y_hi);
        read(j, "kappa", s.kappa);
        read(j, "delta", s.terminal_delta);
        s.previous_input = Eigen::VectorXd::Zero(s.u_min.size());
        s.set_constant_reference(0.0);

        ScpConfig& c = cfg.scp;
        read(j, "rho0", c.rho0);
        read(j, "lambda", c.lambda);
        read(j, "r0", c.r0);
        read(j, "r1", c.r1);
        read(j, "r2", c.r2);
        read(j, "beta_fail", c.beta_fail);
        read(j, "beta_succ", c.beta_succ);
        read(j, "epsilon", c.epsilon);
        read(j, "j_max", c.j_max);
        read(j, "lambda_growth", c.lambda_growth);
        read(j, "lambda_max", c.lambda_max);
        read(j, "max_penalty_rounds", c.max_penalty_rounds);
        read(j, "violation_tol", c.violation_tol);
        read(j, "rho_min", c.rho_min);
        read(j, "reset_rho_each_step", c.reset_rho_each_step);
        read(j, "conic_tol_feas", c.conic.tol_feas);
        read(j, "conic_tol_gap", c.conic.tol_gap);
        read(j, "conic_max_iter", c.conic.max_iter);

        ClosedLoopConfig& l = cfg.loop;
        read(j, "x0", l.x0);
        read(j, "reference_first", l.reference_first);
        read(j, "reference_second", l.reference_second);
        read(j, "switch_step", l.switch_step);
        read(j, "noise_on", l.noise_on);
    } catch (const json::exception& e) {
        throw ContractError(std::string("malformed MPC config: ") + e.what());
    }
    cfg.spec.validate();
    cfg.scp.validate();
    return cfg;
}

MpcConfig load_mpc_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ContractError("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return mpc_config_from_json(buf.str());
}

std::string mpc_config_to_json(const MpcConfig& cfg) {
    const TrackingMpcSpec& s = cfg.spec;
    const ScpConfig& c = cfg.scp;
    const ClosedLoopConfig& l = cfg.loop;
    json j = {{"horizon", s.horizon},
              {"Q", s.weight_output},
              {"R", s.weight_input_rate},
              {"S", s.weight_variance},
              {"u_min", bound_to_json(s.u_min)},
              {"u_max", bound_to_json(s.u_max)},
              {"du_min", bound_to_json(s.du_min)},
              {"du_max", bound_to_json(s.du_max)},
              {"y_lo", s.y_lo},
              {"y_hi", s.y_hi},
              {"kappa", s.kappa},
              {"delta", s.terminal_delta},
              {"rho0", c.rho0},
              {"lambda", c.lambda},
              {"r0", c.r0},
              {"r1", c.r1},
              {"r2", c.r2},
              {"beta_fail", c.beta_fail},
              {"beta_succ", c.beta_succ},
              {"epsilon", c.epsilon},
              {"j_max", c.j_max},
              {"lambda_growth", c.lambda_growth},
              {"lambda_max", c.lambda_max},
              {"max_penalty_rounds", c.max_penalty_rounds},
              {"violation_tol", c.violation_tol},
              {"rho_min", c.rho_min},
              {"reset_rho_each_step", c.reset_rho_each_step},
              {"conic_tol_feas", c.conic.tol_feas},
              {"conic_tol_gap", c.conic.tol_gap},
              {"conic_max_iter", c.conic.max_iter},
              {"x0", l.x0},
              {"reference_first", l.reference_first},
              {"reference_second", l.reference_second},
              {"switch_step", l.switch_step},
              {"noise_on", l.noise_on}};
    return j.dump(2);
}

}  // namespace gpmpc
