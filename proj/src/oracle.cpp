#include "gpmpc/oracle.hpp"

#include <limits>
#include <random>

#include "gpmpc/errors.hpp"

namespace gpmpc {

namespace {

class PenaltyEvaluator {
public:
    PenaltyEvaluator(const GpModel& model, const TrackingMpcSpec& spec, const ArSpec& arspec, const ArState& init,
                     double lambda)
        : model_(model), spec_(spec), arspec_(arspec), init_(init), lambda_(lambda) {}

    double operator()(const Eigen::MatrixXd& inputs) {
        ++evaluations;
        const Rollout r = rollout_mean(model_, arspec_, init_, inputs);
        return penalty_cost(spec_, r, inputs, lambda_);
    }

    int evaluations = 0;

private:
    const GpModel& model_;
    const TrackingMpcSpec& spec_;
    const ArSpec& arspec_;
    const ArState& init_;
    double lambda_;
};

}  // namespace

OracleResult oracle_solve(const GpModel& model, const TrackingMpcSpec& spec, const ArSpec& arspec,
                          const ArState& init, double lambda, const OracleConfig& config) {
    spec.validate();
    init.validate(arspec);
    if (config.restarts < 1 || !(config.initial_step > 0.0) || !(config.min_step > 0.0) ||
        config.max_evaluations_per_restart < 1) {
        throw ContractError("invalid oracle settings");
    }
    if (spec.input_dim() != arspec.input_dim) {
        throw ContractError("MPC input bounds do not match the input dimension");
    }
    const Eigen::Index nu = arspec.input_dim;
    const Eigen::Index horizon = spec.horizon;
    PenaltyEvaluator cost(model, spec, arspec, init, lambda);
    std::mt19937_64 rng(config.seed);

    OracleResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < config.restarts; ++restart) {
        Eigen::MatrixXd u = Eigen::MatrixXd::Zero(nu, horizon);
        if (restart > 0) {
            for (Eigen::Index k = 0; k < horizon; ++k) {
                for (Eigen::Index c = 0; c < nu; ++c) {
                    std::uniform_real_distribution<double> draw(spec.u_min[c], spec.u_max[c]);
                    u(c, k) = draw(rng);
                }
            }
        }
        u = project_inputs(spec, u);
        double f = cost(u);
        const int budget_end = cost.evaluations + config.max_evaluations_per_restart;
        double step = config.initial_step;
        while (step >= config.min_step && cost.evaluations < budget_end) {
            bool improved = false;
            for (Eigen::Index k = 0; k < horizon; ++k) {
                for (Eigen::Index c = 0; c < nu; ++c) {
                    for (double dir : {1.0, -1.0}) {
                        Eigen::MatrixXd trial = u;
                        trial(c, k) += dir * step;
                        trial = project_inputs(spec, trial);
                        if (trial == u) {
                            continue;
                        }
                        const double ft = cost(trial);
                        if (ft < f) {
                            u = std::move(trial);
                            f = ft;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            if (!improved) {
                step *= 0.5;
            }
        }
        if (f < best.cost) {
            best.cost = f;
            best.inputs = u;
        }
        best.best_after_restart.push_back(best.cost);
    }
    best.evaluations = cost.evaluations;
    return best;
}

}  // namespace gpmpc
