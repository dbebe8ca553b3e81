#pragma once

#include <Eigen/Dense>

#include <vector>

#include "gpmpc/gp_model.hpp"

namespace gpmpc {

/// Lag structure of an autoregressive GP model
///   y_k = f(y_{k-l}, ..., y_{k-1}, u_{k-m}, ..., u_{k-1}, u_k).
/// The GP regressor is [state, u_k] with state = [y_{k-l..k-1}, u_{k-m..k-1}].
struct ArSpec {
    int output_lag = 1;  ///< l >= 1
    int input_lag = 0;   ///< m >= 0
    int input_dim = 1;   ///< n_u >= 1

    void validate() const;
    Eigen::Index state_dim() const { return output_lag + static_cast<Eigen::Index>(input_lag) * input_dim; }
    Eigen::Index gp_dim() const { return state_dim() + input_dim; }
};

/// Autoregressive history at one time step: the l most recent output means
/// (oldest first) and the m most recent inputs (oldest first).
struct ArState {
    Eigen::VectorXd past_means;
    std::vector<Eigen::VectorXd> past_inputs;

    void validate(const ArSpec& spec) const;
    Eigen::VectorXd state_vector(const ArSpec& spec) const;
    Eigen::VectorXd gp_input(const ArSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& u) const;
    /// History one step later, after output mean `y` was produced by input `u`.
    ArState shifted(const ArSpec& spec, double y, const Eigen::Ref<const Eigen::VectorXd>& u) const;

    bool operator==(const ArState&) const = default;
};

struct Rollout {
    Eigen::VectorXd means;
    Eigen::VectorXd variances;
    std::vector<ArState> states;  ///< states[j] is the history used at step j
    Eigen::MatrixXd regressors;   ///< gp_dim x H, column j = [state_j, u_j]

    Eigen::Index horizon() const { return means.size(); }
};

/// Zero-variance multistep simulation: each predicted mean is fed back as the
/// next autoregressive output; variances are recorded but not propagated.
/// `inputs` is n_u x H. With `with_variances` false the variances are left at zero.
Rollout rollout_mean(const GpModel& model, const ArSpec& spec, const ArState& init, const Eigen::MatrixXd& inputs,
                     bool with_variances = true);

/// Origin of one state-vector entry of a delta state.
struct DeltaSource {
    enum class Kind { kMeasured, kOutput, kInput };
    Kind kind = Kind::kMeasured;
    Eigen::Index step = -1;       ///< horizon index of the referenced output/input
    Eigen::Index component = 0;   ///< input component for Kind::kInput
};

/// Where state slot `slot` of step `k` comes from. Entries before the horizon
/// start are measured history and never move.
DeltaSource delta_source(const ArSpec& spec, Eigen::Index k, Eigen::Index slot);

/// Delta states for a horizon: column k stacks
///   [dy_{k-l}, ..., dy_{k-1}, du_{k-m}, ..., du_{k-1}]
/// with zeros for pre-horizon entries. `output_deltas` has length H and
/// `input_deltas` is n_u x H. Returns state_dim x H.
Eigen::MatrixXd delta_state(const ArSpec& spec, const Eigen::VectorXd& output_deltas,
                            const Eigen::MatrixXd& input_deltas);

}  // namespace gpmpc
