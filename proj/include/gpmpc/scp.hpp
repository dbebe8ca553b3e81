#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "gpmpc/argp.hpp"
#include "gpmpc/conic.hpp"
#include "gpmpc/gp_model.hpp"
#include "gpmpc/lingp.hpp"

namespace gpmpc {

/// Output-tracking MPC problem over a horizon of H steps:
///
///   minimize  sum_k Q (y_k - r_k)^2 + R |u_k - u_{k-1}|^2 + S sigma_k^2
///   s.t.      u_min <= u_k <= u_max,  du_min <= u_k - u_{k-1} <= du_max
///             y_lo <= y_k - kappa sigma_k,  y_k + kappa sigma_k <= y_hi
///             |y_{H-1} - r_{H-1}| + kappa sigma_{H-1} <= terminal_delta
///
/// u_{-1} is `previous_input`, the input applied before the horizon starts.
/// Output constraints are soft (exact penalty); input constraints are hard.
struct TrackingMpcSpec {
    int horizon = 12;
    double weight_output = 10.0;
    double weight_input_rate = 0.1;
    double weight_variance = 0.0;
    Eigen::VectorXd u_min = Eigen::VectorXd::Constant(1, -1.0);
    Eigen::VectorXd u_max = Eigen::VectorXd::Constant(1, 1.0);
    Eigen::VectorXd du_min = Eigen::VectorXd::Constant(1, -0.5);
    Eigen::VectorXd du_max = Eigen::VectorXd::Constant(1, 0.5);
    double y_lo = -1.2;
    double y_hi = 1.2;
    double kappa = 2.0;
    double terminal_delta = 0.075;
    Eigen::VectorXd reference;  ///< length H
    Eigen::VectorXd previous_input = Eigen::VectorXd::Zero(1);

    Eigen::Index input_dim() const { return u_min.size(); }
    /// Sets every horizon step of the reference to `r`.
    void set_constant_reference(double r) { reference = Eigen::VectorXd::Constant(horizon, r); }
    /// True when the subproblem carries sigma epigraph variables and cones.
    bool has_sigma_terms() const { return kappa > 0.0 || weight_variance > 0.0; }
    void validate() const;
};

struct ScpConfig {
    double rho0 = 0.5;
    double lambda = 1e3;
    double r0 = 0.01;
    double r1 = 0.25;
    double r2 = 0.7;
    double beta_fail = 0.5;
    double beta_succ = 2.0;
    double epsilon = 1e-4;
    int j_max = 30;
    double lambda_growth = 10.0;
    double lambda_max = 1e7;
    int max_penalty_rounds = 3;    ///< extra passes with a larger lambda
    double violation_tol = 1e-6;   ///< hinge total that triggers a lambda increase
    double rho_min = 1e-6;
    bool reset_rho_each_step = true;  ///< closed loop: restart every step from rho0
    ConicSettings conic;

    void validate() const;
};

/// Cost terms of a trajectory. `violation` is the total hinge violation of the
/// soft output constraints.
struct CostBreakdown {
    double tracking = 0.0;
    double rate = 0.0;
    double variance = 0.0;
    double violation = 0.0;

    double objective() const { return tracking + rate + variance; }
    double penalized(double lambda) const { return objective() + lambda * violation; }
};

/// `inputs` is n_u x H; variances below zero are treated as zero.
CostBreakdown cost_breakdown(const TrackingMpcSpec& spec, const Eigen::VectorXd& means,
                             const Eigen::VectorXd& variances, const Eigen::MatrixXd& inputs);

/// Exact penalized cost phi = J + lambda * (hinge violations) of a rollout.
double penalty_cost(const TrackingMpcSpec& spec, const Rollout& rollout, const Eigen::MatrixXd& inputs,
                    double lambda);

/// Variable layout of the convex subproblem:
///   [du (H n_u) | dy (H) | s (H, only with sigma terms) | band slack lo (H) | band slack hi (H) |
///    terminal slack lo | terminal slack hi]
struct SubproblemLayout {
    Eigen::Index horizon = 0;
    Eigen::Index input_dim = 0;
    Eigen::Index du_offset = 0;
    Eigen::Index dy_offset = 0;
    Eigen::Index sigma_offset = -1;
    Eigen::Index band_lo_offset = 0;
    Eigen::Index band_hi_offset = 0;
    Eigen::Index terminal_lo_index = 0;
    Eigen::Index terminal_hi_index = 0;
    Eigen::Index dim = 0;

    static SubproblemLayout make(Eigen::Index horizon, Eigen::Index input_dim, bool with_sigma);

    bool has_sigma() const { return sigma_offset >= 0; }
    Eigen::Index du(Eigen::Index k, Eigen::Index c = 0) const { return du_offset + k * input_dim + c; }
    Eigen::Index dy(Eigen::Index k) const { return dy_offset + k; }
    Eigen::Index sigma(Eigen::Index k) const;
    Eigen::Index band_lo(Eigen::Index k) const { return band_lo_offset + k; }
    Eigen::Index band_hi(Eigen::Index k) const { return band_hi_offset + k; }
};

struct Subproblem {
    ConicProgram program;
    SubproblemLayout layout;
    double constant = 0.0;  ///< program objective + constant = linearized penalized cost

    /// Input deltas (n_u x H) of a subproblem solution.
    Eigen::MatrixXd input_deltas(const Eigen::VectorXd& z) const;
};

/// Which GP input dimensions vary at each horizon step; history measured
/// before the horizon is fixed.
std::vector<std::vector<bool>> active_masks(const ArSpec& arspec, Eigen::Index horizon);

/// Exact-penalty subproblem linearized at the nominal trajectory, with an
/// infinity-norm trust region of size `rho` on input and output deltas.
/// `lingps[k]` must be built at `nominal.regressors.col(k)` with the masks of
/// active_masks().
Subproblem build_subproblem(const TrackingMpcSpec& spec, const ArSpec& arspec, const std::vector<LinGp>& lingps,
                            const Rollout& nominal, const Eigen::MatrixXd& nominal_inputs, double rho,
                            double lambda);

struct LinearizedOutputs {
    Eigen::VectorXd means;
    Eigen::VectorXd variances;
};

/// Means and variances predicted by the linearized models for input deltas
/// `input_deltas` (n_u x H) around the nominal trajectory.
LinearizedOutputs linearized_outputs(const ArSpec& arspec, const std::vector<LinGp>& lingps, const Rollout& nominal,
                                const Eigen::MatrixXd& input_deltas);

/// Penalized cost evaluated on the linearized models.
double predicted_cost(const TrackingMpcSpec& spec, const ArSpec& arspec, const std::vector<LinGp>& lingps,
                      const Rollout& nominal, const Eigen::MatrixXd& nominal_inputs,
                      const Eigen::MatrixXd& candidate_inputs, double lambda);

/// Maps an input sequence into the input set by clipping each step, in order,
/// to the box and to the rate limits around the previous (already clipped) input.
Eigen::MatrixXd project_inputs(const TrackingMpcSpec& spec, const Eigen::MatrixXd& inputs);

/// Exact-model trajectory with the linearizations at its regressors. The
/// variances come from the linearizations, which are exact at the centers.
struct Linearization {
    Rollout rollout;
    std::vector<LinGp> lingps;
};

Linearization linearize_trajectory(const GpModel& model, const ArSpec& arspec, const ArState& init,
                                   const Eigen::MatrixXd& inputs);

struct IterationRecord {
    int pass = 0;
    int iteration = 0;
    double lambda = 0.0;
    double phi = 0.0;              ///< cost of the current solution
    double phi_candidate = 0.0;    ///< exact cost of the subproblem solution
    double phi_predicted = 0.0;    ///< linearized cost of the subproblem solution
    double delta_actual = 0.0;
    double delta_predicted = 0.0;
    double ratio = 0.0;            ///< NaN on the stopping iteration
    double rho = 0.0;
    double rho_next = 0.0;
    bool accepted = false;
    bool terminal = false;         ///< stop test fired on this iteration
    int conic_iterations = 0;
    double subproblem_time = 0.0;  ///< seconds in the conic solver
    double rollout_time = 0.0;     ///< seconds simulating the candidate
    double linearize_time = 0.0;   ///< seconds building linearizations of the candidate
};

enum class ScpStop { kConverged, kMaxIterations, kTrustRegionFloor };

std::string to_string(ScpStop stop);

struct ScpReport {
    std::vector<IterationRecord> iterations;
    Eigen::MatrixXd inputs;  ///< n_u x H
    Rollout rollout;
    double phi = 0.0;
    double lambda = 0.0;
    double violation = 0.0;
    double final_rho = 0.0;
    bool converged = false;
    ScpStop stop = ScpStop::kMaxIterations;
    int passes = 0;
    double total_time = 0.0;
};

/// Sequential convex programming with a trust region on the linearized GP.
/// Throws ScpError if a subproblem is not solved to optimality.
ScpReport scp_solve(const GpModel& model, const TrackingMpcSpec& spec, const ArSpec& arspec, const ArState& init,
                    const Eigen::MatrixXd& u_init, const ScpConfig& config = {});

std::string report_to_json(const ScpReport& report);

}  // namespace gpmpc
