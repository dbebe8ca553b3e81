#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gpmpc {

/// Second-order cone constraint ||F z + g||_2 <= c^T z + d0.
///
/// A cone with zero rows in F is the linear inequality c^T z + d0 >= 0.
struct SecondOrderCone {
    Eigen::MatrixXd F;
    Eigen::VectorXd g;
    Eigen::VectorXd c;
    double d0 = 0.0;
};

/// minimize   0.5 z^T P z + q^T z
/// subject to A_eq z = b_eq,  lb <= z <= ub,  every cone constraint.
/// Bounds may be +-infinity; lb_i == ub_i fixes a variable.
struct ConicProgram {
    Eigen::MatrixXd P;
    Eigen::VectorXd q;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    Eigen::VectorXd lb;
    Eigen::VectorXd ub;
    std::vector<SecondOrderCone> cones;

    /// Empty program over `dim` variables: zero cost, no constraints, free bounds.
    static ConicProgram with_dim(Eigen::Index dim);

    Eigen::Index dim() const { return q.size(); }
    void validate() const;
    double objective(const Eigen::VectorXd& z) const;
    /// Largest violation over equalities, bounds and cones at z (0 if feasible).
    double max_violation(const Eigen::VectorXd& z) const;
};

enum class SolveStatus { kOptimal, kMaxIter, kInfeasible };

std::string to_string(SolveStatus status);

struct ConicSettings {
    double tol_feas = 1e-8;
    double tol_gap = 1e-8;
    int max_iter = 200;
};

struct ConicSolution {
    Eigen::VectorXd z;
    double objective = 0.0;
    SolveStatus status = SolveStatus::kMaxIter;
    double primal_residual = 0.0;  ///< max constraint violation of z
    double dual_residual = 0.0;
    double gap = 0.0;              ///< complementarity s^T z of the final iterate
    int iterations = 0;
};

/// Primal-dual interior-point method over the product of the nonnegative
/// orthant and second-order cones, Nesterov-Todd scaled, with a Mehrotra
/// predictor-corrector step.
ConicSolution solve(const ConicProgram& prog, const ConicSettings& settings = {});

/// Debug dump with dense row-major matrices; infinite bounds are written as null.
std::string program_to_json(const ConicProgram& prog);
ConicProgram program_from_json(const std::string& text);

}  // namespace gpmpc
