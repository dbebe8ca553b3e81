#pragma once

#include <Eigen/Dense>

#include <vector>

#include "gpmpc/gp_model.hpp"

namespace gpmpc {

/// Joint Gaussian posterior of the latent value and gradient at a point.
///
/// The latent function is linearized at `center`:
///   f(center + delta) ~ [1, delta]^T [f(center), grad f(center)]
/// where [f, grad f] | data ~ N(m_hat, v_hat). Only the active dimensions
/// carry a gradient entry; fixed dimensions are removed from m_hat and v_hat.
struct LinGp {
    Eigen::VectorXd center;
    std::vector<Eigen::Index> active;  ///< GP input indices of the gradient entries
    Eigen::VectorXd m_hat;             ///< size 1 + active.size()
    Eigen::MatrixXd v_hat;             ///< PSD, equals v_sqrt^T v_sqrt
    Eigen::MatrixXd v_sqrt;

    Eigen::Index active_dim() const { return static_cast<Eigen::Index>(active.size()); }
};

/// Builds the linearized GP of `model` at `x`. `active_mask[i]` selects the
/// input dimensions allowed to vary. Throws NumericalError when the posterior
/// covariance has an eigenvalue clearly below zero.
LinGp lingp_build(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const std::vector<bool>& active_mask);

/// Same as above with every dimension active.
LinGp lingp_build(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Builds several linearizations at once, sharing one multi-RHS triangular
/// solve against the model's Cholesky factor. `centers` is n x K.
std::vector<LinGp> lingp_build_batch(const GpModel& model, const Eigen::MatrixXd& centers,
                                     const std::vector<std::vector<bool>>& active_masks);

/// Mean m_hat^T [1, delta] and variance |v_sqrt [1, delta]|^2 of the
/// linearized process at center + delta (delta over the active dimensions).
GpPrediction lingp_eval(const LinGp& lg, const Eigen::Ref<const Eigen::VectorXd>& delta);

}  // namespace gpmpc
