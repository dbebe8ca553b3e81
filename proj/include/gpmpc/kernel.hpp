#pragma once

#include <Eigen/Dense>

namespace gpmpc {

/// Hyperparameters of the ARD squared-exponential kernel
///   k(x, x') = signal_variance * exp(-0.5 * sum_i (x_i - x'_i)^2 / lengthscales_i^2)
/// plus the variance of the additive Gaussian observation noise.
struct KernelHyper {
    double signal_variance = 1.0;
    Eigen::VectorXd lengthscales;
    double noise_variance = 0.0;

    Eigen::Index dim() const { return lengthscales.size(); }

    /// Throws ContractError unless signal_variance > 0, every lengthscale > 0,
    /// noise_variance >= 0 and everything is finite.
    void validate() const;

    /// Log-space parameter vector [log l_1..log l_n, log sf2, log sn2].
    Eigen::VectorXd to_log() const;
    static KernelHyper from_log(const Eigen::VectorXd& log_params);
};

double se_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& x_prime,
                 const KernelHyper& hyper);

/// First and mixed second derivatives of the SE kernel.
///   k10(i)    = d k / d x_i
///   k01(j)    = d k / d x'_j
///   k11(i, j) = d^2 k / (d x_i d x'_j)
struct KernelDerivatives {
    double value = 0.0;
    Eigen::VectorXd k10;
    Eigen::VectorXd k01;
    Eigen::MatrixXd k11;
};

KernelDerivatives se_kernel_derivatives(const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& x_prime,
                                        const KernelHyper& hyper);

/// Gram matrix K(A, B) for column-stacked inputs A (n x Na) and B (n x Nb).
Eigen::MatrixXd se_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const KernelHyper& hyper);

}  // namespace gpmpc
