#include "gpmpc/kernel.hpp"

#include <cmath>
#include <string>

#include "gpmpc/errors.hpp"

namespace gpmpc {

void KernelHyper::validate() const {
    if (!(std::isfinite(signal_variance) && signal_variance > 0.0)) {
        throw ContractError("signal_variance must be finite and positive");
    }
    if (!(std::isfinite(noise_variance) && noise_variance >= 0.0)) {
        throw ContractError("noise_variance must be finite and non-negative");
    }
    if (lengthscales.size() == 0) {
        throw ContractError("lengthscales must not be empty");
    }
    for (Eigen::Index i = 0; i < lengthscales.size(); ++i) {
        if (!(std::isfinite(lengthscales[i]) && lengthscales[i] > 0.0)) {
            throw ContractError("lengthscale " + std::to_string(i) + " must be finite and positive");
        }
    }
}

Eigen::VectorXd KernelHyper::to_log() const {
    const Eigen::Index n = lengthscales.size();
    Eigen::VectorXd p(n + 2);
    p.head(n) = lengthscales.array().log();
    p[n] = std::log(signal_variance);
    p[n + 1] = std::log(noise_variance);
    return p;
}

KernelHyper KernelHyper::from_log(const Eigen::VectorXd& log_params) {
    detail::require(log_params.size() >= 3, "log-parameter vector needs at least 3 entries");
    const Eigen::Index n = log_params.size() - 2;
    KernelHyper h;
    h.lengthscales = log_params.head(n).array().exp();
    h.signal_variance = std::exp(log_params[n]);
    h.noise_variance = std::exp(log_params[n + 1]);
    return h;
}

namespace {

void check_dims(Eigen::Index a, Eigen::Index b, const KernelHyper& hyper) {
    if (a != hyper.dim() || b != hyper.dim()) {
        throw ContractError("kernel input dimension does not match the number of lengthscales");
    }
}

}  // namespace

double se_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& x_prime,
                 const KernelHyper& hyper) {
    check_dims(x.size(), x_prime.size(), hyper);
    const double r2 = ((x - x_prime).array() / hyper.lengthscales.array()).square().sum();
    return hyper.signal_variance * std::exp(-0.5 * r2);
}

KernelDerivatives se_kernel_derivatives(const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& x_prime,
                                        const KernelHyper& hyper) {
    check_dims(x.size(), x_prime.size(), hyper);
    KernelDerivatives d;
    d.value = se_kernel(x, x_prime, hyper);
    const Eigen::ArrayXd inv_l2 = hyper.lengthscales.array().square().inverse();
    // scaled offset (x - x') / l^2
    const Eigen::VectorXd w = ((x - x_prime).array() * inv_l2).matrix();
    d.k10 = -w * d.value;
    d.k01 = w * d.value;
    d.k11 = (Eigen::MatrixXd(inv_l2.matrix().asDiagonal()) - w * w.transpose()) * d.value;
    return d;
}

Eigen::MatrixXd se_gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const KernelHyper& hyper) {
    check_dims(a.rows(), b.rows(), hyper);
    const Eigen::ArrayXd inv_l = hyper.lengthscales.array().inverse();
    const Eigen::MatrixXd as = (a.array().colwise() * inv_l).matrix();
    const Eigen::MatrixXd bs = (b.array().colwise() * inv_l).matrix();
    // Direct differences rather than the |a|^2 + |b|^2 - 2ab expansion, which
    // cancels badly for nearby points.
    Eigen::MatrixXd k(a.cols(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.cols(); ++i) {
            k(i, j) = hyper.signal_variance * std::exp(-0.5 * (as.col(i) - bs.col(j)).squaredNorm());
        }
    }
    return k;
}

}  // namespace gpmpc
