#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

#include "gpmpc/kernel.hpp"

namespace gpmpc {

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Cholesky factorization of a covariance matrix with escalating diagonal jitter.
struct JitteredCholesky {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

/// Factors `k` (symmetric) as-is; on failure retries with jitter 1e-10, 1e-9,
/// ... up to 1e-4 added to the diagonal. Throws NumericalError if every attempt
/// fails.
JitteredCholesky factor_with_jitter(const Eigen::MatrixXd& k);

/// Zero-mean GP regression model with an ARD squared-exponential kernel.
/// Immutable after construction; the Cholesky factor of K(X,X) + sn2*I and the
/// weight vector (K + sn2*I)^-1 Y are computed once in the constructor.
class GpModel {
public:
    /// `inputs` is n x N (one training point per column).
    GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets, KernelHyper hyper);

    Eigen::Index dim() const { return inputs_.rows(); }
    Eigen::Index size() const { return inputs_.cols(); }

    const Eigen::MatrixXd& inputs() const { return inputs_; }
    const Eigen::VectorXd& targets() const { return targets_; }
    const KernelHyper& hyper() const { return hyper_; }

    /// Lower-triangular factor L with L L^T = K(X,X) + (sn2 + jitter) I.
    Eigen::MatrixXd chol() const { return factor_.llt.matrixL(); }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    double jitter() const { return factor_.jitter; }

    /// k(x, X) as a length-N vector.
    Eigen::VectorXd cross_covariance(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// L^-1 * rhs (forward substitution against the cached factor).
    Eigen::MatrixXd solve_lower(const Eigen::MatrixXd& rhs) const;

    double predict_mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    GpPrediction predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// Latent variances at each column of `xs`, computed with a single
    /// multi-right-hand-side triangular solve.
    Eigen::VectorXd predict_variances(const Eigen::MatrixXd& xs) const;

private:
    void check_input(Eigen::Index n) const;

    Eigen::MatrixXd inputs_;
    Eigen::VectorXd targets_;
    KernelHyper hyper_;
    JitteredCholesky factor_;
    Eigen::VectorXd alpha_;
    Eigen::ArrayXd inv_lengthscales_;
};

/// Predictive mean and latent variance at x_star. Variances in [-1e-12, 0)
/// are clamped to zero; anything more negative raises NumericalError.
GpPrediction gp_predict(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_star);

struct LogLikelihood {
    double value = 0.0;
    /// Gradient with respect to KernelHyper::to_log() ordering:
    /// [log l_1..log l_n, log sf2, log sn2].
    Eigen::VectorXd gradient;
};

LogLikelihood log_marginal_likelihood(const Eigen::MatrixXd& inputs,
                                      const Eigen::VectorXd& targets,
                                      const KernelHyper& hyper);

struct FitConfig {
    int n_starts = 5;
    std::uint64_t seed = 0;
    int max_iter = 200;
    double grad_tol = 1e-6;
    /// When set, the noise variance is held at this value instead of fitted.
    std::optional<double> fixed_noise_variance;
    /// When > 0, hyperparameters are fitted on the first `max_fit_points`
    /// observations only; the returned model still conditions on all data.
    Eigen::Index max_fit_points = 0;
};

/// Multi-start projected BFGS ascent of the log marginal likelihood in
/// log-hyperparameter space, bounded to
///   log l_i   in log(range_i) + [-5, 5]
///   log sf2   in [-10, 10]
///   log sn2   in [-12, 2].
GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const FitConfig& config = {});

struct TrainingData {
    Eigen::MatrixXd inputs;   // n x N
    Eigen::VectorXd targets;  // N
};

/// CSV with header `x1,...,xn,y`, one observation per row.
void write_training_csv(const std::string& path, const TrainingData& data);
TrainingData read_training_csv(const std::string& path);

/// JSON document {n, N, X (column-major), Y, lengthscales, signal_variance,
/// noise_variance}. The factorization is recomputed on load.
std::string model_to_json(const GpModel& model);
GpModel model_from_json(const std::string& text);
void save_model(const std::string& path, const GpModel& model);
GpModel load_model(const std::string& path);

}  // namespace gpmpc
