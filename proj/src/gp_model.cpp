#include "gpmpc/gp_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "gpmpc/errors.hpp"

namespace gpmpc {

JitteredCholesky factor_with_jitter(const Eigen::MatrixXd& k) {
    JitteredCholesky out;
    out.llt.compute(k);
    if (out.llt.info() == Eigen::Success) {
        return out;
    }
    for (double jitter = 1e-10; jitter <= 1e-4 * (1.0 + 1e-9); jitter *= 10.0) {
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += jitter;
        out.llt.compute(kj);
        if (out.llt.info() == Eigen::Success) {
            out.jitter = jitter;
            return out;
        }
    }
    throw NumericalError("covariance matrix is not positive definite even with 1e-4 jitter");
}

GpModel::GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets, KernelHyper hyper)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), hyper_(std::move(hyper)) {
    hyper_.validate();
    if (inputs_.cols() < 1) {
        throw ContractError("GP needs at least one training point");
    }
    if (inputs_.cols() != targets_.size()) {
        throw ContractError("number of training inputs and targets differ");
    }
    if (inputs_.rows() != hyper_.dim()) {
        throw ContractError("training input dimension does not match the number of lengthscales");
    }
    if (!inputs_.allFinite() || !targets_.allFinite()) {
        throw ContractError("training data must be finite");
    }
    Eigen::MatrixXd k = se_gram(inputs_, inputs_, hyper_);
    k.diagonal().array() += hyper_.noise_variance;
    factor_ = factor_with_jitter(k);
    alpha_ = factor_.llt.solve(targets_);
    inv_lengthscales_ = hyper_.lengthscales.array().inverse();
}

void GpModel::check_input(Eigen::Index n) const {
    if (n != dim()) {
        throw ContractError("query dimension does not match the GP input dimension");
    }
}

Eigen::VectorXd GpModel::cross_covariance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    check_input(x.size());
    const Eigen::ArrayXd xs = x.array() * inv_lengthscales_;
    Eigen::VectorXd k(size());
    for (Eigen::Index i = 0; i < size(); ++i) {
        const double r2 = (inputs_.col(i).array() * inv_lengthscales_ - xs).square().sum();
        k[i] = hyper_.signal_variance * std::exp(-0.5 * r2);
    }
    return k;
}

Eigen::MatrixXd GpModel::solve_lower(const Eigen::MatrixXd& rhs) const {
    return factor_.llt.matrixL().solve(rhs);
}

double GpModel::predict_mean(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return cross_covariance(x).dot(alpha_);
}

namespace {

double clamp_variance(double v) {
    if (v >= 0.0) {
        return v;
    }
    if (v >= -1e-12) {
        return 0.0;
    }
    throw NumericalError("predictive variance is negative beyond roundoff: " + std::to_string(v));
}

}  // namespace

GpPrediction GpModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const Eigen::VectorXd k = cross_covariance(x);
    GpPrediction p;
    p.mean = k.dot(alpha_);
    const Eigen::VectorXd v = factor_.llt.matrixL().solve(k);
    p.variance = clamp_variance(hyper_.signal_variance - v.squaredNorm());
    return p;
}

Eigen::VectorXd GpModel::predict_variances(const Eigen::MatrixXd& xs) const {
    check_input(xs.rows());
    Eigen::MatrixXd ks(size(), xs.cols());
    for (Eigen::Index j = 0; j < xs.cols(); ++j) {
        ks.col(j) = cross_covariance(xs.col(j));
    }
    factor_.llt.matrixL().solveInPlace(ks);
    Eigen::VectorXd var(xs.cols());
    for (Eigen::Index j = 0; j < xs.cols(); ++j) {
        var[j] = clamp_variance(hyper_.signal_variance - ks.col(j).squaredNorm());
    }
    return var;
}

GpPrediction gp_predict(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_star) {
    return model.predict(x_star);
}

LogLikelihood log_marginal_likelihood(const Eigen::MatrixXd& inputs,
                                      const Eigen::VectorXd& targets,
                                      const KernelHyper& hyper) {
    hyper.validate();
    const Eigen::Index n = inputs.rows();
    const Eigen::Index count = inputs.cols();
    detail::require(count >= 1, "log marginal likelihood needs at least one observation");
    detail::require(count == targets.size(), "number of inputs and targets differ");
    detail::require(n == hyper.dim(), "input dimension does not match the number of lengthscales");

    const Eigen::MatrixXd kf = se_gram(inputs, inputs, hyper);
    Eigen::MatrixXd k = kf;
    k.diagonal().array() += hyper.noise_variance;
    const JitteredCholesky factor = factor_with_jitter(k);
    const Eigen::VectorXd alpha = factor.llt.solve(targets);

    const Eigen::MatrixXd l = factor.llt.matrixL();
    LogLikelihood out;
    out.value = -0.5 * targets.dot(alpha) - l.diagonal().array().log().sum() -
                0.5 * static_cast<double>(count) * std::log(2.0 * std::numbers::pi);

    // d/dtheta = 0.5 tr((alpha alpha^T - K^-1) dK/dtheta)
    Eigen::MatrixXd w = factor.llt.solve(Eigen::MatrixXd::Identity(count, count));
    w = alpha * alpha.transpose() - w;
    const Eigen::MatrixXd wk = w.cwiseProduct(kf);

    out.gradient.resize(n + 2);
    for (Eigen::Index d = 0; d < n; ++d) {
        const double inv_l2 = 1.0 / (hyper.lengthscales[d] * hyper.lengthscales[d]);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < count; ++j) {
            for (Eigen::Index i = 0; i < count; ++i) {
                const double diff = inputs(d, i) - inputs(d, j);
                acc += wk(i, j) * diff * diff;
            }
        }
        out.gradient[d] = 0.5 * acc * inv_l2;
    }
    out.gradient[n] = 0.5 * wk.sum();
    out.gradient[n + 1] = 0.5 * hyper.noise_variance * w.trace();
    return out;
}

namespace {

struct Bounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    Eigen::VectorXd clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

struct Objective {
    const Eigen::MatrixXd& inputs;
    const Eigen::VectorXd& targets;
    std::optional<double> fixed_noise;

    KernelHyper hyper_of(const Eigen::VectorXd& p) const {
        if (!fixed_noise) {
            return KernelHyper::from_log(p);
        }
        Eigen::VectorXd full(p.size() + 1);
        full.head(p.size()) = p;
        full[p.size()] = 0.0;
        KernelHyper h = KernelHyper::from_log(full);
        h.noise_variance = *fixed_noise;
        return h;
    }

    // Negative log likelihood and its gradient; +inf when the factorization fails.
    double operator()(const Eigen::VectorXd& p, Eigen::VectorXd& grad) const {
        try {
            const LogLikelihood ll = log_marginal_likelihood(inputs, targets, hyper_of(p));
            if (!std::isfinite(ll.value) || !ll.gradient.allFinite()) {
                return std::numeric_limits<double>::infinity();
            }
            grad = -ll.gradient.head(p.size());
            return -ll.value;
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    }
};

struct OptResult {
    Eigen::VectorXd x;
    double value = std::numeric_limits<double>::infinity();
};

// Projected BFGS with an Armijo backtracking search along the projection arc.
OptResult minimize_projected_bfgs(const Objective& f, const Bounds& bounds, Eigen::VectorXd x,
                                  int max_iter, double grad_tol) {
    const Eigen::Index dim = x.size();
    x = bounds.clamp(x);
    Eigen::VectorXd g(dim);
    double fx = f(x, g);
    OptResult best{x, fx};
    if (!std::isfinite(fx)) {
        return best;
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);

    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::VectorXd pg = x - bounds.clamp(x - g);
        if (pg.lpNorm<Eigen::Infinity>() < grad_tol) {
            break;
        }
        // Variables pinned at a bound with the gradient pushing outward stay fixed.
        std::vector<bool> pinned(static_cast<std::size_t>(dim), false);
        for (Eigen::Index i = 0; i < dim; ++i) {
            pinned[static_cast<std::size_t>(i)] = (x[i] <= bounds.lower[i] && g[i] > 0.0) ||
                                                  (x[i] >= bounds.upper[i] && g[i] < 0.0);
        }
        Eigen::VectorXd d = -h * g;
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (pinned[static_cast<std::size_t>(i)]) {
                d[i] = 0.0;
            }
        }
        if (g.dot(d) >= 0.0) {
            h.setIdentity();
            d = -g;
            for (Eigen::Index i = 0; i < dim; ++i) {
                if (pinned[static_cast<std::size_t>(i)]) {
                    d[i] = 0.0;
                }
            }
        }
        const double dmax = d.lpNorm<Eigen::Infinity>();
        double t = dmax > 2.0 ? 2.0 / dmax : 1.0;

        bool accepted = false;
        Eigen::VectorXd xn;
        Eigen::VectorXd gn(dim);
        double fn = 0.0;
        for (int ls = 0; ls < 40; ++ls) {
            xn = bounds.clamp(x + t * d);
            fn = f(xn, gn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * g.dot(xn - x)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            break;
        }
        const Eigen::VectorXd s = xn - x;
        const Eigen::VectorXd y = gn - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
            h = (id - rho * s * y.transpose()) * h * (id - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        const double decrease = fx - fn;
        x = xn;
        g = gn;
        fx = fn;
        if (decrease < 1e-12 * std::max(1.0, std::abs(fx))) {
            break;
        }
    }
    best.x = x;
    best.value = fx;
    return best;
}

}  // namespace

GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const FitConfig& config) {
    const Eigen::Index n = inputs.rows();
    const Eigen::Index count = inputs.cols();
    detail::require(count >= 1, "fit needs at least one observation");
    detail::require(n >= 1, "fit needs at least one input dimension");
    detail::require(count == targets.size(), "number of inputs and targets differ");
    detail::require(config.n_starts >= 1, "fit needs at least one start");
    if (!inputs.allFinite() || !targets.allFinite()) {
        throw ContractError("training data must be finite");
    }
    if (config.fixed_noise_variance && !(*config.fixed_noise_variance >= 0.0)) {
        throw ContractError("fixed noise variance must be non-negative");
    }

    const Eigen::Index used =
        config.max_fit_points > 0 ? std::min(config.max_fit_points, count) : count;
    const Eigen::MatrixXd x_fit = inputs.leftCols(used);
    const Eigen::VectorXd y_fit = targets.head(used);

    Eigen::VectorXd log_range(n);
    for (Eigen::Index d = 0; d < n; ++d) {
        const double range = x_fit.row(d).maxCoeff() - x_fit.row(d).minCoeff();
        log_range[d] = std::log(range > 1e-12 ? range : 1.0);
    }
    const double y_mean = y_fit.mean();
    const double y_var = used > 1 ? (y_fit.array() - y_mean).square().sum() / static_cast<double>(used - 1) : 0.0;
    const double log_var = std::log(y_var > 1e-8 ? y_var : 1.0);

    const bool fit_noise = !config.fixed_noise_variance.has_value();
    const Eigen::Index dim = n + 1 + (fit_noise ? 1 : 0);
    Bounds bounds{Eigen::VectorXd(dim), Eigen::VectorXd(dim)};
    bounds.lower.head(n) = log_range.array() - 5.0;
    bounds.upper.head(n) = log_range.array() + 5.0;
    bounds.lower[n] = -10.0;
    bounds.upper[n] = 10.0;
    if (fit_noise) {
        bounds.lower[n + 1] = -12.0;
        bounds.upper[n + 1] = 2.0;
    }

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Objective objective{x_fit, y_fit, config.fixed_noise_variance};

    OptResult best;
    for (int start = 0; start < config.n_starts; ++start) {
        Eigen::VectorXd x0(dim);
        if (start == 0) {
            x0.head(n) = log_range.array() - std::log(2.0);
            x0[n] = log_var;
            if (fit_noise) {
                x0[n + 1] = log_var + std::log(1e-2);
            }
        } else {
            for (Eigen::Index d = 0; d < n; ++d) {
                x0[d] = log_range[d] - 3.0 + 4.0 * unit(rng);
            }
            x0[n] = log_var - 2.0 + 4.0 * unit(rng);
            if (fit_noise) {
                x0[n + 1] = log_var - 10.0 + 8.0 * unit(rng);
            }
        }
        const OptResult r = minimize_projected_bfgs(objective, bounds, x0, config.max_iter, config.grad_tol);
        if (r.value < best.value) {
            best = r;
        }
    }
    if (!std::isfinite(best.value)) {
        throw FitError("no start produced a finite marginal likelihood");
    }
    return GpModel(inputs, targets, objective.hyper_of(best.x));
}

}  // namespace gpmpc
