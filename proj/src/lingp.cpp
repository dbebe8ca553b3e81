#include "gpmpc/lingp.hpp"

#include <algorithm>
#include <string>

#include "gpmpc/errors.hpp"

namespace gpmpc {

namespace {

// Eigenvalues below this (relative to the prior scale) indicate a bug rather
// than roundoff.
constexpr double kNegativeEigenTolerance = 1e-8;

std::vector<Eigen::Index> active_indices(const std::vector<bool>& mask, Eigen::Index n) {
    if (static_cast<Eigen::Index>(mask.size()) != n) {
        throw ContractError("active mask length does not match the GP input dimension");
    }
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (mask[static_cast<std::size_t>(i)]) {
            idx.push_back(i);
        }
    }
    return idx;
}

// Rows of B = [k(x, X); d/dx k(x, X)] restricted to the active dimensions,
// stored transposed (N x (1 + p)).
Eigen::MatrixXd cross_block(const GpModel& model, const Eigen::VectorXd& x, const std::vector<Eigen::Index>& active) {
    const Eigen::VectorXd k = model.cross_covariance(x);
    const auto& inputs = model.inputs();
    const auto& l = model.hyper().lengthscales;
    Eigen::MatrixXd bt(model.size(), 1 + static_cast<Eigen::Index>(active.size()));
    bt.col(0) = k;
    for (std::size_t a = 0; a < active.size(); ++a) {
        const Eigen::Index d = active[a];
        const double inv_l2 = 1.0 / (l[d] * l[d]);
        bt.col(static_cast<Eigen::Index>(a) + 1) =
            (-(x[d] - inputs.row(d).array()).transpose() * inv_l2 * k.array()).matrix();
    }
    return bt;
}

LinGp finish(const GpModel& model, const Eigen::VectorXd& x, std::vector<Eigen::Index> active,
             const Eigen::MatrixXd& bt, const Eigen::MatrixXd& w) {
    const Eigen::Index p = static_cast<Eigen::Index>(active.size());
    const auto& hyper = model.hyper();

    // Prior covariance of [f(x), grad f(x)]: cross terms vanish at zero offset.
    Eigen::MatrixXd prior = Eigen::MatrixXd::Zero(p + 1, p + 1);
    prior(0, 0) = hyper.signal_variance;
    for (Eigen::Index a = 0; a < p; ++a) {
        const double l = hyper.lengthscales[active[static_cast<std::size_t>(a)]];
        prior(a + 1, a + 1) = hyper.signal_variance / (l * l);
    }

    LinGp lg;
    lg.center = x;
    lg.active = std::move(active);
    lg.m_hat = bt.transpose() * model.alpha();

    Eigen::MatrixXd v = prior - w.transpose() * w;
    v = 0.5 * (v + v.transpose());

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the linearized posterior covariance failed");
    }
    const double scale = std::max(1.0, prior.diagonal().maxCoeff());
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -kNegativeEigenTolerance * scale) {
        throw NumericalError("linearized posterior covariance has eigenvalue " + std::to_string(min_eig));
    }
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    lg.v_sqrt = root.asDiagonal() * eig.eigenvectors().transpose();
    lg.v_hat = lg.v_sqrt.transpose() * lg.v_sqrt;
    return lg;
}

}  // namespace

LinGp lingp_build(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const std::vector<bool>& active_mask) {
    if (x.size() != model.dim()) {
        throw ContractError("linearization point dimension does not match the GP input dimension");
    }
    if (!x.allFinite()) {
        throw ContractError("linearization point must be finite");
    }
    auto active = active_indices(active_mask, model.dim());
    const Eigen::VectorXd center = x;
    const Eigen::MatrixXd bt = cross_block(model, center, active);
    const Eigen::MatrixXd w = model.solve_lower(bt);
    return finish(model, center, std::move(active), bt, w);
}

LinGp lingp_build(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
    return lingp_build(model, x, std::vector<bool>(static_cast<std::size_t>(model.dim()), true));
}

std::vector<LinGp> lingp_build_batch(const GpModel& model, const Eigen::MatrixXd& centers,
                                     const std::vector<std::vector<bool>>& active_masks) {
    if (centers.rows() != model.dim()) {
        throw ContractError("linearization point dimension does not match the GP input dimension");
    }
    if (static_cast<Eigen::Index>(active_masks.size()) != centers.cols()) {
        throw ContractError("one active mask is required per linearization point");
    }
    if (!centers.allFinite()) {
        throw ContractError("linearization points must be finite");
    }
    std::vector<std::vector<Eigen::Index>> actives;
    std::vector<Eigen::MatrixXd> blocks;
    Eigen::Index total = 0;
    for (Eigen::Index c = 0; c < centers.cols(); ++c) {
        actives.push_back(active_indices(active_masks[static_cast<std::size_t>(c)], model.dim()));
        blocks.push_back(cross_block(model, centers.col(c), actives.back()));
        total += blocks.back().cols();
    }
    Eigen::MatrixXd stacked(model.size(), total);
    Eigen::Index offset = 0;
    for (const auto& b : blocks) {
        stacked.middleCols(offset, b.cols()) = b;
        offset += b.cols();
    }
    const Eigen::MatrixXd w = model.solve_lower(stacked);

    std::vector<LinGp> out;
    out.reserve(blocks.size());
    offset = 0;
    for (std::size_t c = 0; c < blocks.size(); ++c) {
        const Eigen::Index cols = blocks[c].cols();
        out.push_back(finish(model, centers.col(static_cast<Eigen::Index>(c)), std::move(actives[c]), blocks[c],
                             w.middleCols(offset, cols)));
        offset += cols;
    }
    return out;
}

GpPrediction lingp_eval(const LinGp& lg, const Eigen::Ref<const Eigen::VectorXd>& delta) {
    if (delta.size() != lg.active_dim()) {
        throw ContractError("delta dimension does not match the active dimensions of the linearization");
    }
    Eigen::VectorXd xi(delta.size() + 1);
    xi[0] = 1.0;
    xi.tail(delta.size()) = delta;
    return {lg.m_hat.dot(xi), (lg.v_sqrt * xi).squaredNorm()};
}

}  // namespace gpmpc
