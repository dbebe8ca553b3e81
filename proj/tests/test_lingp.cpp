#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gpmpc/errors.hpp"
#include "gpmpc/gp_model.hpp"
#include "gpmpc/lingp.hpp"
#include "oracles.hpp"

using namespace gpmpc;

namespace {

std::vector<bool> all_active(Eigen::Index n) { return std::vector<bool>(static_cast<std::size_t>(n), true); }

}  // namespace

TEST_CASE("linearization of a linear function") {
    const Eigen::Index n = 50;
    Eigen::MatrixXd x(1, n);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(0, i) = static_cast<double>(i) / (n - 1);
        y[i] = 3.0 * x(0, i) - 1.0;
    }
    FitConfig cfg;
    cfg.fixed_noise_variance = 1e-8;
    const GpModel model = fit(x, y, cfg);
    const LinGp lg = lingp_build(model, Eigen::VectorXd::Constant(1, 0.5));
    REQUIRE(lg.m_hat.size() == 2);
    CHECK(std::abs(lg.m_hat[0] - 0.5) <= 1e-2);
    CHECK(std::abs(lg.m_hat[1] - 3.0) <= 1e-2);
}

TEST_CASE("gradient mean matches finite differences of the exact mean") {
    std::mt19937_64 rng(21);
    for (std::uint64_t s = 0; s < 15; ++s) {
        const fixtures::GpInstance inst = fixtures::random_gp_instance(200 + s);
        const GpModel model = fixtures::make_model(inst);
        const Eigen::VectorXd xc = fixtures::uniform_matrix(rng, inst.x.rows(), 1, -1.0, 1.0);
        const LinGp lg = lingp_build(model, xc);
        const Eigen::VectorXd fd = oracles::fd_gradient(
            [&](const Eigen::VectorXd& p) { return gp_predict(model, p).mean; }, xc, 1e-5);
        CHECK((lg.m_hat.tail(xc.size()) - fd).cwiseAbs().maxCoeff() <= 1e-5);
    }
}

TEST_CASE("zero delta reproduces the exact prediction") {
    std::mt19937_64 rng(22);
    for (std::uint64_t s = 0; s < 15; ++s) {
        const fixtures::GpInstance inst = fixtures::random_gp_instance(300 + s);
        const GpModel model = fixtures::make_model(inst);
        const Eigen::VectorXd xc = fixtures::uniform_matrix(rng, inst.x.rows(), 1, -1.5, 1.5);
        const LinGp lg = lingp_build(model, xc);
        const GpPrediction exact = gp_predict(model, xc);
        const GpPrediction lin = lingp_eval(lg, Eigen::VectorXd::Zero(xc.size()));
        CHECK(std::abs(lin.mean - exact.mean) <= 1e-10);
        CHECK(std::abs(lin.variance - exact.variance) <= 1e-10);
        CHECK(std::abs(lg.m_hat[0] - exact.mean) <= 1e-10);
        CHECK(std::abs(lg.v_hat(0, 0) - exact.variance) <= 1e-10);
    }
}

TEST_CASE("fully masked linearization is the exact prediction") {
    const fixtures::GpInstance inst = fixtures::random_gp_instance(5);
    const GpModel model = fixtures::make_model(inst);
    const Eigen::VectorXd xc = Eigen::VectorXd::Constant(inst.x.rows(), 0.25);
    const LinGp lg = lingp_build(model, xc, std::vector<bool>(static_cast<std::size_t>(inst.x.rows()), false));
    CHECK(lg.active_dim() == 0);
    REQUIRE(lg.m_hat.size() == 1);
    REQUIRE(lg.v_hat.rows() == 1);
    const GpPrediction exact = gp_predict(model, xc);
    CHECK(std::abs(lg.m_hat[0] - exact.mean) <= 1e-10);
    CHECK(std::abs(lg.v_hat(0, 0) - exact.variance) <= 1e-10);
    const GpPrediction lin = lingp_eval(lg, Eigen::VectorXd::Zero(0));
    CHECK(std::abs(lin.mean - exact.mean) <= 1e-10);
}

TEST_CASE("masked linearization is a marginal of the full one") {
    fixtures::GpInstance inst = fixtures::random_gp_instance(17, 3, 40);
    while (inst.x.rows() < 3) {
        inst = fixtures::random_gp_instance(inst.x.cols() + 1000, 3, 40);
    }
    const GpModel model = fixtures::make_model(inst);
    const Eigen::VectorXd xc = Eigen::VectorXd::Constant(3, -0.1);
    const LinGp full = lingp_build(model, xc);
    const LinGp part = lingp_build(model, xc, {true, false, true});
    REQUIRE(part.active.size() == 2);
    CHECK(part.active[0] == 0);
    CHECK(part.active[1] == 2);
    const std::vector<Eigen::Index> keep = {0, 1, 3};
    for (std::size_t i = 0; i < keep.size(); ++i) {
        CHECK(std::abs(part.m_hat[static_cast<Eigen::Index>(i)] - full.m_hat[keep[i]]) <= 1e-12);
        for (std::size_t j = 0; j < keep.size(); ++j) {
            CHECK(std::abs(part.v_hat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                           full.v_hat(keep[i], keep[j])) <= 1e-10);
        }
    }
}

TEST_CASE("linearized mean is affine in delta") {
    std::mt19937_64 rng(23);
    const fixtures::GpInstance inst = fixtures::random_gp_instance(31);
    const GpModel model = fixtures::make_model(inst);
    const Eigen::Index n = inst.x.rows();
    const LinGp lg = lingp_build(model, Eigen::VectorXd::Zero(n));
    const double m0 = lingp_eval(lg, Eigen::VectorXd::Zero(n)).mean;
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd d1 = fixtures::uniform_matrix(rng, n, 1, -1.0, 1.0);
        const Eigen::VectorXd d2 = fixtures::uniform_matrix(rng, n, 1, -1.0, 1.0);
        const double lhs = lingp_eval(lg, d1 + d2).mean - m0;
        const double rhs = (lingp_eval(lg, d1).mean - m0) + (lingp_eval(lg, d2).mean - m0);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("linearized variance is never negative") {
    std::mt19937_64 rng(24);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const fixtures::GpInstance inst = fixtures::random_gp_instance(400 + s);
        const GpModel model = fixtures::make_model(inst);
        const Eigen::Index n = inst.x.rows();
        const LinGp lg = lingp_build(model, fixtures::uniform_matrix(rng, n, 1, -1.0, 1.0));
        int negatives = 0;
        for (int t = 0; t < 1000; ++t) {
            const Eigen::VectorXd d = fixtures::uniform_matrix(rng, n, 1, -3.0, 3.0);
            negatives += lingp_eval(lg, d).variance < 0.0 ? 1 : 0;
        }
        CHECK(negatives == 0);
    }
}

TEST_CASE("posterior covariance is symmetric PSD and factored") {
    std::mt19937_64 rng(25);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const fixtures::GpInstance inst = fixtures::random_gp_instance(500 + s);
        const GpModel model = fixtures::make_model(inst);
        const LinGp lg = lingp_build(model, fixtures::uniform_matrix(rng, inst.x.rows(), 1, -1.0, 1.0));
        CHECK((lg.v_hat - lg.v_hat.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((lg.v_sqrt.transpose() * lg.v_sqrt - lg.v_hat).cwiseAbs().maxCoeff() <= 1e-12);
        const Eigen::Index n = lg.active_dim();
        const Eigen::MatrixXd hess = 2.0 * lg.v_hat.bottomRightCorner(n, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("linearized mean is first-order consistent") {
    std::mt19937_64 rng(26);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const fixtures::GpInstance inst = fixtures::random_gp_instance(600 + s);
        const GpModel model = fixtures::make_model(inst);
        const Eigen::Index n = inst.x.rows();
        const Eigen::VectorXd xc = fixtures::uniform_matrix(rng, n, 1, -0.8, 0.8);
        const LinGp lg = lingp_build(model, xc);
        Eigen::VectorXd dir = fixtures::uniform_matrix(rng, n, 1, -1.0, 1.0);
        dir.normalize();
        const double ell = inst.hyper.lengthscales.minCoeff();
        auto normalized_error = [&](double radius) {
            const Eigen::VectorXd d = radius * ell * dir;
            return std::abs(lingp_eval(lg, d).mean - model.predict_mean(xc + d)) / d.norm();
        };
        const double coarse = normalized_error(1e-3);
        const double fine = normalized_error(1e-4);
        CAPTURE(s);
        CAPTURE(coarse);
        CAPTURE(fine);
        // The error over |delta| shrinks in proportion to |delta|.
        CHECK(fine <= 0.2 * coarse + 1e-9);
        CHECK(coarse <= 1e-2);
    }
}

TEST_CASE("batch linearization equals single builds") {
    std::mt19937_64 rng(27);
    const fixtures::GpInstance inst = fixtures::random_gp_instance(41);
    const GpModel model = fixtures::make_model(inst);
    const Eigen::Index n = inst.x.rows();
    const Eigen::MatrixXd centers = fixtures::uniform_matrix(rng, n, 4, -1.0, 1.0);
    std::vector<std::vector<bool>> masks(4, all_active(n));
    masks[1][0] = false;
    const std::vector<LinGp> batch = lingp_build_batch(model, centers, masks);
    REQUIRE(batch.size() == 4);
    for (Eigen::Index k = 0; k < 4; ++k) {
        const LinGp single = lingp_build(model, centers.col(k), masks[static_cast<std::size_t>(k)]);
        CHECK((batch[static_cast<std::size_t>(k)].m_hat - single.m_hat).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((batch[static_cast<std::size_t>(k)].v_hat - single.v_hat).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("linearization contracts") {
    const fixtures::GpInstance inst = fixtures::random_gp_instance(3);
    const GpModel model = fixtures::make_model(inst);
    const Eigen::Index n = inst.x.rows();
    CHECK_THROWS_AS(lingp_build(model, Eigen::VectorXd::Zero(n + 1)), ContractError);
    CHECK_THROWS_AS(lingp_build(model, Eigen::VectorXd::Zero(n), all_active(n + 1)), ContractError);
    const LinGp lg = lingp_build(model, Eigen::VectorXd::Zero(n));
    CHECK_THROWS_AS(lingp_eval(lg, Eigen::VectorXd::Zero(n + 1)), ContractError);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(n);
    bad[0] = std::nan("");
    CHECK_THROWS_AS(lingp_build(model, bad), ContractError);
}
