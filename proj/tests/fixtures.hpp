#pragma once

// Seeded instances shared by the unit and acceptance tests.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

#include "gpmpc/conic.hpp"
#include "gpmpc/gp_model.hpp"
#include "gpmpc/plant.hpp"

namespace fixtures {

struct GpInstance {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    gpmpc::KernelHyper hyper;
};

inline Eigen::MatrixXd uniform_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double lo,
                                      double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = u(rng);
        }
    }
    return m;
}

/// Random inputs in [-1, 1]^n with smooth targets and moderate hyperparameters.
inline GpInstance random_gp_instance(std::uint64_t seed, Eigen::Index max_n = 3, Eigen::Index max_points = 50) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim(1, max_n);
    std::uniform_int_distribution<Eigen::Index> count(2, max_points);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GpInstance inst;
    const Eigen::Index n = dim(rng);
    const Eigen::Index npts = count(rng);
    inst.x = uniform_matrix(rng, n, npts, -1.0, 1.0);
    inst.y.resize(npts);
    for (Eigen::Index j = 0; j < npts; ++j) {
        inst.y[j] = std::sin(2.0 * inst.x.col(j).sum()) + 0.1 * (u(rng) - 0.5);
    }
    inst.hyper.lengthscales = (0.3 + 1.2 * Eigen::ArrayXd::NullaryExpr(n, [&] { return u(rng); })).matrix();
    inst.hyper.signal_variance = 0.5 + 1.5 * u(rng);
    inst.hyper.noise_variance = std::pow(10.0, -4.0 + 3.0 * u(rng));
    return inst;
}

inline gpmpc::GpModel make_model(const GpInstance& inst) { return gpmpc::GpModel(inst.x, inst.y, inst.hyper); }

/// Convex program over [-2, 2]^dim with a strictly convex or rank-deficient
/// quadratic cost and 1 to 3 cones that share a strictly feasible point.
inline gpmpc::ConicProgram random_conic_program(std::uint64_t seed, Eigen::Index dim) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto normal = [&](Eigen::Index r, Eigen::Index c) {
        Eigen::MatrixXd m(r, c);
        for (Eigen::Index j = 0; j < c; ++j) {
            for (Eigen::Index i = 0; i < r; ++i) {
                m(i, j) = z(rng);
            }
        }
        return m;
    };
    gpmpc::ConicProgram prog = gpmpc::ConicProgram::with_dim(dim);
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(u(rng) * static_cast<double>(dim));
    const Eigen::MatrixXd m = normal(rank, dim);
    prog.P = m.transpose() * m / static_cast<double>(dim);
    prog.q = normal(dim, 1);
    prog.lb = Eigen::VectorXd::Constant(dim, -2.0);
    prog.ub = Eigen::VectorXd::Constant(dim, 2.0);
    const Eigen::VectorXd z0 = uniform_matrix(rng, dim, 1, -1.0, 1.0);
    const int n_cones = 1 + static_cast<int>(u(rng) * 3.0);
    for (int k = 0; k < n_cones; ++k) {
        gpmpc::SecondOrderCone cone;
        const Eigen::Index rows = (k == 2) ? 0 : 1 + static_cast<Eigen::Index>(u(rng) * static_cast<double>(dim));
        cone.F = normal(rows, dim);
        cone.g = normal(rows, 1);
        cone.c = 0.5 * normal(dim, 1);
        cone.d0 = (cone.F * z0 + cone.g).norm() - cone.c.dot(z0) + 0.2 + 0.8 * u(rng);
        prog.cones.push_back(cone);
    }
    return prog;
}

/// Model of the benchmark plant trained the way the benchmark trains it.
inline gpmpc::GpModel plant_model(Eigen::Index n, std::uint64_t seed) {
    const gpmpc::TrainingData data = gpmpc::generate_training_data(n, seed);
    gpmpc::FitConfig cfg;
    cfg.seed = seed;
    cfg.n_starts = 3;
    cfg.max_fit_points = 400;
    return gpmpc::fit(data.inputs, data.targets, cfg);
}

/// Near-noiseless model of y_k = 0.8 y_{k-1} + 0.2 u_k from iid inputs in [-2, 2].
inline gpmpc::GpModel linear_plant_model(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Eigen::MatrixXd x(2, n);
    Eigen::VectorXd y(n);
    double prev = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double uk = u(rng);
        x(0, k) = prev;
        x(1, k) = uk;
        y[k] = 0.8 * prev + 0.2 * uk;
        prev = y[k];
    }
    gpmpc::FitConfig cfg;
    cfg.seed = seed;
    cfg.fixed_noise_variance = 1e-8;
    return gpmpc::fit(x, y, cfg);
}

}  // namespace fixtures
