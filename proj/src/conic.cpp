#include "gpmpc/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpmpc/errors.hpp"

namespace gpmpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepFraction = 0.99;
constexpr double kRegularization = 1e-10;
constexpr int kRefinementSteps = 3;
constexpr int kInfeasibilityCheckStart = 50;
constexpr int kInfeasibilityWindow = 25;

// Cone layout of the slack vector: n_lin orthant entries followed by the
// second-order cone blocks.
struct ConeLayout {
    Eigen::Index n_lin = 0;
    std::vector<Eigen::Index> soc_dims;
    std::vector<Eigen::Index> soc_offsets;

    Eigen::Index size() const {
        Eigen::Index total = n_lin;
        for (auto d : soc_dims) {
            total += d;
        }
        return total;
    }
    double degree() const { return static_cast<double>(n_lin + static_cast<Eigen::Index>(soc_dims.size())); }
};

// minimize 0.5 x'Px + q'x  s.t.  Ax = b,  Gx + s = h,  s in K.
struct StandardForm {
    Eigen::MatrixXd P;
    Eigen::VectorXd q;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    ConeLayout cones;
};

StandardForm to_standard_form(const ConicProgram& prog) {
    const Eigen::Index d = prog.dim();
    StandardForm sf;
    sf.P = prog.P;
    sf.q = prog.q;

    std::vector<Eigen::VectorXd> a_rows;
    std::vector<double> b_vals;
    for (Eigen::Index i = 0; i < prog.A_eq.rows(); ++i) {
        a_rows.emplace_back(prog.A_eq.row(i).transpose());
        b_vals.push_back(prog.b_eq[i]);
    }

    std::vector<Eigen::VectorXd> g_rows;
    std::vector<double> h_vals;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double lo = prog.lb[i];
        const double hi = prog.ub[i];
        if (lo == hi) {
            a_rows.emplace_back(Eigen::VectorXd::Unit(d, i));
            b_vals.push_back(lo);
            continue;
        }
        if (std::isfinite(hi)) {
            g_rows.emplace_back(Eigen::VectorXd::Unit(d, i));
            h_vals.push_back(hi);
        }
        if (std::isfinite(lo)) {
            g_rows.emplace_back(-Eigen::VectorXd::Unit(d, i));
            h_vals.push_back(-lo);
        }
    }
    for (const auto& cone : prog.cones) {
        if (cone.F.rows() == 0) {
            g_rows.emplace_back(-cone.c);
            h_vals.push_back(cone.d0);
        }
    }
    sf.cones.n_lin = static_cast<Eigen::Index>(g_rows.size());
    for (const auto& cone : prog.cones) {
        if (cone.F.rows() == 0) {
            continue;
        }
        sf.cones.soc_offsets.push_back(static_cast<Eigen::Index>(g_rows.size()));
        sf.cones.soc_dims.push_back(cone.F.rows() + 1);
        g_rows.emplace_back(-cone.c);
        h_vals.push_back(cone.d0);
        for (Eigen::Index r = 0; r < cone.F.rows(); ++r) {
            g_rows.emplace_back(-cone.F.row(r).transpose());
            h_vals.push_back(cone.g[r]);
        }
    }

    sf.A.resize(static_cast<Eigen::Index>(a_rows.size()), d);
    sf.b.resize(static_cast<Eigen::Index>(a_rows.size()));
    for (std::size_t i = 0; i < a_rows.size(); ++i) {
        sf.A.row(static_cast<Eigen::Index>(i)) = a_rows[i].transpose();
        sf.b[static_cast<Eigen::Index>(i)] = b_vals[i];
    }
    sf.G.resize(static_cast<Eigen::Index>(g_rows.size()), d);
    sf.h.resize(static_cast<Eigen::Index>(g_rows.size()));
    for (std::size_t i = 0; i < g_rows.size(); ++i) {
        sf.G.row(static_cast<Eigen::Index>(i)) = g_rows[i].transpose();
        sf.h[static_cast<Eigen::Index>(i)] = h_vals[i];
    }
    return sf;
}

// (u0 - |u1|)(u0 + |u1|), the Lorentz "determinant" without squaring cancellation.
double lorentz_det(double u0, double u1_norm) {
    return (u0 - u1_norm) * (u0 + u1_norm);
}

Eigen::VectorXd cone_identity(const ConeLayout& k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k.size());
    e.head(k.n_lin).setOnes();
    for (auto off : k.soc_offsets) {
        e[off] = 1.0;
    }
    return e;
}

// Smallest "eigenvalue" of u with respect to the cone (negative when outside).
double min_eigenvalue(const ConeLayout& k, const Eigen::VectorXd& u) {
    double m = kInf;
    if (k.n_lin > 0) {
        m = u.head(k.n_lin).minCoeff();
    }
    for (std::size_t c = 0; c < k.soc_dims.size(); ++c) {
        const Eigen::Index off = k.soc_offsets[c];
        const Eigen::Index dim = k.soc_dims[c];
        m = std::min(m, u[off] - u.segment(off + 1, dim - 1).norm());
    }
    return m;
}

Eigen::VectorXd jordan_product(const ConeLayout& k, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    Eigen::VectorXd w(u.size());
    w.head(k.n_lin) = u.head(k.n_lin).cwiseProduct(v.head(k.n_lin));
    for (std::size_t c = 0; c < k.soc_dims.size(); ++c) {
        const Eigen::Index off = k.soc_offsets[c];
        const Eigen::Index dim = k.soc_dims[c];
        const auto u1 = u.segment(off + 1, dim - 1);
        const auto v1 = v.segment(off + 1, dim - 1);
        w[off] = u.segment(off, dim).dot(v.segment(off, dim));
        w.segment(off + 1, dim - 1) = u[off] * v1 + v[off] * u1;
    }
    return w;
}

// Solves lambda o x = v for x.
Eigen::VectorXd jordan_divide(const ConeLayout& k, const Eigen::VectorXd& lambda, const Eigen::VectorXd& v) {
    Eigen::VectorXd x(v.size());
    x.head(k.n_lin) = v.head(k.n_lin).cwiseQuotient(lambda.head(k.n_lin));
    for (std::size_t c = 0; c < k.soc_dims.size(); ++c) {
        const Eigen::Index off = k.soc_offsets[c];
        const Eigen::Index dim = k.soc_dims[c];
        const double l0 = lambda[off];
        const auto l1 = lambda.segment(off + 1, dim - 1);
        const auto v1 = v.segment(off + 1, dim - 1);
        const double det = lorentz_det(l0, l1.norm());
        const double x0 = (l0 * v[off] - l1.dot(v1)) / det;
        x[off] = x0;
        x.segment(off + 1, dim - 1) = (v1 - x0 * l1) / l0;
    }
    return x;
}

// Largest alpha with u + alpha * du in the cone (u strictly inside); +inf if unbounded.
double max_step(const ConeLayout& k, const Eigen::VectorXd& u, const Eigen::VectorXd& du) {
    double alpha = kInf;
    for (Eigen::Index i = 0; i < k.n_lin; ++i) {
        if (du[i] < 0.0) {
            alpha = std::min(alpha, -u[i] / du[i]);
        }
    }
    for (std::size_t c = 0; c < k.soc_dims.size(); ++c) {
        const Eigen::Index off = k.soc_offsets[c];
        const Eigen::Index dim = k.soc_dims[c];
        const auto u1 = u.segment(off + 1, dim - 1);
        const auto d1 = du.segment(off + 1, dim - 1);
        // J(u + t du) = a t^2 + 2 b t + c with J(v) = v0^2 - |v1|^2.
        const double a = lorentz_det(du[off], d1.norm());
        const double b = u[off] * du[off] - u1.dot(d1);
        const double cc = lorentz_det(u[off], u1.norm());
        if (cc <= 0.0) {
            return 0.0;
        }
        const double disc = b * b - a * cc;
        double t = kInf;
        if (a < 0.0) {
            t = cc / (-b + std::sqrt(std::max(disc, 0.0)));
        } else if (b < 0.0 && disc >= 0.0) {
            t = cc / (-b + std::sqrt(disc));
        }
        alpha = std::min(alpha, t);
    }
    return alpha;
}

// Nesterov-Todd scaling W (symmetric) with W z = W^-1 s = lambda.
struct Scaling {
    Eigen::VectorXd d;               // orthant: W = diag(d)
    std::vector<double> eta;         // SOC: W = eta * Wbar(w)
    std::vector<Eigen::VectorXd> w;  // hyperbolic unit vectors, w0^2 - |w1|^2 = 1

    Eigen::VectorXd apply(const ConeLayout& k, const Eigen::VectorXd& v, bool inverse) const {
        Eigen::VectorXd out(v.size());
        if (inverse) {
            out.head(k.n_lin) = v.head(k.n_lin).cwiseQuotient(d);
        } else {
            out.head(k.n_lin) = v.head(k.n_lin).cwiseProduct(d);
        }
        for (std::size_t c = 0; c < k.soc_dims.size(); ++c) {
            const Eigen::Index off = k.soc_offsets[c];
            const Eigen::Index dim = k.soc_dims[c];
            const double sign = inverse ? -1.0 : 1.0;
            const double w0 = w[c][0];
            const auto w1 = w[c].tail(dim - 1);
            const auto v1 = v.segment(off + 1, dim - 1);
            const double w1v1 = w1.dot(v1);
            const double scale = inverse ? 1.0 / eta[c] : eta[c];
            out[off] = scale * (w0 * v[off] + sign * w1v1);
            out.segment(off + 1, dim - 1) = scale * (sign * v[off] * w1 + v1 + (w1v1 / (1.0 + w0)) * w1);
        }
        return out;
    }

    // W^-1 M applied to the row blocks of M.
    Eigen::MatrixXd apply_inverse_rows(const ConeLayout& k, const Eigen::MatrixXd& m) const {
        Eigen::MatrixXd out(m.rows(), m.cols());
        out.topRows(k.n_lin) = d.cwiseInverse().asDiagonal() * m.topRows(k.n_lin);
        for (std::size_t c = 0; c < k.soc_dims.size(); ++c) {
            const Eigen::Index off = k.soc_offsets[c];
            const Eigen::Index dim = k.soc_dims[c];
            const double w0 = w[c][0];
            const Eigen::VectorXd w1 = w[c].tail(dim - 1);
            const Eigen::RowVectorXd m0 = m.row(off);
            const Eigen::MatrixXd m1 = m.middleRows(off + 1, dim - 1);
            const Eigen::RowVectorXd w1m1 = w1.transpose() * m1;
            const double inv_eta = 1.0 / eta[c];
            out.row(off) = inv_eta * (w0 * m0 - w1m1);
            out.middleRows(off + 1, dim - 1) = inv_eta * (-w1 * m0 + m1 + w1 * (w1m1 / (1.0 + w0)));
        }
        return out;
    }

    static Scaling identity(const ConeLayout& k) {
        Scaling sc;
        sc.d = Eigen::VectorXd::Ones(k.n_lin);
        for (auto dim : k.soc_dims) {
            sc.eta.push_back(1.0);
            sc.w.push_back(Eigen::VectorXd::Unit(dim, 0));
        }
        return sc;
    }

    static Scaling nesterov_todd(const ConeLayout& k, const Eigen::VectorXd& s, const Eigen::VectorXd& z) {
        Scaling sc;
        sc.d = (s.head(k.n_lin).array() / z.head(k.n_lin).array()).sqrt().matrix();
        for (std::size_t c = 0; c < k.soc_dims.size(); ++c) {
            const Eigen::Index off = k.soc_offsets[c];
            const Eigen::Index dim = k.soc_dims[c];
            const Eigen::VectorXd sb = s.segment(off, dim);
            const Eigen::VectorXd zb = z.segment(off, dim);
            const double sa = std::sqrt(lorentz_det(sb[0], sb.tail(dim - 1).norm()));
            const double za = std::sqrt(lorentz_det(zb[0], zb.tail(dim - 1).norm()));
            const Eigen::VectorXd sn = sb / sa;
            const Eigen::VectorXd zn = zb / za;
            const double gamma = std::sqrt(0.5 * (1.0 + sn.dot(zn)));
            Eigen::VectorXd wb(dim);
            wb[0] = (sn[0] + zn[0]) / (2.0 * gamma);
            wb.tail(dim - 1) = (sn.tail(dim - 1) - zn.tail(dim - 1)) / (2.0 * gamma);
            sc.eta.push_back(std::sqrt(sa / za));
            sc.w.push_back(wb);
        }
        return sc;
    }
};

// Solves
//   [ P  A'  G'    ] [dx]   [bx]
//   [ A  0   0     ] [dy] = [by]
//   [ G  0  -W'W   ] [dz]   [bz]
// by eliminating dz and then dy (Schur complement on the equalities), with
// dense LDL' factorizations and a few steps of iterative refinement.
class KktSolver {
public:
    KktSolver(const StandardForm& sf, const Scaling& scaling)
        : sf_(sf), scaling_(scaling), g_hat_(scaling.apply_inverse_rows(sf.cones, sf.G)) {
        h_ = sf.P + g_hat_.transpose() * g_hat_;
        Eigen::MatrixXd h_reg = h_;
        h_reg.diagonal().array() += kRegularization;
        h_ldlt_.compute(h_reg);
        if (sf.A.rows() > 0) {
            h_inv_at_ = h_ldlt_.solve(sf.A.transpose());
            Eigen::MatrixXd schur = sf.A * h_inv_at_;
            schur.diagonal().array() += kRegularization;
            s_ldlt_.compute(schur);
        }
    }

    void solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& by, const Eigen::VectorXd& bz, Eigen::VectorXd& dx,
               Eigen::VectorXd& dy, Eigen::VectorXd& dz) const {
        const auto& k = sf_.cones;
        const Eigen::VectorXd bz_hat = scaling_.apply(k, bz, true);
        const Eigen::VectorXd r1 = bx + g_hat_.transpose() * bz_hat;
        reduced_solve(r1, by, dx, dy);
        for (int it = 0; it < kRefinementSteps; ++it) {
            const Eigen::VectorXd e1 = r1 - h_ * dx - sf_.A.transpose() * dy;
            const Eigen::VectorXd e2 = by - sf_.A * dx;
            Eigen::VectorXd cx;
            Eigen::VectorXd cy;
            reduced_solve(e1, e2, cx, cy);
            dx += cx;
            dy += cy;
        }
        dz = scaling_.apply(k, g_hat_ * dx - bz_hat, true);
    }

private:
    void reduced_solve(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& dx,
                       Eigen::VectorXd& dy) const {
        const Eigen::VectorXd h_inv_r1 = h_ldlt_.solve(r1);
        if (sf_.A.rows() == 0) {
            dx = h_inv_r1;
            dy.resize(0);
            return;
        }
        dy = s_ldlt_.solve(sf_.A * h_inv_r1 - r2);
        dx = h_inv_r1 - h_inv_at_ * dy;
    }

    const StandardForm& sf_;
    const Scaling& scaling_;
    Eigen::MatrixXd g_hat_;
    Eigen::MatrixXd h_;
    Eigen::LDLT<Eigen::MatrixXd> h_ldlt_;
    Eigen::MatrixXd h_inv_at_;
    Eigen::LDLT<Eigen::MatrixXd> s_ldlt_;
};

double inf_norm(const Eigen::VectorXd& v) {
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

}  // namespace

ConicProgram ConicProgram::with_dim(Eigen::Index dim) {
    ConicProgram p;
    p.P = Eigen::MatrixXd::Zero(dim, dim);
    p.q = Eigen::VectorXd::Zero(dim);
    p.A_eq.resize(0, dim);
    p.b_eq.resize(0);
    p.lb = Eigen::VectorXd::Constant(dim, -kInf);
    p.ub = Eigen::VectorXd::Constant(dim, kInf);
    return p;
}

void ConicProgram::validate() const {
    const Eigen::Index d = dim();
    if (d < 1) {
        throw ContractError("conic program needs at least one variable");
    }
    if (P.rows() != d || P.cols() != d) {
        throw ContractError("P must be d x d");
    }
    if (A_eq.cols() != d || A_eq.rows() != b_eq.size()) {
        throw ContractError("equality constraint dimensions are inconsistent");
    }
    if (lb.size() != d || ub.size() != d) {
        throw ContractError("bound vectors must have length d");
    }
    if (!P.allFinite() || !q.allFinite() || !A_eq.allFinite() || !b_eq.allFinite()) {
        throw ContractError("program data must be finite");
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        if (std::isnan(lb[i]) || std::isnan(ub[i]) || lb[i] > ub[i] || lb[i] == kInf || ub[i] == -kInf) {
            throw ContractError("bounds must satisfy lb <= ub with finite feasible values");
        }
    }
    for (const auto& cone : cones) {
        if (cone.c.size() != d || cone.F.cols() != (cone.F.rows() == 0 ? cone.F.cols() : d) ||
            cone.g.size() != cone.F.rows()) {
            throw ContractError("cone dimensions are inconsistent");
        }
        if (!cone.F.allFinite() || !cone.g.allFinite() || !cone.c.allFinite() || !std::isfinite(cone.d0)) {
            throw ContractError("cone data must be finite");
        }
    }
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, P.cwiseAbs().maxCoeff())) {
        throw ContractError("P must be symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, P.cwiseAbs().maxCoeff())) {
        throw ContractError("P must be positive semidefinite");
    }
}

double ConicProgram::objective(const Eigen::VectorXd& z) const {
    return 0.5 * z.dot(P * z) + q.dot(z);
}

double ConicProgram::max_violation(const Eigen::VectorXd& z) const {
    double v = 0.0;
    if (A_eq.rows() > 0) {
        v = std::max(v, inf_norm(A_eq * z - b_eq));
    }
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        v = std::max({v, lb[i] - z[i], z[i] - ub[i]});
    }
    for (const auto& cone : cones) {
        const double lhs = cone.F.rows() == 0 ? 0.0 : (cone.F * z + cone.g).norm();
        v = std::max(v, lhs - cone.c.dot(z) - cone.d0);
    }
    return v;
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::kOptimal:
            return "optimal";
        case SolveStatus::kMaxIter:
            return "max_iter";
        case SolveStatus::kInfeasible:
            return "infeasible";
    }
    return "unknown";
}

ConicSolution solve(const ConicProgram& prog, const ConicSettings& settings) {
    prog.validate();
    const StandardForm sf = to_standard_form(prog);
    const ConeLayout& k = sf.cones;
    const Eigen::Index m = sf.G.rows();
    const double q_scale = std::max(1.0, inf_norm(sf.q));

    ConicSolution best;
    best.status = SolveStatus::kMaxIter;
    double best_merit = kInf;

    auto record = [&](const Eigen::VectorXd& x, double dres, double gap, int iter) {
        const double viol = prog.max_violation(x);
        const double obj = prog.objective(x);
        const double gap_rel = gap / std::max(1.0, std::abs(obj));
        const double merit =
            std::max({viol / settings.tol_feas, dres / (q_scale * settings.tol_feas), gap_rel / settings.tol_gap});
        if (std::isfinite(merit) && merit < best_merit) {
            best_merit = merit;
            best.z = x;
            best.objective = obj;
            best.primal_residual = viol;
            best.dual_residual = dres;
            best.gap = gap;
        }
        best.iterations = iter;
        return merit <= 1.0;
    };

    // Equality-constrained QP: one KKT solve.
    if (m == 0) {
        const Scaling sc = Scaling::identity(k);
        const KktSolver kkt(sf, sc);
        Eigen::VectorXd x;
        Eigen::VectorXd y;
        Eigen::VectorXd z;
        kkt.solve(-sf.q, sf.b, Eigen::VectorXd(0), x, y, z);
        const Eigen::VectorXd rx = sf.P * x + sf.q + sf.A.transpose() * y;
        if (record(x, inf_norm(rx), 0.0, 1)) {
            best.status = SolveStatus::kOptimal;
        }
        return best;
    }

    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd z;
    Eigen::VectorXd s;
    {
        const Scaling sc = Scaling::identity(k);
        const KktSolver kkt(sf, sc);
        kkt.solve(-sf.q, sf.b, sf.h, x, y, z);
        s = -z;
        const Eigen::VectorXd e = cone_identity(k);
        const double ts = -min_eigenvalue(k, s);
        if (ts >= -1e-8 * std::max(s.norm(), 1.0)) {
            s += (1.0 + ts) * e;
        }
        const double tz = -min_eigenvalue(k, z);
        if (tz >= -1e-8 * std::max(z.norm(), 1.0)) {
            z += (1.0 + tz) * e;
        }
    }

    const Eigen::VectorXd e = cone_identity(k);
    std::vector<double> pres_history;
    for (int iter = 0; iter <= settings.max_iter; ++iter) {
        const Eigen::VectorXd rx = sf.P * x + sf.q + sf.A.transpose() * y + sf.G.transpose() * z;
        const Eigen::VectorXd ry = sf.A * x - sf.b;
        const Eigen::VectorXd rz = sf.G * x + s - sf.h;
        const double gap = s.dot(z);
        const double dres = inf_norm(rx);
        if (!x.allFinite() || !s.allFinite() || !z.allFinite()) {
            break;
        }
        if (record(x, dres, gap, iter)) {
            best.status = SolveStatus::kOptimal;
            return best;
        }
        const double pres = std::max(inf_norm(ry), inf_norm(rz));
        pres_history.push_back(pres);
        if (iter >= kInfeasibilityCheckStart && pres > settings.tol_feas &&
            pres > 0.5 * pres_history[static_cast<std::size_t>(iter - kInfeasibilityWindow)]) {
            best.status = SolveStatus::kInfeasible;
            return best;
        }
        if (iter == settings.max_iter) {
            break;
        }

        const Scaling sc = Scaling::nesterov_todd(k, s, z);
        const Eigen::VectorXd lambda = sc.apply(k, z, false);
        const KktSolver kkt(sf, sc);
        const double mu = gap / k.degree();

        auto direction = [&](const Eigen::VectorXd& bs, Eigen::VectorXd& dx, Eigen::VectorXd& dy,
                             Eigen::VectorXd& dz, Eigen::VectorXd& ds) {
            const Eigen::VectorXd t = jordan_divide(k, lambda, bs);
            const Eigen::VectorXd wt = sc.apply(k, t, false);
            kkt.solve(-rx, -ry, -rz - wt, dx, dy, dz);
            ds = wt - sc.apply(k, sc.apply(k, dz, false), false);
        };

        // Predictor.
        Eigen::VectorXd dx;
        Eigen::VectorXd dy;
        Eigen::VectorXd dz;
        Eigen::VectorXd ds;
        const Eigen::VectorXd lambda_sq = jordan_product(k, lambda, lambda);
        direction(-lambda_sq, dx, dy, dz, ds);
        const double alpha_aff = std::min({1.0, max_step(k, s, ds), max_step(k, z, dz)});
        const double dsdz = ds.dot(dz);
        const double sigma =
            std::pow(std::clamp(1.0 - alpha_aff + (dsdz / gap) * alpha_aff * alpha_aff, 0.0, 1.0), 3.0);

        // Corrector.
        const Eigen::VectorXd ds_scaled = sc.apply(k, ds, true);
        const Eigen::VectorXd dz_scaled = sc.apply(k, dz, false);
        const Eigen::VectorXd bs = -lambda_sq - jordan_product(k, ds_scaled, dz_scaled) + sigma * mu * e;
        direction(bs, dx, dy, dz, ds);
        const double alpha = std::min(1.0, kStepFraction * std::min(max_step(k, s, ds), max_step(k, z, dz)));

        x += alpha * dx;
        y += alpha * dy;
        z += alpha * dz;
        s += alpha * ds;
    }
    if (best.z.size() == 0) {
        best.z = Eigen::VectorXd::Zero(prog.dim());
        best.objective = prog.objective(best.z);
        best.primal_residual = prog.max_violation(best.z);
    }
    best.status = SolveStatus::kMaxIter;
    return best;
}

}  // namespace gpmpc
