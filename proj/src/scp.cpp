#include "gpmpc/scp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "gpmpc/errors.hpp"

namespace gpmpc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Decision-vector column of active linGP entry `a` at step `k`.
Eigen::Index delta_column(const ArSpec& arspec, const SubproblemLayout& layout, Eigen::Index k,
                          Eigen::Index gp_index) {
    const Eigen::Index state_dim = arspec.state_dim();
    if (gp_index >= state_dim) {
        return layout.du(k, gp_index - state_dim);
    }
    const DeltaSource src = delta_source(arspec, k, gp_index);
    switch (src.kind) {
        case DeltaSource::Kind::kOutput:
            return layout.dy(src.step);
        case DeltaSource::Kind::kInput:
            return layout.du(src.step, src.component);
        case DeltaSource::Kind::kMeasured:
            break;
    }
    throw ContractError("linearization has a measured history entry marked active");
}

void check_nominal(const TrackingMpcSpec& spec, const ArSpec& arspec, const std::vector<LinGp>& lingps,
                   const Rollout& nominal, const Eigen::MatrixXd& nominal_inputs) {
    const auto horizon = static_cast<Eigen::Index>(spec.horizon);
    if (static_cast<Eigen::Index>(lingps.size()) != horizon || nominal.horizon() != horizon) {
        throw ContractError("linearizations and nominal rollout must cover the horizon");
    }
    if (nominal_inputs.rows() != arspec.input_dim || nominal_inputs.cols() != horizon) {
        throw ContractError("nominal inputs must be n_u x H");
    }
    if (spec.input_dim() != arspec.input_dim) {
        throw ContractError("MPC input bounds do not match the input dimension");
    }
}

}  // namespace

void TrackingMpcSpec::validate() const {
    if (horizon < 1) {
        throw ContractError("horizon must be at least 1");
    }
    if (weight_output < 0.0 || weight_input_rate < 0.0 || weight_variance < 0.0) {
        throw ContractError("cost weights must be non-negative");
    }
    const Eigen::Index nu = input_dim();
    if (nu < 1 || u_max.size() != nu || du_min.size() != nu || du_max.size() != nu || previous_input.size() != nu) {
        throw ContractError("input bound vectors must share the input dimension");
    }
    for (Eigen::Index c = 0; c < nu; ++c) {
        if (!(u_min[c] <= u_max[c])) {
            throw ContractError("input bounds require u_min <= u_max");
        }
        if (!(du_min[c] <= 0.0 && 0.0 <= du_max[c])) {
            throw ContractError("rate bounds require du_min <= 0 <= du_max");
        }
        if (!(previous_input[c] >= u_min[c] && previous_input[c] <= u_max[c])) {
            throw ContractError("previous input must lie inside the input bounds");
        }
    }
    if (!(y_lo <= y_hi)) {
        throw ContractError("output band requires y_lo <= y_hi");
    }
    if (!(kappa >= 0.0) || !(terminal_delta > 0.0)) {
        throw ContractError("kappa must be non-negative and the terminal half-width positive");
    }
    if (reference.size() != horizon || !reference.allFinite()) {
        throw ContractError("reference must hold one finite value per horizon step");
    }
}

void ScpConfig::validate() const {
    if (!(rho0 > 0.0) || !(lambda > 0.0)) {
        throw ContractError("rho0 and lambda must be positive");
    }
    if (!(0.0 < r0 && r0 < r1 && r1 < r2 && r2 < 1.0)) {
        throw ContractError("ratio thresholds require 0 < r0 < r1 < r2 < 1");
    }
    if (!(beta_fail > 0.0 && beta_fail < 1.0) || !(beta_succ > 1.0)) {
        throw ContractError("trust-region factors require 0 < beta_fail < 1 < beta_succ");
    }
    if (!(epsilon > 0.0) || j_max < 1) {
        throw ContractError("epsilon must be positive and j_max at least 1");
    }
    if (!(lambda_growth >= 1.0) || !(lambda_max >= lambda) || max_penalty_rounds < 0 || !(violation_tol >= 0.0) ||
        !(rho_min >= 0.0)) {
        throw ContractError("invalid penalty-growth or trust-region floor settings");
    }
}

CostBreakdown cost_breakdown(const TrackingMpcSpec& spec, const Eigen::VectorXd& means,
                             const Eigen::VectorXd& variances, const Eigen::MatrixXd& inputs) {
    const auto horizon = static_cast<Eigen::Index>(spec.horizon);
    if (means.size() != horizon || variances.size() != horizon || inputs.cols() != horizon ||
        inputs.rows() != spec.input_dim()) {
        throw ContractError("trajectory does not match the MPC horizon");
    }
    CostBreakdown cost;
    for (Eigen::Index k = 0; k < horizon; ++k) {
        const double var = std::max(variances[k], 0.0);
        const double sigma = std::sqrt(var);
        const double err = means[k] - spec.reference[k];
        cost.tracking += spec.weight_output * err * err;
        const Eigen::VectorXd prev = k == 0 ? spec.previous_input : Eigen::VectorXd(inputs.col(k - 1));
        cost.rate += spec.weight_input_rate * (inputs.col(k) - prev).squaredNorm();
        cost.variance += spec.weight_variance * var;
        cost.violation += std::max(0.0, spec.y_lo - (means[k] - spec.kappa * sigma));
        cost.violation += std::max(0.0, means[k] + spec.kappa * sigma - spec.y_hi);
    }
    const Eigen::Index last = horizon - 1;
    const double sigma = std::sqrt(std::max(variances[last], 0.0));
    const double err = means[last] - spec.reference[last];
    cost.violation += std::max(0.0, err + spec.kappa * sigma - spec.terminal_delta);
    cost.violation += std::max(0.0, -err + spec.kappa * sigma - spec.terminal_delta);
    return cost;
}

double penalty_cost(const TrackingMpcSpec& spec, const Rollout& rollout, const Eigen::MatrixXd& inputs,
                    double lambda) {
    return cost_breakdown(spec, rollout.means, rollout.variances, inputs).penalized(lambda);
}

SubproblemLayout SubproblemLayout::make(Eigen::Index horizon, Eigen::Index input_dim, bool with_sigma) {
    SubproblemLayout l;
    l.horizon = horizon;
    l.input_dim = input_dim;
    l.du_offset = 0;
    l.dy_offset = horizon * input_dim;
    Eigen::Index next = l.dy_offset + horizon;
    if (with_sigma) {
        l.sigma_offset = next;
        next += horizon;
    }
    l.band_lo_offset = next;
    l.band_hi_offset = next + horizon;
    l.terminal_lo_index = next + 2 * horizon;
    l.terminal_hi_index = l.terminal_lo_index + 1;
    l.dim = l.terminal_hi_index + 1;
    return l;
}

Eigen::Index SubproblemLayout::sigma(Eigen::Index k) const {
    if (!has_sigma()) {
        throw ContractError("layout has no sigma variables");
    }
    return sigma_offset + k;
}

Eigen::MatrixXd Subproblem::input_deltas(const Eigen::VectorXd& z) const {
    if (z.size() != layout.dim) {
        throw ContractError("solution does not match the subproblem layout");
    }
    return Eigen::Map<const Eigen::MatrixXd>(z.data() + layout.du_offset, layout.input_dim, layout.horizon);
}

std::vector<std::vector<bool>> active_masks(const ArSpec& arspec, Eigen::Index horizon) {
    arspec.validate();
    std::vector<std::vector<bool>> masks;
    masks.reserve(static_cast<std::size_t>(horizon));
    for (Eigen::Index k = 0; k < horizon; ++k) {
        std::vector<bool> mask(static_cast<std::size_t>(arspec.gp_dim()), true);
        for (Eigen::Index s = 0; s < arspec.state_dim(); ++s) {
            mask[static_cast<std::size_t>(s)] = delta_source(arspec, k, s).kind != DeltaSource::Kind::kMeasured;
        }
        masks.push_back(std::move(mask));
    }
    return masks;
}

Subproblem build_subproblem(const TrackingMpcSpec& spec, const ArSpec& arspec, const std::vector<LinGp>& lingps,
                            const Rollout& nominal, const Eigen::MatrixXd& nominal_inputs, double rho,
                            double lambda) {
    spec.validate();
    arspec.validate();
    check_nominal(spec, arspec, lingps, nominal, nominal_inputs);
    if (!(rho >= 0.0) || !(lambda >= 0.0)) {
        throw ContractError("trust region and penalty weight must be non-negative");
    }
    const auto horizon = static_cast<Eigen::Index>(spec.horizon);
    const Eigen::Index nu = arspec.input_dim;
    Subproblem sub;
    sub.layout = SubproblemLayout::make(horizon, nu, spec.has_sigma_terms());
    const SubproblemLayout& lay = sub.layout;
    ConicProgram& prog = sub.program;
    prog = ConicProgram::with_dim(lay.dim);
    const Eigen::Index d = lay.dim;

    // Trust region intersected with the input box; the first step also
    // carries the rate limit against the previously applied input.
    for (Eigen::Index k = 0; k < horizon; ++k) {
        for (Eigen::Index c = 0; c < nu; ++c) {
            const double u = nominal_inputs(c, k);
            double lo = std::max(-rho, spec.u_min[c] - u);
            double hi = std::min(rho, spec.u_max[c] - u);
            if (k == 0) {
                const double rate = u - spec.previous_input[c];
                lo = std::max(lo, spec.du_min[c] - rate);
                hi = std::min(hi, spec.du_max[c] - rate);
            }
            prog.lb[lay.du(k, c)] = std::min(lo, 0.0);
            prog.ub[lay.du(k, c)] = std::max(hi, 0.0);
        }
        prog.lb[lay.dy(k)] = -rho;
        prog.ub[lay.dy(k)] = rho;
        prog.lb[lay.band_lo(k)] = 0.0;
        prog.lb[lay.band_hi(k)] = 0.0;
    }
    prog.lb[lay.terminal_lo_index] = 0.0;
    prog.lb[lay.terminal_hi_index] = 0.0;

    // Rate limits between consecutive horizon steps.
    for (Eigen::Index k = 1; k < horizon; ++k) {
        for (Eigen::Index c = 0; c < nu; ++c) {
            const double rate = nominal_inputs(c, k) - nominal_inputs(c, k - 1);
            SecondOrderCone lower;
            lower.c = Eigen::VectorXd::Zero(d);
            lower.c[lay.du(k, c)] = 1.0;
            lower.c[lay.du(k - 1, c)] = -1.0;
            lower.d0 = rate - spec.du_min[c];
            SecondOrderCone upper;
            upper.c = -lower.c;
            upper.d0 = spec.du_max[c] - rate;
            prog.cones.push_back(std::move(lower));
            prog.cones.push_back(std::move(upper));
        }
    }

    // Linearized dynamics: dy_k = grad_k . (active deltas of step k).
    prog.A_eq = Eigen::MatrixXd::Zero(horizon, d);
    prog.b_eq = Eigen::VectorXd::Zero(horizon);
    std::vector<std::vector<Eigen::Index>> columns(static_cast<std::size_t>(horizon));
    for (Eigen::Index k = 0; k < horizon; ++k) {
        const LinGp& lg = lingps[static_cast<std::size_t>(k)];
        auto& cols = columns[static_cast<std::size_t>(k)];
        prog.A_eq(k, lay.dy(k)) = 1.0;
        for (Eigen::Index a = 0; a < lg.active_dim(); ++a) {
            cols.push_back(delta_column(arspec, lay, k, lg.active[static_cast<std::size_t>(a)]));
            prog.A_eq(k, cols.back()) -= lg.m_hat[1 + a];
        }
    }

    // sigma_k >= |V_sqrt [1; deltas]|.
    if (lay.has_sigma()) {
        for (Eigen::Index k = 0; k < horizon; ++k) {
            const LinGp& lg = lingps[static_cast<std::size_t>(k)];
            const auto& cols = columns[static_cast<std::size_t>(k)];
            SecondOrderCone cone;
            cone.F = Eigen::MatrixXd::Zero(lg.v_sqrt.rows(), d);
            for (std::size_t a = 0; a < cols.size(); ++a) {
                cone.F.col(cols[a]) += lg.v_sqrt.col(static_cast<Eigen::Index>(a) + 1);
            }
            cone.g = lg.v_sqrt.col(0);
            cone.c = Eigen::VectorXd::Zero(d);
            cone.c[lay.sigma(k)] = 1.0;
            prog.cones.push_back(std::move(cone));
        }
    }

    // Output band and terminal constraints, relaxed by slacks.
    auto soft_row = [&](double out_sign, Eigen::Index k, Eigen::Index slack, double d0) {
        SecondOrderCone row;
        row.c = Eigen::VectorXd::Zero(d);
        row.c[lay.dy(k)] = out_sign;
        if (lay.has_sigma()) {
            row.c[lay.sigma(k)] = -spec.kappa;
        }
        row.c[slack] = 1.0;
        row.d0 = d0;
        prog.cones.push_back(std::move(row));
    };
    for (Eigen::Index k = 0; k < horizon; ++k) {
        const double y = nominal.means[k];
        soft_row(1.0, k, lay.band_lo(k), y - spec.y_lo);
        soft_row(-1.0, k, lay.band_hi(k), spec.y_hi - y);
    }
    const Eigen::Index last = horizon - 1;
    const double err = nominal.means[last] - spec.reference[last];
    soft_row(1.0, last, lay.terminal_lo_index, spec.terminal_delta + err);
    soft_row(-1.0, last, lay.terminal_hi_index, spec.terminal_delta - err);

    // Objective.
    for (Eigen::Index k = 0; k < horizon; ++k) {
        const double e = nominal.means[k] - spec.reference[k];
        prog.P(lay.dy(k), lay.dy(k)) += 2.0 * spec.weight_output;
        prog.q[lay.dy(k)] += 2.0 * spec.weight_output * e;
        sub.constant += spec.weight_output * e * e;
        for (Eigen::Index c = 0; c < nu; ++c) {
            const double prev = k == 0 ? spec.previous_input[c] : nominal_inputs(c, k - 1);
            const double rate = nominal_inputs(c, k) - prev;
            const double w = spec.weight_input_rate;
            const Eigen::Index i = lay.du(k, c);
            prog.P(i, i) += 2.0 * w;
            prog.q[i] += 2.0 * w * rate;
            if (k > 0) {
                const Eigen::Index j = lay.du(k - 1, c);
                prog.P(j, j) += 2.0 * w;
                prog.P(i, j) -= 2.0 * w;
                prog.P(j, i) -= 2.0 * w;
                prog.q[j] -= 2.0 * w * rate;
            }
            sub.constant += w * rate * rate;
        }
        if (lay.has_sigma()) {
            prog.P(lay.sigma(k), lay.sigma(k)) += 2.0 * spec.weight_variance;
        }
        prog.q[lay.band_lo(k)] = lambda;
        prog.q[lay.band_hi(k)] = lambda;
    }
    prog.q[lay.terminal_lo_index] = lambda;
    prog.q[lay.terminal_hi_index] = lambda;
    return sub;
}

LinearizedOutputs linearized_outputs(const ArSpec& arspec, const std::vector<LinGp>& lingps, const Rollout& nominal,
                                const Eigen::MatrixXd& input_deltas) {
    const Eigen::Index horizon = nominal.horizon();
    if (static_cast<Eigen::Index>(lingps.size()) != horizon || input_deltas.cols() != horizon ||
        input_deltas.rows() != arspec.input_dim) {
        throw ContractError("linearizations, rollout and deltas must cover the same horizon");
    }
    const Eigen::Index state_dim = arspec.state_dim();
    Eigen::VectorXd dy = Eigen::VectorXd::Zero(horizon);
    LinearizedOutputs out;
    out.means.resize(horizon);
    out.variances.resize(horizon);
    for (Eigen::Index k = 0; k < horizon; ++k) {
        const LinGp& lg = lingps[static_cast<std::size_t>(k)];
        Eigen::VectorXd xi(1 + lg.active_dim());
        xi[0] = 1.0;
        for (Eigen::Index a = 0; a < lg.active_dim(); ++a) {
            const Eigen::Index idx = lg.active[static_cast<std::size_t>(a)];
            double v = 0.0;
            if (idx >= state_dim) {
                v = input_deltas(idx - state_dim, k);
            } else {
                const DeltaSource src = delta_source(arspec, k, idx);
                if (src.kind == DeltaSource::Kind::kOutput) {
                    v = dy[src.step];
                } else if (src.kind == DeltaSource::Kind::kInput) {
                    v = input_deltas(src.component, src.step);
                }
            }
            xi[1 + a] = v;
        }
        dy[k] = lg.m_hat.tail(lg.active_dim()).dot(xi.tail(lg.active_dim()));
        out.means[k] = nominal.means[k] + dy[k];
        out.variances[k] = (lg.v_sqrt * xi).squaredNorm();
    }
    return out;
}

double predicted_cost(const TrackingMpcSpec& spec, const ArSpec& arspec, const std::vector<LinGp>& lingps,
                      const Rollout& nominal, const Eigen::MatrixXd& nominal_inputs,
                      const Eigen::MatrixXd& candidate_inputs, double lambda) {
    check_nominal(spec, arspec, lingps, nominal, nominal_inputs);
    const LinearizedOutputs p = linearized_outputs(arspec, lingps, nominal, candidate_inputs - nominal_inputs);
    return cost_breakdown(spec, p.means, p.variances, candidate_inputs).penalized(lambda);
}

Eigen::MatrixXd project_inputs(const TrackingMpcSpec& spec, const Eigen::MatrixXd& inputs) {
    const Eigen::Index nu = spec.input_dim();
    if (inputs.rows() != nu) {
        throw ContractError("inputs must have n_u rows");
    }
    Eigen::MatrixXd out = inputs;
    for (Eigen::Index k = 0; k < inputs.cols(); ++k) {
        for (Eigen::Index c = 0; c < nu; ++c) {
            const double prev = k == 0 ? spec.previous_input[c] : out(c, k - 1);
            const double lo = std::max(spec.u_min[c], prev + spec.du_min[c]);
            const double hi = std::min(spec.u_max[c], prev + spec.du_max[c]);
            double u = std::isnan(inputs(c, k)) ? prev : std::clamp(inputs(c, k), lo, hi);
            // prev + du may round outside the rate limits.
            while (u - prev > spec.du_max[c]) {
                u = std::nextafter(u, -std::numeric_limits<double>::infinity());
            }
            while (u - prev < spec.du_min[c]) {
                u = std::nextafter(u, std::numeric_limits<double>::infinity());
            }
            out(c, k) = u;
        }
    }
    return out;
}

Linearization linearize_trajectory(const GpModel& model, const ArSpec& arspec, const ArState& init,
                                   const Eigen::MatrixXd& inputs) {
    Linearization lin;
    lin.rollout = rollout_mean(model, arspec, init, inputs, false);
    lin.lingps = lingp_build_batch(model, lin.rollout.regressors, active_masks(arspec, inputs.cols()));
    for (Eigen::Index k = 0; k < inputs.cols(); ++k) {
        lin.rollout.variances[k] = lin.lingps[static_cast<std::size_t>(k)].v_sqrt.col(0).squaredNorm();
    }
    return lin;
}

std::string to_string(ScpStop stop) {
    switch (stop) {
        case ScpStop::kConverged:
            return "converged";
        case ScpStop::kMaxIterations:
            return "max_iterations";
        case ScpStop::kTrustRegionFloor:
            return "trust_region_floor";
    }
    return "unknown";
}

namespace {

struct PassResult {
    Eigen::MatrixXd inputs;
    Linearization lin;
    double phi = 0.0;
    double rho = 0.0;
    ScpStop stop = ScpStop::kMaxIterations;
};

PassResult run_pass(const GpModel& model, const TrackingMpcSpec& spec, const ArSpec& arspec, const ArState& init,
                    const Eigen::MatrixXd& u_start, const ScpConfig& config, double lambda, int pass,
                    std::vector<IterationRecord>& trace) {
    PassResult st;
    st.inputs = u_start;
    st.lin = linearize_trajectory(model, arspec, init, st.inputs);
    st.phi = penalty_cost(spec, st.lin.rollout, st.inputs, lambda);
    st.rho = config.rho0;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (int j = 0; j < config.j_max; ++j) {
        IterationRecord rec;
        rec.pass = pass;
        rec.iteration = j;
        rec.lambda = lambda;
        rec.phi = st.phi;
        rec.rho = st.rho;

        const Subproblem sub =
            build_subproblem(spec, arspec, st.lin.lingps, st.lin.rollout, st.inputs, st.rho, lambda);
        const auto t_solve = Clock::now();
        const ConicSolution sol = solve(sub.program, config.conic);
        rec.subproblem_time = seconds_since(t_solve);
        rec.conic_iterations = sol.iterations;
        if (sol.status != SolveStatus::kOptimal) {
            std::ostringstream msg;
            msg << "subproblem not solved to optimality (status " << to_string(sol.status) << ", iterations "
                << sol.iterations << ", primal residual " << sol.primal_residual << ", dual residual "
                << sol.dual_residual << ", gap " << sol.gap << ", rho " << st.rho << ")";
            throw ScpError(msg.str());
        }

        Eigen::MatrixXd candidate = project_inputs(spec, st.inputs + sub.input_deltas(sol.z));
        double phi_pred =
            predicted_cost(spec, arspec, st.lin.lingps, st.lin.rollout, st.inputs, candidate, lambda);
        // Zero-step fallback when the candidate is predicted worse than phi.
        if (phi_pred > st.phi) {
            candidate = st.inputs;
            phi_pred = predicted_cost(spec, arspec, st.lin.lingps, st.lin.rollout, st.inputs, candidate, lambda);
        }
        rec.phi_predicted = phi_pred;
        rec.delta_predicted = st.phi - phi_pred;

        if (std::abs(rec.delta_predicted) <= config.epsilon) {
            rec.terminal = true;
            rec.ratio = nan;
            rec.phi_candidate = nan;
            rec.delta_actual = nan;
            rec.rho_next = st.rho;
            trace.push_back(rec);
            st.stop = ScpStop::kConverged;
            return st;
        }
        if (rec.delta_predicted < -std::max(config.epsilon, 1e-6 * std::abs(st.phi))) {
            throw ScpError("predicted cost reduction is negative");
        }

        const auto t_roll = Clock::now();
        Linearization cand_lin;
        cand_lin.rollout = rollout_mean(model, arspec, init, candidate, false);
        rec.rollout_time = seconds_since(t_roll);
        const auto t_lin = Clock::now();
        cand_lin.lingps = lingp_build_batch(model, cand_lin.rollout.regressors, active_masks(arspec, spec.horizon));
        for (Eigen::Index k = 0; k < spec.horizon; ++k) {
            cand_lin.rollout.variances[k] = cand_lin.lingps[static_cast<std::size_t>(k)].v_sqrt.col(0).squaredNorm();
        }
        rec.linearize_time = seconds_since(t_lin);

        rec.phi_candidate = penalty_cost(spec, cand_lin.rollout, candidate, lambda);
        rec.delta_actual = st.phi - rec.phi_candidate;
        rec.ratio = rec.delta_actual / rec.delta_predicted;
        if (rec.ratio < config.r0) {
            rec.accepted = false;
            rec.rho_next = config.beta_fail * st.rho;
        } else {
            rec.accepted = true;
            st.inputs = candidate;
            st.lin = std::move(cand_lin);
            st.phi = rec.phi_candidate;
            if (rec.ratio < config.r1) {
                rec.rho_next = config.beta_fail * st.rho;
            } else if (rec.ratio < config.r2) {
                rec.rho_next = st.rho;
            } else {
                rec.rho_next = config.beta_succ * st.rho;
            }
        }
        trace.push_back(rec);
        st.rho = rec.rho_next;
        if (st.rho < config.rho_min) {
            st.stop = ScpStop::kTrustRegionFloor;
            return st;
        }
    }
    st.stop = ScpStop::kMaxIterations;
    return st;
}

}  // namespace

ScpReport scp_solve(const GpModel& model, const TrackingMpcSpec& spec, const ArSpec& arspec, const ArState& init,
                    const Eigen::MatrixXd& u_init, const ScpConfig& config) {
    const auto t_start = Clock::now();
    spec.validate();
    arspec.validate();
    config.validate();
    init.validate(arspec);
    if (model.dim() != arspec.gp_dim()) {
        throw ContractError("GP input dimension does not match the autoregressive structure");
    }
    if (spec.input_dim() != arspec.input_dim) {
        throw ContractError("MPC input bounds do not match the input dimension");
    }
    if (u_init.rows() != arspec.input_dim || u_init.cols() != spec.horizon) {
        throw ContractError("initial inputs must be n_u x H");
    }

    ScpReport report;
    double lambda = config.lambda;
    Eigen::MatrixXd inputs = project_inputs(spec, u_init);
    for (int pass = 0;; ++pass) {
        PassResult res = run_pass(model, spec, arspec, init, inputs, config, lambda, pass, report.iterations);
        inputs = res.inputs;
        report.inputs = res.inputs;
        report.rollout = std::move(res.lin.rollout);
        report.phi = res.phi;
        report.lambda = lambda;
        report.final_rho = res.rho;
        report.stop = res.stop;
        report.converged = res.stop == ScpStop::kConverged;
        report.passes = pass + 1;
        report.violation = cost_breakdown(spec, report.rollout.means, report.rollout.variances, inputs).violation;
        if (report.violation <= config.violation_tol || pass >= config.max_penalty_rounds ||
            config.lambda_growth <= 1.0 || lambda >= config.lambda_max) {
            break;
        }
        lambda = std::min(lambda * config.lambda_growth, config.lambda_max);
    }
    report.total_time = seconds_since(t_start);
    return report;
}

}  // namespace gpmpc
