#include "gpmpc/argp.hpp"

#include "gpmpc/errors.hpp"

namespace gpmpc {

void ArSpec::validate() const {
    if (output_lag < 1) {
        throw ContractError("output lag must be at least 1");
    }
    if (input_lag < 0) {
        throw ContractError("input lag must be non-negative");
    }
    if (input_dim < 1) {
        throw ContractError("input dimension must be at least 1");
    }
}

void ArState::validate(const ArSpec& spec) const {
    spec.validate();
    if (past_means.size() != spec.output_lag) {
        throw ContractError("history holds the wrong number of past outputs");
    }
    if (static_cast<int>(past_inputs.size()) != spec.input_lag) {
        throw ContractError("history holds the wrong number of past inputs");
    }
    for (const auto& u : past_inputs) {
        if (u.size() != spec.input_dim) {
            throw ContractError("past input has the wrong dimension");
        }
    }
}

Eigen::VectorXd ArState::state_vector(const ArSpec& spec) const {
    Eigen::VectorXd s(spec.state_dim());
    s.head(spec.output_lag) = past_means;
    Eigen::Index offset = spec.output_lag;
    for (const auto& u : past_inputs) {
        s.segment(offset, spec.input_dim) = u;
        offset += spec.input_dim;
    }
    return s;
}

Eigen::VectorXd ArState::gp_input(const ArSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& u) const {
    if (u.size() != spec.input_dim) {
        throw ContractError("input has the wrong dimension");
    }
    Eigen::VectorXd z(spec.gp_dim());
    z.head(spec.state_dim()) = state_vector(spec);
    z.tail(spec.input_dim) = u;
    return z;
}

ArState ArState::shifted(const ArSpec& spec, double y, const Eigen::Ref<const Eigen::VectorXd>& u) const {
    ArState next;
    next.past_means.resize(spec.output_lag);
    next.past_means.head(spec.output_lag - 1) = past_means.tail(spec.output_lag - 1);
    next.past_means[spec.output_lag - 1] = y;
    if (spec.input_lag > 0) {
        next.past_inputs.assign(past_inputs.begin() + 1, past_inputs.end());
        next.past_inputs.emplace_back(u);
    }
    return next;
}

Rollout rollout_mean(const GpModel& model, const ArSpec& spec, const ArState& init, const Eigen::MatrixXd& inputs,
                     bool with_variances) {
    init.validate(spec);
    if (model.dim() != spec.gp_dim()) {
        throw ContractError("GP input dimension does not match the autoregressive structure");
    }
    if (inputs.rows() != spec.input_dim) {
        throw ContractError("input sequence has the wrong input dimension");
    }
    const Eigen::Index horizon = inputs.cols();
    if (horizon < 1) {
        throw ContractError("rollout horizon must be at least 1");
    }
    Rollout r;
    r.means.resize(horizon);
    r.regressors.resize(spec.gp_dim(), horizon);
    r.states.reserve(static_cast<std::size_t>(horizon));
    ArState state = init;
    for (Eigen::Index j = 0; j < horizon; ++j) {
        r.regressors.col(j) = state.gp_input(spec, inputs.col(j));
        r.means[j] = model.predict_mean(r.regressors.col(j));
        r.states.push_back(state);
        state = state.shifted(spec, r.means[j], inputs.col(j));
    }
    if (with_variances) {
        r.variances = model.predict_variances(r.regressors);
    } else {
        r.variances = Eigen::VectorXd::Zero(horizon);
    }
    return r;
}

DeltaSource delta_source(const ArSpec& spec, Eigen::Index k, Eigen::Index slot) {
    if (slot < 0 || slot >= spec.state_dim()) {
        throw ContractError("state slot out of range");
    }
    DeltaSource src;
    if (slot < spec.output_lag) {
        const Eigen::Index step = k - spec.output_lag + slot;
        if (step >= 0) {
            src.kind = DeltaSource::Kind::kOutput;
            src.step = step;
        }
        return src;
    }
    const Eigen::Index rel = slot - spec.output_lag;
    const Eigen::Index lag_index = rel / spec.input_dim;
    const Eigen::Index step = k - spec.input_lag + lag_index;
    if (step >= 0) {
        src.kind = DeltaSource::Kind::kInput;
        src.step = step;
        src.component = rel % spec.input_dim;
    }
    return src;
}

Eigen::MatrixXd delta_state(const ArSpec& spec, const Eigen::VectorXd& output_deltas,
                            const Eigen::MatrixXd& input_deltas) {
    spec.validate();
    const Eigen::Index horizon = output_deltas.size();
    if (input_deltas.cols() != horizon || input_deltas.rows() != spec.input_dim) {
        throw ContractError("output and input delta sequences must cover the same horizon");
    }
    Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(spec.state_dim(), horizon);
    for (Eigen::Index k = 0; k < horizon; ++k) {
        for (Eigen::Index s = 0; s < spec.state_dim(); ++s) {
            const DeltaSource src = delta_source(spec, k, s);
            switch (src.kind) {
                case DeltaSource::Kind::kOutput:
                    dx(s, k) = output_deltas[src.step];
                    break;
                case DeltaSource::Kind::kInput:
                    dx(s, k) = input_deltas(src.component, src.step);
                    break;
                case DeltaSource::Kind::kMeasured:
                    break;
            }
        }
    }
    return dx;
}

}  // namespace gpmpc
