#include "gpmpc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpmpc/errors.hpp"

namespace gpmpc {

double plant_dynamics(double x, double u) {
    return x - 0.5 * std::tanh(x + u * u * u);
}

double PlantState::measure(bool noise_on) {
    if (!noise_on) {
        return x;
    }
    std::normal_distribution<double> noise(0.0, kPlantNoiseStd);
    return x + noise(rng);
}

double plant_step(PlantState& state, double u, bool noise_on) {
    if (!std::isfinite(u)) {
        throw ContractError("plant input must be finite");
    }
    state.x = plant_dynamics(state.x, u);
    return state.measure(noise_on);
}

double clip_input(double u, double prev, double u_min, double u_max, double du_min, double du_max) {
    const double lo = std::max(u_min, prev + du_min);
    const double hi = std::min(u_max, prev + du_max);
    double out = std::clamp(u, lo, hi);
    while (out - prev > du_max) {
        out = std::nextafter(out, -std::numeric_limits<double>::infinity());
    }
    while (out - prev < du_min) {
        out = std::nextafter(out, std::numeric_limits<double>::infinity());
    }
    return out;
}

TrainingData generate_training_data(Eigen::Index n, std::uint64_t seed, const DataGenConfig& config) {
    if (n < 1) {
        throw ContractError("training set needs at least one observation");
    }
    if (config.hold < 1 || !(config.u_min < config.u_max) || !(config.du_max > 0.0)) {
        throw ContractError("invalid input-signal settings");
    }
    PlantState plant(config.x0, seed);
    std::mt19937_64 signal_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> level(config.u_min, config.u_max);

    TrainingData data;
    data.inputs.resize(2, n);
    data.targets.resize(n);
    double y_prev = plant.measure(config.noise_on);
    double u_prev = 0.0;
    double target = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k % config.hold == 0) {
            target = level(signal_rng);
        }
        const double u = clip_input(target, u_prev, config.u_min, config.u_max, -config.du_max, config.du_max);
        const double y = plant_step(plant, u, config.noise_on);
        data.inputs(0, k) = y_prev;
        data.inputs(1, k) = u;
        data.targets[k] = y;
        y_prev = y;
        u_prev = u;
    }
    return data;
}

}  // namespace gpmpc
