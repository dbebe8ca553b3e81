#pragma once

#include <cstdint>
#include <random>

#include "gpmpc/gp_model.hpp"

namespace gpmpc {

constexpr double kPlantNoiseStd = 0.025;

/// x' = x - 0.5 tanh(x + u^3).
double plant_dynamics(double x, double u);

/// Scalar benchmark plant with a seeded output-noise generator.
struct PlantState {
    double x = 0.0;
    std::mt19937_64 rng;

    explicit PlantState(double x0 = 0.0, std::uint64_t seed = 0) : x(x0), rng(seed) {}

    /// Current output x + w (w = 0 when noise is off). Draws noise when on.
    double measure(bool noise_on);
};

/// Advances the plant by one input and returns the measured output of the new state.
double plant_step(PlantState& state, double u, bool noise_on);

/// Clamps u to [u_min, u_max] and to the rate limits around `prev`, stepping
/// by one ulp where rounding of prev + du would overshoot.
double clip_input(double u, double prev, double u_min, double u_max, double du_min, double du_max);

struct DataGenConfig {
    double x0 = 0.0;
    int hold = 3;
    double u_min = -1.0;
    double u_max = 1.0;
    double du_max = 0.5;
    bool noise_on = true;
};

/// Rows (y_{k-1}, u_k) -> y_k from the plant driven by a random input signal:
/// uniform levels held for `hold` steps, clipped to the rate limit.
/// Bitwise reproducible for a fixed seed; a longer run extends a shorter one.
TrainingData generate_training_data(Eigen::Index n, std::uint64_t seed, const DataGenConfig& config = {});

}  // namespace gpmpc
