#pragma once

#include "lstmsv/models.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lstmsv::models {

struct SimulatedPath {
    std::vector<double> y;
    std::vector<double> z;
};

struct SimulationOptions {
    /// Pre-sample log-variance for LSTM-SV: z₁ = η₁ + φ·z0.
    double lstm_z0 = 0.0;
};

/// Exact forward simulation. SV/N-SV start from the stationary law of z;
/// LSTM-SV starts from h₁ = 0, z₁ = η₁ + φ·z0. Each step consumes the state
/// draw and then the observation draw, in that order, from the substream
/// ("simulate", seed).
[[nodiscard]] SimulatedPath simulate(const ModelParams& p, std::size_t T, std::uint64_t seed,
                                     const SimulationOptions& opt = {});

inline constexpr double kDgpSigma2 = 0.1;

/// Conditional mean of the nonlinear benchmark process:
/// 0.1 + 0.96 z − 0.8 z²/(1 + z²) + 1/(1 + e^{−z}).
[[nodiscard]] double dgp_drift(double z_prev) noexcept;

/// Nonlinear SV benchmark: z₁ ~ N(0, 1), z_t = dgp_drift(z_{t−1}) + √0.1·ε,
/// y_t = exp(z_t/2)·ε^y.
[[nodiscard]] SimulatedPath simulate_dgp(std::size_t T, std::uint64_t seed);

}  // namespace lstmsv::models
