#include "lstmsv/simulate.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/rng.hpp"

#include <cmath>

namespace lstmsv::models {

SimulatedPath simulate(const ModelParams& p, std::size_t T, std::uint64_t seed,
                       const SimulationOptions& opt) {
    if (T < 1) throw SizeError("simulate: T must be at least 1");
    validate(p);
    Rng rng = make_rng(seed, "simulate");
    std::normal_distribution<double> normal;

    SimulatedPath out;
    out.y.resize(T);
    out.z.resize(T);
    Transition step = initial_transition(p, normal(rng), opt.lstm_z0);
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0) step = transition(p, step.z, step.state, normal(rng));
        out.z[t] = step.z;
        out.y[t] = std::sqrt(measurement_variance(p, step.z)) * normal(rng);
    }
    return out;
}

double dgp_drift(double z) noexcept {
    const double z2 = z * z;
    return 0.1 + 0.96 * z - 0.8 * z2 / (1.0 + z2) + sigmoid(z);
}

SimulatedPath simulate_dgp(std::size_t T, std::uint64_t seed) {
    if (T < 1) throw SizeError("simulate_dgp: T must be at least 1");
    Rng rng = make_rng(seed, "simulate-dgp");
    std::normal_distribution<double> normal;
    const double sigma = std::sqrt(kDgpSigma2);

    SimulatedPath out;
    out.y.resize(T);
    out.z.resize(T);
    double z = normal(rng);
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0) z = dgp_drift(z) + sigma * normal(rng);
        out.z[t] = z;
        out.y[t] = std::exp(0.5 * z) * normal(rng);
    }
    return out;
}

}  // namespace lstmsv::models
