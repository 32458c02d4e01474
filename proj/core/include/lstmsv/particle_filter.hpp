#pragma once

#include "lstmsv/models.hpp"
#include "lstmsv/random_field.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lstmsv::filter {

/// Weighted particle cloud at step t, after weighting and before resampling.
/// `weights` are normalised. The recurrent arrays are empty for SV and N-SV.
struct WeightedParticles {
    std::size_t t = 0;
    std::span<const double> z;
    std::span<const double> weights;
    std::span<const double> h;
    std::span<const double> c;
    std::span<const double> eta;
};

struct FilterOptions {
    /// Record per-step filtered mean, sd and ESS of z.
    bool record_stats = false;
    /// Sort particles by z before inverse-CDF resampling. Disabling gives plain
    /// multinomial resampling driven by the same uniforms.
    bool sort = true;
    /// Pre-sample log-variance for LSTM-SV: z₁ = η₁ + φ·z0.
    double lstm_z0 = 0.0;
    /// Called once per step with the weighted cloud.
    std::function<void(const WeightedParticles&)> on_weighted;
};

struct FilterOutput {
    /// Log of the likelihood estimate; -inf when degenerate.
    double loglik = 0.0;
    /// True if every particle weight vanished at some step; later entries of
    /// the per-step vectors are NaN.
    bool degenerate = false;
    /// log((1/N) Σ_k w_t^k), one entry per step.
    std::vector<double> incremental;
    // Filled when record_stats is set.
    std::vector<double> filtered_mean;
    std::vector<double> filtered_sd;
    std::vector<double> ess;
};

/// Bootstrap particle filter with sorted multinomial resampling at every step.
///
/// Step 1 draws z from the initial law using row 0 of the proposal draws
/// (stationary for SV/N-SV, η₁ + φ·z0 for LSTM-SV). Each later step sorts the
/// weighted particles, selects ancestors from Φ(U^R_{t−1}) and propagates each
/// with its own proposal draw; LSTM-SV particles carry (h, C, η) through the
/// ancestor lookup. Weights are the measurement densities, handled in log space.
/// The result is a deterministic function of (params, y, field, options).
///
/// Throws SizeError when y.size() differs from field.steps(), DomainError on
/// invalid parameters.
[[nodiscard]] FilterOutput particle_filter(const models::ModelParams& params,
                                           std::span<const double> y, const RandomField& field,
                                           const FilterOptions& opt = {});

/// particle_filter() with record_stats set.
[[nodiscard]] FilterOutput filtered_volatility(const models::ModelParams& params,
                                               std::span<const double> y, const RandomField& field,
                                               FilterOptions opt = {});

}  // namespace lstmsv::filter
