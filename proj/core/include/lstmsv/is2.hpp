#pragma once

#include "lstmsv/bpm.hpp"
#include "lstmsv/mixture.hpp"
#include "lstmsv/particle_filter.hpp"
#include "lstmsv/priors.hpp"
#include "lstmsv/rng.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lstmsv::is2 {

struct Is2Config {
    std::size_t samples = 5000;    // M
    std::size_t particles = 2000;  // N per likelihood estimate
    std::size_t runs = 10;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    /// Throws ConfigError unless samples ≥ 1, particles ≥ 1 and runs ≥ 1.
    void validate() const;
};

struct MarglikEstimate {
    /// Mean over runs of the per-run log estimates.
    double log_marglik = 0.0;
    /// Standard error of that mean across runs; NaN when runs == 1.
    double mc_se = 0.0;
    std::size_t samples = 0;
    std::size_t particles = 0;
    std::size_t runs = 0;
    std::vector<double> run_estimates;
};

/// Likelihood estimate at an unconstrained point, drawing any auxiliary
/// randomness from `rng`.
using LikelihoodEstimator = std::function<double(const Eigen::VectorXd&, Rng&)>;

/// Importance sampling with estimated likelihoods.
///
/// Run r draws θ_i (i < M) from `proposal` and forms
///   log w_i = log p(θ_i) + log p̂(y|θ_i) − log g(θ_i)
/// where sample i uses its own engine seeded from ("is2-run", seed, r) and
/// ("sample", i). The run estimate is log((1/M) Σ exp(log w_i)). Samples may be
/// evaluated on cfg.threads workers without affecting the result.
/// Throws EstimationError if every weight in a run vanishes.
[[nodiscard]] MarglikEstimate is2_marglik(const std::function<double(const Eigen::VectorXd&)>& log_prior,
                                          const LikelihoodEstimator& loglik,
                                          const MixtureProposal& proposal, const Is2Config& cfg);

/// Model version: particle-filter likelihood with cfg.particles particles and
/// a fresh random field per sample.
[[nodiscard]] MarglikEstimate is2_marglik(const models::PriorSet& prior, std::span<const double> y,
                                          const MixtureProposal& proposal, const Is2Config& cfg,
                                          const filter::FilterOptions& filter_opts = {});

/// Fit the importance density to the retained unconstrained draws of a chain.
/// Throws SizeError with fewer than 500 retained draws.
[[nodiscard]] MixtureFit fit_proposal(const mcmc::ChainDraws& chain, std::size_t burnin, std::size_t thin,
                                      const MixtureFitOptions& opt = {});

}  // namespace lstmsv::is2
