#pragma once

#include "lstmsv/adaptation.hpp"
#include "lstmsv/particle_filter.hpp"
#include "lstmsv/priors.hpp"
#include "lstmsv/random_field.hpp"
#include "lstmsv/rng.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lstmsv::mcmc {

struct SamplerConfig {
    std::size_t iters = 100000;
    std::size_t burnin = 10000;
    std::size_t thin = 5;
    std::size_t particles = 200;
    std::size_t blocks = 200;
    double target_accept = 0.25;
    std::uint64_t seed = 1;
    /// Proposal covariance refresh period during burn-in.
    std::size_t cov_refresh = 500;
    /// Initial proposal covariance is initial_cov·I.
    double initial_cov = 0.01;

    /// Throws ConfigError unless burnin < iters, thin ≥ 1, particles ≥ 1,
    /// blocks ≥ 1 and target_accept ∈ (0, 1).
    void validate() const;
};

/// Posterior on an unconstrained parameter vector.
///
/// `loglik` receives the random field for pseudo-marginal targets (steps > 0)
/// and nullptr for targets with an exact likelihood (steps == 0).
struct PosteriorTarget {
    std::size_t dim = 0;
    std::vector<std::string> names;
    std::size_t steps = 0;
    /// Log prior density of the unconstrained vector, Jacobian included.
    std::function<double(const Eigen::VectorXd&)> log_prior;
    std::function<double(const Eigen::VectorXd&, const filter::RandomField*)> loglik;
    /// Starting point.
    std::function<Eigen::VectorXd(Rng&)> initial;
    /// Constrained view of an unconstrained vector, in `names` order.
    std::function<std::vector<double>(const Eigen::VectorXd&)> constrained;
};

/// Pseudo-marginal target for a volatility model: particle-filter likelihood
/// with `filter_opts`, prior `prior`, start drawn from the prior.
[[nodiscard]] PosteriorTarget model_target(const models::PriorSet& prior, std::span<const double> y,
                                           const filter::FilterOptions& filter_opts = {});

/// Every iteration of a chain; summarize() applies burn-in and thinning.
struct ChainDraws {
    std::vector<std::string> names;
    Eigen::MatrixXd unconstrained;  // iterations × dim
    Eigen::MatrixXd constrained;    // iterations × names.size()
    std::vector<double> logliks;
    std::vector<std::uint8_t> accepted;
    std::vector<double> scale_trace;
    /// Number of iterations recorded; below the configured count after a failure.
    std::size_t completed = 0;
    /// Non-empty when the run stopped early.
    std::string failure;
};

struct ChainSummary {
    std::vector<std::string> names;
    std::vector<double> mean;
    std::vector<double> sd;
    /// NaN when the retained draws are too few or constant.
    std::vector<double> iact;
    /// Acceptance rate over the post-burn-in iterations.
    double acceptance_rate = 0.0;
    std::size_t retained = 0;
};

/// Block pseudo-marginal Metropolis–Hastings.
///
/// Each step proposes θ′ by a Gaussian random walk on the unconstrained space,
/// redraws one uniformly chosen block of the random field, runs the likelihood
/// at (θ′, u′) and accepts both jointly with probability
/// min{1, p̂(y|θ′,u′)p(θ′) / p̂(y|θ,u)p(θ)}. On rejection the block is restored.
/// During burn-in the scale follows ScaleAdapter and the covariance is
/// replaced every cov_refresh steps by the sample covariance of the second
/// half of the draws so far; both are frozen afterwards.
class BpmSampler {
public:
    /// Draws the start point and random field from the ("chain", seed) substream.
    /// Throws EstimationError when no start with finite posterior is found.
    BpmSampler(PosteriorTarget target, SamplerConfig cfg);

    /// Advance one iteration; returns whether the proposal was accepted.
    bool step();

    [[nodiscard]] const Eigen::VectorXd& theta() const noexcept { return theta_; }
    [[nodiscard]] double loglik() const noexcept { return loglik_; }
    [[nodiscard]] double log_prior() const noexcept { return log_prior_; }
    [[nodiscard]] double scale() const noexcept { return adapter_.scale(); }
    [[nodiscard]] std::size_t iteration() const noexcept { return iter_; }
    [[nodiscard]] const filter::RandomField* field() const noexcept {
        return field_ ? &*field_ : nullptr;
    }
    [[nodiscard]] const PosteriorTarget& target() const noexcept { return target_; }
    /// Block refreshed in the most recent step (the field's block count if none).
    [[nodiscard]] std::size_t last_block() const noexcept { return last_block_; }

private:
    void refresh_covariance();

    PosteriorTarget target_;
    SamplerConfig cfg_;
    Rng rng_;
    std::optional<filter::RandomField> field_;
    Eigen::VectorXd theta_;
    double loglik_ = 0.0;
    double log_prior_ = 0.0;
    RandomWalkProposal proposal_;
    ScaleAdapter adapter_;
    std::size_t iter_ = 0;
    std::size_t last_block_ = 0;
    std::vector<Eigen::VectorXd> history_;
};

/// Run cfg.iters iterations. A numerical failure after the start stops the
/// chain and is reported through ChainDraws::failure with the completed prefix.
[[nodiscard]] ChainDraws run_bpm(const PosteriorTarget& target, const SamplerConfig& cfg);
[[nodiscard]] ChainDraws run_bpm(const models::PriorSet& prior, std::span<const double> y,
                                 const SamplerConfig& cfg, const filter::FilterOptions& filter_opts = {});

[[nodiscard]] ChainSummary summarize(const ChainDraws& chain, std::size_t burnin, std::size_t thin);
[[nodiscard]] inline ChainSummary summarize(const ChainDraws& chain, const SamplerConfig& cfg) {
    return summarize(chain, cfg.burnin, cfg.thin);
}

/// Indices of the iterations kept after burn-in and thinning.
[[nodiscard]] std::vector<std::size_t> retained_indices(std::size_t completed, std::size_t burnin,
                                                        std::size_t thin);

}  // namespace lstmsv::mcmc
