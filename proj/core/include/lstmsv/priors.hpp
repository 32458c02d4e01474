#pragma once

#include "lstmsv/models.hpp"
#include "lstmsv/rng.hpp"

#include <Eigen/Core>

#include <variant>
#include <vector>

namespace lstmsv::models {

/// N(mean, variance).
struct NormalPrior {
    double mean = 0.0;
    double variance = 1.0;
};

/// Inverse-Gamma with density ∝ x^{−shape−1} exp(−scale/x).
struct InvGammaPrior {
    double shape = 1.0;
    double scale = 1.0;
};

/// (x + 1)/2 ~ Beta(a, b); the density includes the ½ change-of-variable factor.
struct ShiftedBetaPrior {
    double a = 1.0;
    double b = 1.0;
};

using PriorTerm = std::variant<NormalPrior, InvGammaPrior, ShiftedBetaPrior>;

/// One prior term per parameter, in parameter_names() order.
struct PriorSet {
    Model model = Model::Sv;
    std::vector<PriorTerm> terms;

    /// μ ~ N(0, 25), (φ+1)/2 ~ Beta(20, 1.5), σ² ~ IG(2.5, 0.25), δ ~ N(0, 0.1),
    /// β₀ ~ N(0, 0.01), β₁ ~ IG(2.5, 0.25), LSTM weights ~ N(0, 0.1).
    [[nodiscard]] static PriorSet defaults(Model m);

    /// Throws ConfigError on a size mismatch or non-positive hyperparameter.
    void validate() const;
};

[[nodiscard]] double log_density(const PriorTerm& term, double x);

/// Sum of log prior densities in the constrained parameterisation; -inf
/// outside the support.
[[nodiscard]] double log_prior(const PriorSet& prior, const ModelParams& p);
[[nodiscard]] double log_prior(const ModelParams& p);

/// Log prior density of the unconstrained vector u (includes log |∂θ/∂u|).
[[nodiscard]] double log_prior_unconstrained(const PriorSet& prior, const Eigen::VectorXd& u);

[[nodiscard]] ModelParams sample_prior(const PriorSet& prior, Rng& rng);

}  // namespace lstmsv::models
