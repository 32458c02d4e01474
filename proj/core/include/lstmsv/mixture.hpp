#pragma once

#include "lstmsv/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace lstmsv::is2 {

struct MixtureComponent {
    double weight = 1.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// Finite Gaussian mixture used as an importance density.
class MixtureProposal {
public:
    /// Throws ConfigError unless weights are positive and sum to 1 within 1e-9
    /// and every covariance is symmetric positive definite of matching size.
    explicit MixtureProposal(std::vector<MixtureComponent> components);

    [[nodiscard]] double log_density(const Eigen::VectorXd& x) const;
    [[nodiscard]] Eigen::VectorXd sample(Rng& rng) const;

    [[nodiscard]] const std::vector<MixtureComponent>& components() const noexcept { return components_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(components_.front().mean.size()); }

private:
    std::vector<MixtureComponent> components_;
    std::vector<Eigen::MatrixXd> lower_;
    std::vector<double> log_norm_;  // log weight − ½ log det(2π Σ)
};

struct MixtureFitOptions {
    std::size_t components = 2;
    /// Fitted covariances are multiplied by inflation².
    double inflation = 1.2;
    std::size_t max_iter = 500;
    /// Stop when the mean log-likelihood per point improves by less than this.
    double tolerance = 1e-9;
    /// Added to the diagonal of a covariance that is not positive definite.
    double ridge = 1e-6;
};

struct MixtureFit {
    MixtureProposal proposal;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Expectation–maximisation for a Gaussian mixture on the rows of `x`.
/// Components start from a split of the points into equal-count groups along
/// the leading principal axis, so the result is deterministic. Returns the
/// last iterate with converged = false when max_iter is reached.
/// Throws SizeError when x has fewer rows than 2·components.
[[nodiscard]] MixtureFit fit_mixture(const Eigen::MatrixXd& x, const MixtureFitOptions& opt = {});

}  // namespace lstmsv::is2
