#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>

namespace lstmsv::mcmc {

/// One Robbins–Monro step on log scale:
///   log s ← log s + (accepted − target) / (target·(1 − target)·(n0 + iter))
/// with n0 = 5 / (target·(1 − target)). `iter` counts steps since the last
/// restart and starts at 1.
[[nodiscard]] double adapt_scale(double scale, bool accepted, std::size_t iter, double target) noexcept;

/// Stateful driver of adapt_scale(). The step counter restarts whenever the
/// scale has moved by a factor of 3 since the previous restart, so an early
/// mis-scaled start does not freeze into tiny steps.
class ScaleAdapter {
public:
    ScaleAdapter(double initial_scale, double target);

    double update(bool accepted) noexcept;
    void restart() noexcept;

    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double target() const noexcept { return target_; }

private:
    double scale_;
    double target_;
    double anchor_;
    std::size_t count_ = 0;
};

/// Gaussian random walk θ′ = θ + scale·L·eps with L the lower Cholesky factor
/// of `cov`.
class RandomWalkProposal {
public:
    /// Throws ConfigError unless cov is square, symmetric and positive definite.
    explicit RandomWalkProposal(const Eigen::MatrixXd& cov);

    [[nodiscard]] Eigen::VectorXd propose(const Eigen::VectorXd& theta, double scale,
                                          const Eigen::VectorXd& eps) const;
    [[nodiscard]] const Eigen::MatrixXd& factor() const noexcept { return lower_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.rows()); }

private:
    Eigen::MatrixXd lower_;
};

/// Convenience wrapper: θ + scale·chol(cov)·eps.
[[nodiscard]] Eigen::VectorXd propose(const Eigen::VectorXd& theta, double scale,
                                      const Eigen::MatrixXd& cov, const Eigen::VectorXd& eps);

}  // namespace lstmsv::mcmc
