#include "lstmsv/adaptation.hpp"
#include "lstmsv/errors.hpp"

#include <cmath>

namespace lstmsv::mcmc {

double adapt_scale(double scale, bool accepted, std::size_t iter, double target) noexcept {
    const double pq = target * (1.0 - target);
    const double n0 = 5.0 / pq;
    const double a = accepted ? 1.0 : 0.0;
    return scale * std::exp((a - target) / (pq * (n0 + static_cast<double>(iter))));
}

ScaleAdapter::ScaleAdapter(double initial_scale, double target)
    : scale_(initial_scale), target_(target), anchor_(initial_scale) {
    if (!(initial_scale > 0.0)) throw ConfigError("initial proposal scale must be positive");
    if (!(target > 0.0 && target < 1.0)) throw ConfigError("target acceptance must lie in (0, 1)");
}

double ScaleAdapter::update(bool accepted) noexcept {
    scale_ = adapt_scale(scale_, accepted, ++count_, target_);
    if (scale_ > 3.0 * anchor_ || scale_ < anchor_ / 3.0) restart();
    return scale_;
}

void ScaleAdapter::restart() noexcept {
    anchor_ = scale_;
    count_ = 0;
}

RandomWalkProposal::RandomWalkProposal(const Eigen::MatrixXd& cov) {
    if (cov.rows() == 0 || cov.rows() != cov.cols())
        throw ConfigError("proposal covariance must be a non-empty square matrix");
    if (!cov.allFinite() || !cov.isApprox(cov.transpose(), 1e-10))
        throw ConfigError("proposal covariance must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw ConfigError("proposal covariance is not positive definite");
    lower_ = llt.matrixL();
}

Eigen::VectorXd RandomWalkProposal::propose(const Eigen::VectorXd& theta, double scale,
                                            const Eigen::VectorXd& eps) const {
    if (theta.size() != lower_.rows() || eps.size() != lower_.rows())
        throw SizeError("proposal: dimension mismatch");
    return theta + scale * (lower_ * eps);
}

Eigen::VectorXd propose(const Eigen::VectorXd& theta, double scale, const Eigen::MatrixXd& cov,
                        const Eigen::VectorXd& eps) {
    return RandomWalkProposal(cov).propose(theta, scale, eps);
}

}  // namespace lstmsv::mcmc
