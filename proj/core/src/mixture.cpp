#include "lstmsv/mixture.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lstmsv::is2 {

namespace {

constexpr double kLog2Pi = 2.0 * kLogSqrt2Pi;

Eigen::MatrixXd weighted_cov(const Eigen::MatrixXd& x, const Eigen::VectorXd& r, const Eigen::VectorXd& mean,
                             double total) {
    const Eigen::MatrixXd c = x.rowwise() - mean.transpose();
    return (c.transpose() * r.asDiagonal() * c) / total;
}

Eigen::MatrixXd make_pd(Eigen::MatrixXd cov, double ridge) {
    cov = 0.5 * (cov + cov.transpose());
    for (int attempt = 0; attempt < 20; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() == Eigen::Success) return cov;
        cov.diagonal().array() += ridge;
        ridge *= 10.0;
    }
    throw EstimationError("mixture covariance could not be regularised");
}

}  // namespace

MixtureProposal::MixtureProposal(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("mixture needs at least one component");
    const auto d = components_.front().mean.size();
    if (d == 0) throw ConfigError("mixture dimension must be positive");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0)) throw ConfigError("mixture weights must be positive");
        if (c.mean.size() != d || c.cov.rows() != d || c.cov.cols() != d)
            throw ConfigError("mixture component dimensions disagree");
        if (!c.cov.isApprox(c.cov.transpose(), 1e-10)) throw ConfigError("mixture covariance must be symmetric");
        Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
        if (llt.info() != Eigen::Success) throw ConfigError("mixture covariance must be positive definite");
        Eigen::MatrixXd L = llt.matrixL();
        const double log_det = 2.0 * L.diagonal().array().log().sum();
        lower_.push_back(std::move(L));
        log_norm_.push_back(std::log(c.weight) - 0.5 * (static_cast<double>(d) * kLog2Pi + log_det));
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mixture weights must sum to 1");
}

double MixtureProposal::log_density(const Eigen::VectorXd& x) const {
    std::vector<double> terms(components_.size());
    for (std::size_t j = 0; j < components_.size(); ++j) {
        const Eigen::VectorXd z =
            lower_[j].triangularView<Eigen::Lower>().solve(x - components_[j].mean);
        terms[j] = log_norm_[j] - 0.5 * z.squaredNorm();
    }
    return log_sum_exp(terms);
}

Eigen::VectorXd MixtureProposal::sample(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    std::size_t j = 0;
    double acc = components_[0].weight;
    while (u > acc && j + 1 < components_.size()) acc += components_[++j].weight;
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(components_[j].mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    return components_[j].mean + lower_[j] * z;
}

MixtureFit fit_mixture(const Eigen::MatrixXd& x, const MixtureFitOptions& opt) {
    const auto n = x.rows();
    const auto d = x.cols();
    const auto k = static_cast<Eigen::Index>(opt.components);
    if (k < 1) throw ConfigError("mixture needs at least one component");
    if (d < 1 || n < 2 * k) throw SizeError("too few points for the requested mixture");
    if (!x.allFinite()) throw DomainError("mixture fit: non-finite draws");

    // Initial hard assignment: equal-count groups along the leading principal axis.
    const Eigen::VectorXd mean_all = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - mean_all.transpose();
    const Eigen::MatrixXd cov_all = centered.transpose() * centered / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_all);
    Eigen::VectorXd axis = eig.eigenvectors().col(d - 1);
    // Fix the sign so the split does not depend on the eigensolver's convention.
    Eigen::Index big = 0;
    axis.cwiseAbs().maxCoeff(&big);
    if (axis[big] < 0.0) axis = -axis;
    const Eigen::VectorXd score = centered * axis;
    std::vector<Eigen::Index> rank(static_cast<std::size_t>(n));
    std::iota(rank.begin(), rank.end(), Eigen::Index{0});
    std::stable_sort(rank.begin(), rank.end(), [&](auto a, auto b) { return score[a] < score[b]; });

    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, k);
    for (Eigen::Index r = 0; r < n; ++r) resp(rank[static_cast<std::size_t>(r)], r * k / n) = 1.0;

    std::vector<MixtureComponent> comps(static_cast<std::size_t>(k));
    auto m_step = [&] {
        for (Eigen::Index j = 0; j < k; ++j) {
            auto& c = comps[static_cast<std::size_t>(j)];
            const Eigen::VectorXd r = resp.col(j);
            const double nk = std::max(r.sum(), 1e-300);
            c.weight = nk / static_cast<double>(n);
            c.mean = (x.transpose() * r) / nk;
            c.cov = make_pd(weighted_cov(x, r, c.mean, nk), opt.ridge);
        }
        double total = 0.0;
        for (const auto& c : comps) total += c.weight;
        for (auto& c : comps) c.weight /= total;
    };

    m_step();
    MixtureFit fit{MixtureProposal(comps), false, 0};
    double prev = -std::numeric_limits<double>::infinity();
    std::vector<double> logp(static_cast<std::size_t>(k));
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        // E-step.
        double ll = 0.0;
        std::vector<Eigen::MatrixXd> lower;
        std::vector<double> log_norm;
        for (const auto& c : comps) {
            Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(c.cov).matrixL();
            log_norm.push_back(std::log(c.weight) - 0.5 * (static_cast<double>(d) * kLog2Pi +
                                                           2.0 * L.diagonal().array().log().sum()));
            lower.push_back(std::move(L));
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd xi = x.row(i).transpose();
            for (Eigen::Index j = 0; j < k; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                const Eigen::VectorXd z = lower[ju].triangularView<Eigen::Lower>().solve(xi - comps[ju].mean);
                logp[ju] = log_norm[ju] - 0.5 * z.squaredNorm();
            }
            const double lse = log_sum_exp(logp);
            ll += lse;
            for (Eigen::Index j = 0; j < k; ++j) resp(i, j) = std::exp(logp[static_cast<std::size_t>(j)] - lse);
        }
        ll /= static_cast<double>(n);
        fit.iterations = it;
        if (ll - prev < opt.tolerance && it > 1) {
            fit.converged = true;
            break;
        }
        prev = ll;
        m_step();
    }

    for (auto& c : comps) c.cov = make_pd(c.cov * (opt.inflation * opt.inflation), opt.ridge);
    fit.proposal = MixtureProposal(std::move(comps));
    return fit;
}

}  // namespace lstmsv::is2
