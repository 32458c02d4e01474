#include "lstmsv/errors.hpp"
#include "lstmsv/is2.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/mixture.hpp"
#include "lstmsv/simulate.hpp"

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lstmsv;
using namespace lstmsv::is2;

namespace {

// y_i | θ ~ N(θ, 1), θ ~ N(0, 1): evidence is N(0, I + 11ᵀ).
struct Conjugate {
    std::vector<double> y;
    double sum = 0.0, sumsq = 0.0;

    explicit Conjugate(std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        std::normal_distribution<double> normal;
        const double theta = normal(rng);
        for (std::size_t i = 0; i < n; ++i) {
            y.push_back(theta + normal(rng));
            sum += y.back();
            sumsq += y.back() * y.back();
        }
    }
    [[nodiscard]] double n() const { return static_cast<double>(y.size()); }
    [[nodiscard]] double log_evidence() const {
        return -0.5 * n() * std::log(2 * std::numbers::pi) - 0.5 * std::log1p(n()) -
               0.5 * (sumsq - sum * sum / (1.0 + n()));
    }
    [[nodiscard]] double post_mean() const { return sum / (1.0 + n()); }
    [[nodiscard]] double post_var() const { return 1.0 / (1.0 + n()); }
    [[nodiscard]] double log_prior(const Eigen::VectorXd& t) const { return normal_logpdf(t[0], 0.0, 1.0); }
    [[nodiscard]] double loglik(const Eigen::VectorXd& t) const {
        double s = 0.0;
        for (double v : y) s += normal_logpdf(v, t[0], 1.0);
        return s;
    }
    [[nodiscard]] MixtureProposal proposal(double inflation) const {
        MixtureComponent c;
        c.mean = Eigen::VectorXd::Constant(1, post_mean());
        c.cov = Eigen::MatrixXd::Constant(1, 1, post_var() * inflation * inflation);
        return MixtureProposal({c});
    }
    MarglikEstimate run(const MixtureProposal& prop, std::size_t M, std::size_t runs, std::uint64_t seed,
                        unsigned threads = 1) const {
        Is2Config cfg;
        cfg.samples = M;
        cfg.runs = runs;
        cfg.seed = seed;
        cfg.threads = threads;
        return is2_marglik([this](const Eigen::VectorXd& t) { return log_prior(t); },
                           [this](const Eigen::VectorXd& t, Rng&) { return loglik(t); }, prop, cfg);
    }
};

Eigen::MatrixXd two_cluster_draws(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double shift = (i % 2) ? 10.0 : 0.0;
        x(i, 0) = shift + normal(rng);
        x(i, 1) = -shift + normal(rng);
    }
    return x;
}

}  // namespace

TEST(Mixture, SingleComponentIsMomentMatched) {
    const auto x = two_cluster_draws(1000, 1);
    MixtureFitOptions opt;
    opt.components = 1;
    const auto fit = fit_mixture(x, opt);
    const Eigen::VectorXd m = x.colwise().mean().transpose();
    const Eigen::MatrixXd c = x.rowwise() - m.transpose();
    const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(x.rows());
    const auto& comp = fit.proposal.components().front();
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(comp.weight, 1.0, 1e-12);
    EXPECT_LT((comp.mean - m).norm(), 1e-10);
    EXPECT_LT((comp.cov - 1.44 * cov).norm(), 1e-8);
}

TEST(Mixture, RecoversSeparatedClusters) {
    const auto fit = fit_mixture(two_cluster_draws(4000, 2));
    ASSERT_EQ(fit.proposal.components().size(), 2u);
    for (const auto& c : fit.proposal.components()) {
        EXPECT_NEAR(c.weight, 0.5, 0.05);
        const bool high = c.mean[0] > 5.0;
        EXPECT_NEAR(c.mean[0], high ? 10.0 : 0.0, 0.1);
        EXPECT_NEAR(c.mean[1], high ? -10.0 : 0.0, 0.1);
    }
}

TEST(Mixture, DensityMatchesClosedFormAndIntegrates) {
    namespace bm = boost::math;
    MixtureComponent a{0.3, Eigen::VectorXd::Constant(1, -1.0), Eigen::MatrixXd::Constant(1, 1, 0.25)};
    MixtureComponent b{0.7, Eigen::VectorXd::Constant(1, 2.0), Eigen::MatrixXd::Constant(1, 1, 4.0)};
    const MixtureProposal mix({a, b});
    double integral = 0.0;
    const double h = 1e-3;
    for (double x = -30.0; x < 30.0; x += h) {
        const double expect = 0.3 * bm::pdf(bm::normal(-1.0, 0.5), x) + 0.7 * bm::pdf(bm::normal(2.0, 2.0), x);
        if (std::abs(x - 0.5) < h / 2) EXPECT_NEAR(std::exp(mix.log_density(Eigen::VectorXd::Constant(1, x))), expect, 1e-12);
        integral += std::exp(mix.log_density(Eigen::VectorXd::Constant(1, x))) * h;
    }
    EXPECT_NEAR(integral, 1.0, 1e-6);
}

TEST(Mixture, SamplingMatchesMoments) {
    MixtureComponent a{0.25, Eigen::VectorXd::Constant(1, -4.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
    MixtureComponent b{0.75, Eigen::VectorXd::Constant(1, 4.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
    const MixtureProposal mix({a, b});
    Rng rng(3);
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += mix.sample(rng)[0];
    // Mean 2, variance 1 + 12 = 13.
    EXPECT_NEAR(s / n, 2.0, 4.0 * std::sqrt(13.0 / n));
}

TEST(Mixture, InvalidComponents) {
    MixtureComponent a{0.5, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
    EXPECT_THROW(MixtureProposal({a}), ConfigError);
    a.weight = 1.0;
    a.cov(0, 0) = -1.0;
    EXPECT_THROW(MixtureProposal({a}), ConfigError);
    EXPECT_THROW((void)fit_mixture(Eigen::MatrixXd::Zero(3, 2)), SizeError);
}

TEST(Is2, ConjugateEvidence) {
    const Conjugate toy(50, 7);
    const auto est = toy.run(toy.proposal(1.2), 5000, 10, 11);
    EXPECT_EQ(est.run_estimates.size(), 10u);
    EXPECT_GT(est.mc_se, 0.0);
    EXPECT_NEAR(est.log_marglik, toy.log_evidence(), 3.0 * est.mc_se);
}

TEST(Is2, ExactPosteriorProposalHasNoVariance) {
    const Conjugate toy(30, 8);
    const auto est = toy.run(toy.proposal(1.0), 500, 5, 12);
    EXPECT_LE(est.mc_se, 1e-9);
    EXPECT_NEAR(est.log_marglik, toy.log_evidence(), 1e-9);
}

TEST(Is2, NaturalScaleEstimatorIsUnbiased) {
    const Conjugate toy(20, 9);
    const double z = toy.log_evidence();
    const auto est = toy.run(toy.proposal(1.5), 20, 200, 13);
    double s = 0.0, s2 = 0.0;
    for (double e : est.run_estimates) {
        const double w = std::exp(e - z);
        s += w;
        s2 += w * w;
    }
    const double m = s / 200.0;
    const double se = std::sqrt((s2 / 200.0 - m * m) / 199.0);
    EXPECT_NEAR(m, 1.0, 3.0 * se);
}

TEST(Is2, DoublingSamplesHalvesVariance) {
    const Conjugate toy(20, 10);
    const double z = toy.log_evidence();
    auto natural_variance = [&](std::size_t M, std::uint64_t seed) {
        const auto est = toy.run(toy.proposal(1.5), M, 1000, seed);
        double s = 0.0, s2 = 0.0;
        for (double e : est.run_estimates) {
            const double w = std::exp(e - z);
            s += w;
            s2 += w * w;
        }
        return s2 / 1000.0 - (s / 1000.0) * (s / 1000.0);
    };
    const double ratio = natural_variance(25, 14) / natural_variance(50, 15);
    EXPECT_GT(ratio, 1.5);
    EXPECT_LT(ratio, 2.7);
}

TEST(Is2, SingleRunHasNoStandardError) {
    const Conjugate toy(10, 11);
    EXPECT_TRUE(std::isnan(toy.run(toy.proposal(1.2), 200, 1, 1).mc_se));
}

TEST(Is2, AllWeightsVanishing) {
    const Conjugate toy(10, 12);
    Is2Config cfg;
    cfg.samples = 100;
    cfg.runs = 2;
    EXPECT_THROW((void)is2_marglik([](const Eigen::VectorXd&) { return 0.0; },
                                   [](const Eigen::VectorXd&, Rng&) { return kNegInf; }, toy.proposal(1.0), cfg),
                 EstimationError);
}

TEST(Is2, ThreadCountDoesNotChangeResult) {
    const auto y = models::simulate(models::SvParams{0.0, 0.9, 0.1}, 40, 2).y;
    MixtureComponent c{1.0, models::to_unconstrained(models::SvParams{0.0, 0.9, 0.1}),
                       Eigen::MatrixXd::Identity(3, 3) * 0.05};
    const MixtureProposal prop({c});
    Is2Config cfg;
    cfg.samples = 64;
    cfg.particles = 20;
    cfg.runs = 3;
    cfg.seed = 5;
    const auto prior = models::PriorSet::defaults(models::Model::Sv);
    const auto a = is2_marglik(prior, y, prop, cfg);
    cfg.threads = 3;
    const auto b = is2_marglik(prior, y, prop, cfg);
    EXPECT_EQ(a.run_estimates, b.run_estimates);
    EXPECT_TRUE(std::isfinite(a.log_marglik));
    EXPECT_EQ(a.particles, 20u);
}

TEST(Is2, LstmProposalCoversRetainedDraws) {
    models::LstmSvParams truth;
    truth.beta0 = 0.2;
    truth.beta1 = 0.1;
    truth.phi = 0.9;
    truth.sigma2 = 0.1;
    const auto y = models::simulate(truth, 40, 3).y;
    mcmc::SamplerConfig cfg;
    cfg.iters = 1500;
    cfg.burnin = 500;
    cfg.thin = 1;
    cfg.particles = 10;
    cfg.blocks = 10;
    const auto chain = mcmc::run_bpm(models::PriorSet::defaults(models::Model::LstmSv), y, cfg);
    const auto fit = fit_proposal(chain, cfg.burnin, cfg.thin);
    EXPECT_EQ(fit.proposal.dim(), 16u);
    for (std::size_t i = cfg.burnin; i < chain.completed; ++i)
        ASSERT_TRUE(std::isfinite(fit.proposal.log_density(chain.unconstrained.row(static_cast<Eigen::Index>(i)).transpose())));
    EXPECT_THROW((void)fit_proposal(chain, 1100, 1), SizeError);
}
