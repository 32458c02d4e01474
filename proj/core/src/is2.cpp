#include "lstmsv/is2.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/parallel.hpp"
#include "lstmsv/random_field.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace lstmsv::is2 {

void Is2Config::validate() const {
    if (samples < 1) throw ConfigError("IS2 needs at least one importance sample");
    if (particles < 1) throw ConfigError("IS2 particle count must be positive");
    if (runs < 1) throw ConfigError("IS2 needs at least one run");
}

MarglikEstimate is2_marglik(const std::function<double(const Eigen::VectorXd&)>& log_prior,
                            const LikelihoodEstimator& loglik, const MixtureProposal& proposal,
                            const Is2Config& cfg) {
    cfg.validate();
    MarglikEstimate est;
    est.samples = cfg.samples;
    est.particles = cfg.particles;
    est.runs = cfg.runs;

    std::vector<double> logw(cfg.samples);
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        const std::uint64_t run_seed = derive_seed(cfg.seed, "is2-run", r);
        parallel_for(cfg.samples, cfg.threads, [&](std::size_t i) {
            Rng rng = make_rng(run_seed, "sample", i);
            const Eigen::VectorXd theta = proposal.sample(rng);
            const double lp = log_prior(theta);
            if (!std::isfinite(lp)) {
                logw[i] = kNegInf;
                return;
            }
            const double ll = loglik(theta, rng);
            logw[i] = std::isnan(ll) ? kNegInf : lp + ll - proposal.log_density(theta);
        });
        const double lse = log_sum_exp(logw);
        if (!std::isfinite(lse))
            throw EstimationError("every importance weight vanished; the proposal is mis-specified");
        est.run_estimates.push_back(lse - std::log(static_cast<double>(cfg.samples)));
    }

    double m = 0.0;
    for (double v : est.run_estimates) m += v;
    m /= static_cast<double>(cfg.runs);
    est.log_marglik = m;
    if (cfg.runs > 1) {
        double ss = 0.0;
        for (double v : est.run_estimates) ss += (v - m) * (v - m);
        est.mc_se = std::sqrt(ss / static_cast<double>(cfg.runs - 1) / static_cast<double>(cfg.runs));
    } else {
        est.mc_se = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

MarglikEstimate is2_marglik(const models::PriorSet& prior, std::span<const double> y,
                            const MixtureProposal& proposal, const Is2Config& cfg,
                            const filter::FilterOptions& filter_opts) {
    prior.validate();
    if (y.empty()) throw SizeError("IS2 needs a nonempty series");
    if (proposal.dim() != models::parameter_count(prior.model))
        throw ConfigError("proposal dimension does not match the model");
    const auto model = prior.model;
    auto data = std::make_shared<const std::vector<double>>(y.begin(), y.end());
    const std::size_t n_particles = cfg.particles;
    auto log_prior = [&prior](const Eigen::VectorXd& u) { return models::log_prior_unconstrained(prior, u); };
    auto loglik = [&](const Eigen::VectorXd& u, Rng& rng) {
        const filter::RandomField field(data->size(), n_particles, 1, rng);
        return filter::particle_filter(models::from_unconstrained(model, u), *data, field, filter_opts).loglik;
    };
    return is2_marglik(log_prior, loglik, proposal, cfg);
}

MixtureFit fit_proposal(const mcmc::ChainDraws& chain, std::size_t burnin, std::size_t thin,
                        const MixtureFitOptions& opt) {
    const auto idx = mcmc::retained_indices(chain.completed, burnin, thin);
    if (idx.size() < 500) throw SizeError("proposal fit needs at least 500 retained draws");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(idx.size()), chain.unconstrained.cols());
    for (std::size_t r = 0; r < idx.size(); ++r)
        x.row(static_cast<Eigen::Index>(r)) = chain.unconstrained.row(static_cast<Eigen::Index>(idx[r]));
    return fit_mixture(x, opt);
}

}  // namespace lstmsv::is2
