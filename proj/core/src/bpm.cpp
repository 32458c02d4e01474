#include "lstmsv/bpm.hpp"
#include "lstmsv/diagnostics.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <utility>

namespace lstmsv::mcmc {

namespace {

constexpr int kMaxStartAttempts = 1000;

Eigen::VectorXd standard_normal(std::size_t d, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    return v;
}

}  // namespace

void SamplerConfig::validate() const {
    if (iters == 0) throw ConfigError("iters must be positive");
    if (burnin >= iters) throw ConfigError("burnin must be smaller than iters");
    if (thin < 1) throw ConfigError("thin must be at least 1");
    if (particles < 1) throw ConfigError("particle count must be at least 1");
    if (blocks < 1) throw ConfigError("block count must be at least 1");
    if (!(target_accept > 0.0 && target_accept < 1.0))
        throw ConfigError("target acceptance must lie in (0, 1)");
    if (cov_refresh < 1) throw ConfigError("covariance refresh period must be positive");
    if (!(initial_cov > 0.0)) throw ConfigError("initial covariance must be positive");
}

PosteriorTarget model_target(const models::PriorSet& prior, std::span<const double> y,
                             const filter::FilterOptions& filter_opts) {
    prior.validate();
    if (y.empty()) throw SizeError("model target needs a nonempty series");
    const auto model = prior.model;
    auto data = std::make_shared<const std::vector<double>>(y.begin(), y.end());
    auto opts = std::make_shared<const filter::FilterOptions>(filter_opts);

    PosteriorTarget t;
    t.dim = models::parameter_count(model);
    t.names = models::parameter_names(model);
    t.steps = y.size();
    t.log_prior = [prior](const Eigen::VectorXd& u) { return models::log_prior_unconstrained(prior, u); };
    t.loglik = [model, data, opts](const Eigen::VectorXd& u, const filter::RandomField* field) {
        return filter::particle_filter(models::from_unconstrained(model, u), *data, *field, *opts).loglik;
    };
    t.initial = [prior](Rng& rng) { return models::to_unconstrained(models::sample_prior(prior, rng)); };
    t.constrained = [model](const Eigen::VectorXd& u) {
        return models::to_vector(models::from_unconstrained(model, u));
    };
    return t;
}

BpmSampler::BpmSampler(PosteriorTarget target, SamplerConfig cfg)
    : target_(std::move(target)),
      cfg_(cfg),
      rng_(make_rng(cfg.seed, "chain")),
      proposal_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(std::max<std::size_t>(target_.dim, 1)),
                                          static_cast<Eigen::Index>(std::max<std::size_t>(target_.dim, 1))) *
                cfg.initial_cov),
      adapter_(2.38 / std::sqrt(static_cast<double>(std::max<std::size_t>(target_.dim, 1))),
               cfg.target_accept) {
    cfg_.validate();
    if (target_.dim == 0 || !target_.log_prior || !target_.loglik || !target_.initial)
        throw ConfigError("posterior target is incomplete");
    if (target_.steps > 0) field_.emplace(target_.steps, cfg_.particles, cfg_.blocks, rng_);
    last_block_ = field_ ? field_->block_count() : 0;

    for (int attempt = 0; attempt < kMaxStartAttempts; ++attempt) {
        theta_ = target_.initial(rng_);
        if (theta_.size() != static_cast<Eigen::Index>(target_.dim))
            throw ConfigError("initial point has the wrong dimension");
        log_prior_ = target_.log_prior(theta_);
        if (!std::isfinite(log_prior_)) continue;
        loglik_ = target_.loglik(theta_, field());
        if (std::isfinite(loglik_)) return;
    }
    throw EstimationError("no starting point with a finite likelihood estimate was found");
}

bool BpmSampler::step() {
    const Eigen::VectorXd eps = standard_normal(target_.dim, rng_);
    const Eigen::VectorXd prop = proposal_.propose(theta_, adapter_.scale(), eps);
    std::size_t block = 0;
    if (field_) block = std::uniform_int_distribution<std::size_t>(0, field_->block_count() - 1)(rng_);
    const double log_u = std::log(std::uniform_real_distribution<double>(0.0, 1.0)(rng_));

    bool accepted = false;
    const double lp = target_.log_prior(prop);
    if (std::isfinite(lp)) {
        if (field_) field_->refresh_block(block, rng_);
        last_block_ = field_ ? block : 0;
        const double ll = target_.loglik(prop, field());
        const double log_ratio = ll + lp - loglik_ - log_prior_;
        accepted = std::isfinite(ll) && log_u < log_ratio;
        if (accepted) {
            theta_ = prop;
            loglik_ = ll;
            log_prior_ = lp;
            if (field_) field_->commit();
        } else if (field_) {
            field_->restore();
        }
    } else {
        last_block_ = field_ ? field_->block_count() : 0;
    }

    ++iter_;
    if (iter_ <= cfg_.burnin) {
        adapter_.update(accepted);
        history_.push_back(theta_);
        if (iter_ % cfg_.cov_refresh == 0 && iter_ < cfg_.burnin) refresh_covariance();
        if (iter_ == cfg_.burnin) history_ = {};
    }
    return accepted;
}

void BpmSampler::refresh_covariance() {
    const std::size_t end = history_.size();
    const std::size_t begin = end / 2;
    const std::size_t n = end - begin;
    const auto d = static_cast<Eigen::Index>(target_.dim);
    if (n < 2 * target_.dim + 2) return;

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (std::size_t i = begin; i < end; ++i) mean += history_[i];
    mean /= static_cast<double>(n);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = begin; i < end; ++i) {
        const Eigen::VectorXd c = history_[i] - mean;
        cov.noalias() += c * c.transpose();
    }
    cov /= static_cast<double>(n - 1);
    // A window with too few moves gives a near-singular estimate; keep the old one.
    if (cov.diagonal().minCoeff() <= 0.0) return;
    cov.diagonal().array() += 1e-8;
    try {
        proposal_ = RandomWalkProposal(cov);
        adapter_.restart();
    } catch (const ConfigError&) {
    }
}

ChainDraws run_bpm(const PosteriorTarget& target, const SamplerConfig& cfg) {
    cfg.validate();
    BpmSampler sampler(target, cfg);
    const auto names = target.names.empty() ? std::vector<std::string>(target.dim, "theta") : target.names;
    const auto d = static_cast<Eigen::Index>(target.dim);
    const auto p = static_cast<Eigen::Index>(names.size());
    const auto n = static_cast<Eigen::Index>(cfg.iters);

    ChainDraws chain;
    chain.names = names;
    chain.unconstrained.resize(n, d);
    chain.constrained.resize(n, p);
    chain.logliks.reserve(cfg.iters);
    chain.accepted.reserve(cfg.iters);
    chain.scale_trace.reserve(cfg.iters);

    auto constrained = [&](const Eigen::VectorXd& u) {
        if (target.constrained) return target.constrained(u);
        return std::vector<double>(u.data(), u.data() + u.size());
    };

    for (std::size_t i = 0; i < cfg.iters; ++i) {
        bool accepted = false;
        try {
            accepted = sampler.step();
        } catch (const std::exception& e) {
            chain.failure = e.what();
            break;
        }
        const auto row = static_cast<Eigen::Index>(i);
        chain.unconstrained.row(row) = sampler.theta().transpose();
        const auto c = constrained(sampler.theta());
        for (Eigen::Index j = 0; j < p; ++j) chain.constrained(row, j) = c[static_cast<std::size_t>(j)];
        chain.logliks.push_back(sampler.loglik());
        chain.accepted.push_back(accepted ? 1 : 0);
        chain.scale_trace.push_back(sampler.scale());
        chain.completed = i + 1;
    }
    if (chain.completed < cfg.iters) {
        const auto m = static_cast<Eigen::Index>(chain.completed);
        chain.unconstrained.conservativeResize(m, d);
        chain.constrained.conservativeResize(m, p);
    }
    return chain;
}

ChainDraws run_bpm(const models::PriorSet& prior, std::span<const double> y, const SamplerConfig& cfg,
                   const filter::FilterOptions& filter_opts) {
    return run_bpm(model_target(prior, y, filter_opts), cfg);
}

std::vector<std::size_t> retained_indices(std::size_t completed, std::size_t burnin, std::size_t thin) {
    std::vector<std::size_t> idx;
    if (thin == 0) throw ConfigError("thin must be at least 1");
    for (std::size_t i = burnin; i < completed; i += thin) idx.push_back(i);
    return idx;
}

ChainSummary summarize(const ChainDraws& chain, std::size_t burnin, std::size_t thin) {
    ChainSummary s;
    s.names = chain.names;
    const auto idx = retained_indices(chain.completed, burnin, thin);
    s.retained = idx.size();
    const std::size_t p = chain.names.size();
    s.mean.assign(p, std::numeric_limits<double>::quiet_NaN());
    s.sd = s.mean;
    s.iact = s.mean;

    std::size_t acc = 0;
    for (std::size_t i = burnin; i < chain.completed; ++i) acc += chain.accepted[i];
    s.acceptance_rate = chain.completed > burnin
                            ? static_cast<double>(acc) / static_cast<double>(chain.completed - burnin)
                            : std::numeric_limits<double>::quiet_NaN();
    if (idx.empty()) return s;

    std::vector<double> col(idx.size());
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t r = 0; r < idx.size(); ++r)
            col[r] = chain.constrained(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(j));
        double m = 0.0;
        for (double v : col) m += v;
        m /= static_cast<double>(col.size());
        double v2 = 0.0;
        for (double v : col) v2 += (v - m) * (v - m);
        s.mean[j] = m;
        s.sd[j] = col.size() > 1 ? std::sqrt(v2 / static_cast<double>(col.size() - 1)) : 0.0;
        try {
            s.iact[j] = iact(col);
        } catch (const std::exception&) {
        }
    }
    return s;
}

}  // namespace lstmsv::mcmc
