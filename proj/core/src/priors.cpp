#include "lstmsv/priors.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"

#include <cmath>
#include <numbers>

namespace lstmsv::models {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

PriorSet PriorSet::defaults(Model m) {
    PriorSet p;
    p.model = m;
    const InvGammaPrior ig{2.5, 0.25};
    const ShiftedBetaPrior persistence{20.0, 1.5};
    switch (m) {
        case Model::Sv: p.terms = {NormalPrior{0.0, 25.0}, persistence, ig}; break;
        case Model::Nsv:
            p.terms = {NormalPrior{0.0, 25.0}, persistence, ig, NormalPrior{0.0, 0.1}};
            break;
        case Model::LstmSv:
            p.terms = {NormalPrior{0.0, 0.01}, ig, persistence, ig};
            for (int i = 0; i < 12; ++i) p.terms.emplace_back(NormalPrior{0.0, 0.1});
            break;
    }
    return p;
}

void PriorSet::validate() const {
    if (terms.size() != parameter_count(model))
        throw ConfigError("prior set has the wrong number of terms for the model");
    for (const auto& t : terms) {
        const bool ok = std::visit(
            Overloaded{[](const NormalPrior& n) { return n.variance > 0.0 && std::isfinite(n.mean); },
                       [](const InvGammaPrior& g) { return g.shape > 0.0 && g.scale > 0.0; },
                       [](const ShiftedBetaPrior& b) { return b.a > 0.0 && b.b > 0.0; }},
            t);
        if (!ok) throw ConfigError("prior hyperparameters must be strictly positive");
    }
}

double log_density(const PriorTerm& term, double x) {
    return std::visit(
        Overloaded{[x](const NormalPrior& n) { return normal_logpdf(x, n.mean, n.variance); },
                   [x](const InvGammaPrior& g) {
                       if (!(x > 0.0)) return kNegInf;
                       return g.shape * std::log(g.scale) - std::lgamma(g.shape) -
                              (g.shape + 1.0) * std::log(x) - g.scale / x;
                   },
                   [x](const ShiftedBetaPrior& b) {
                       if (!(x > -1.0 && x < 1.0)) return kNegInf;
                       const double s = 0.5 * (x + 1.0);
                       const double log_beta =
                           std::lgamma(b.a) + std::lgamma(b.b) - std::lgamma(b.a + b.b);
                       return (b.a - 1.0) * std::log(s) + (b.b - 1.0) * std::log1p(-s) - log_beta -
                              std::numbers::ln2;
                   }},
        term);
}

double log_prior(const PriorSet& prior, const ModelParams& p) {
    if (model_of(p) != prior.model) throw ConfigError("prior set does not match the model");
    const auto v = to_vector(p);
    double lp = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return kNegInf;
        lp += log_density(prior.terms[i], v[i]);
        if (lp == kNegInf) return kNegInf;
    }
    return lp;
}

double log_prior(const ModelParams& p) { return log_prior(PriorSet::defaults(model_of(p)), p); }

double log_prior_unconstrained(const PriorSet& prior, const Eigen::VectorXd& u) {
    if (!u.allFinite()) return kNegInf;
    const double lp = log_prior(prior, from_unconstrained(prior.model, u));
    if (lp == kNegInf) return kNegInf;
    return lp + log_jacobian(prior.model, u);
}

ModelParams sample_prior(const PriorSet& prior, Rng& rng) {
    std::normal_distribution<double> normal;
    std::vector<double> v;
    v.reserve(prior.terms.size());
    for (const auto& t : prior.terms) {
        v.push_back(std::visit(
            Overloaded{[&](const NormalPrior& n) { return n.mean + std::sqrt(n.variance) * normal(rng); },
                       [&](const InvGammaPrior& g) {
                           std::gamma_distribution<double> gamma(g.shape, 1.0 / g.scale);
                           return 1.0 / gamma(rng);
                       },
                       [&](const ShiftedBetaPrior& b) {
                           std::gamma_distribution<double> ga(b.a, 1.0), gb(b.b, 1.0);
                           const double x = ga(rng);
                           const double y = gb(rng);
                           return 2.0 * x / (x + y) - 1.0;
                       }},
            t));
    }
    return from_vector(prior.model, v);
}

}  // namespace lstmsv::models
