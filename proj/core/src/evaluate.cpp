#include "lstmsv/evaluate.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/particle_filter.hpp"
#include "lstmsv/random_field.hpp"
#include "lstmsv/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace lstmsv::evaluate {

ScaleMixture::ScaleMixture(std::vector<double> weights, std::vector<double> variances)
    : weights_(std::move(weights)) {
    if (weights_.empty() || weights_.size() != variances.size())
        throw DomainError("scale mixture needs matching, nonempty weights and variances");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("scale mixture weight is invalid");
        total += w;
    }
    if (!(total > 0.0)) throw DomainError("scale mixture weights sum to zero");
    for (double& w : weights_) w /= total;
    sds_.reserve(variances.size());
    for (double v : variances) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("scale mixture variance is invalid");
        sds_.push_back(std::sqrt(v));
        max_sd_ = std::max(max_sd_, sds_.back());
    }
}

double ScaleMixture::cdf(double x) const noexcept {
    double p = 0.0;
    for (std::size_t k = 0; k < weights_.size(); ++k) p += weights_[k] * normal_cdf(x / sds_[k]);
    return p;
}

double ScaleMixture::log_pdf(double x) const noexcept {
    std::vector<double> terms(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k)
        terms[k] = std::log(weights_[k]) + normal_logpdf(x, 0.0, sds_[k] * sds_[k]);
    return log_sum_exp(terms);
}

double ScaleMixture::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    // Every component quantile lies within max_sd·|Φ⁻¹(p)|, and so does the mixture's.
    const double reach = max_sd_ * (std::abs(normal_quantile(p)) + 1.0);
    double lo = -reach;
    double hi = reach;
    while (hi - lo > 1e-8 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ForecastReport predictive_scores(const models::ModelParams& params, const data::ReturnSeries& y,
                                 const ForecastOptions& opt) {
    models::validate(params);
    if (y.test_len == 0) throw SizeError("forecast needs a nonempty test segment");
    if (y.train_len == 0) throw SizeError("forecast needs a nonempty training segment");
    if (y.train_len + y.test_len != y.size()) throw SizeError("train and test lengths do not cover the series");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (!(opt.coverage > 0.0 && opt.coverage < 1.0)) throw DomainError("coverage must lie in (0, 1)");
    if (opt.particles < 1 || opt.predictive_draws < 1) throw ConfigError("forecast needs particles and draws");

    const std::size_t T = y.size();
    const std::size_t first = y.train_len;
    ForecastReport rep;
    rep.alpha = opt.alpha;
    rep.test_len = y.test_len;
    rep.lower.resize(y.test_len);
    rep.upper.resize(y.test_len);
    rep.var_forecast.resize(y.test_len);
    const double tail = 0.5 * (1.0 - opt.coverage);

    Rng field_rng = make_rng(opt.seed, "forecast");
    const filter::RandomField field(T, opt.particles, 1, field_rng);
    Rng draw_rng = make_rng(opt.seed, "forecast-predictive");
    std::normal_distribution<double> normal;
    std::vector<double> weights;
    std::vector<double> variances;

    filter::FilterOptions fo;
    fo.lstm_z0 = opt.lstm_z0;
    fo.on_weighted = [&](const filter::WeightedParticles& cloud) {
        const std::size_t t_next = cloud.t + 1;
        if (t_next < first || t_next >= T) return;
        const std::size_t S = opt.predictive_draws;
        weights.clear();
        variances.clear();
        const bool recurrent = !cloud.h.empty();
        for (std::size_t k = 0; k < cloud.z.size(); ++k) {
            if (cloud.weights[k] <= 0.0) continue;
            const models::LstmState state =
                recurrent ? models::LstmState{cloud.h[k], cloud.c[k], cloud.eta[k]} : models::LstmState{};
            for (std::size_t s = 0; s < S; ++s) {
                const auto next = models::transition(params, cloud.z[k], state, normal(draw_rng));
                const double v = models::measurement_variance(params, next.z);
                if (!(v > 0.0) || !std::isfinite(v)) continue;
                weights.push_back(cloud.weights[k] / static_cast<double>(S));
                variances.push_back(v);
            }
        }
        if (weights.empty()) throw EstimationError("predictive law has no valid component");
        const ScaleMixture mix(weights, variances);
        const std::size_t i = t_next - first;
        rep.lower[i] = mix.quantile(tail);
        rep.upper[i] = -rep.lower[i];
        rep.var_forecast[i] = opt.alpha == tail ? rep.lower[i] : mix.quantile(opt.alpha);
    };

    const auto out = filter::particle_filter(params, y.values, field, fo);
    if (out.degenerate) throw EstimationError("particle filter degenerated during forecasting");

    rep.y.assign(y.values.begin() + static_cast<std::ptrdiff_t>(first), y.values.end());
    rep.log_predictive.assign(out.incremental.begin() + static_cast<std::ptrdiff_t>(first), out.incremental.end());
    double sum_lp = 0.0, sum_qs = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.test_len; ++i) {
        const double yt = rep.y[i];
        const double q = rep.var_forecast[i];
        sum_lp += rep.log_predictive[i];
        if (yt < rep.lower[i] || yt > rep.upper[i]) ++rep.violations;
        if (yt < q) ++hits;
        sum_qs += (opt.alpha - (yt <= q ? 1.0 : 0.0)) * (yt - q);
    }
    const auto n = static_cast<double>(y.test_len);
    rep.pps = -sum_lp / n;
    rep.qs = sum_qs / n;
    rep.hit_pct = static_cast<double>(hits) / n;
    return rep;
}

LjungBoxResult ljung_box(std::span<const double> x, std::size_t lags) {
    const std::size_t n = x.size();
    if (lags < 1 || lags >= n) throw SizeError("Ljung-Box needs 1 <= lags < n");
    const double m = data::mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    if (!(c0 > 0.0)) throw DegenerateInputError("Ljung-Box on a constant series");
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        double ck = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) ck += (x[i] - m) * (x[i + k] - m);
        const double rho = ck / c0;
        q += rho * rho / static_cast<double>(n - k);
    }
    const auto nd = static_cast<double>(n);
    q *= nd * (nd + 2.0);
    LjungBoxResult r;
    r.statistic = q;
    r.lags = lags;
    r.pvalue = std::clamp(boost::math::gamma_q(0.5 * static_cast<double>(lags), 0.5 * q), 0.0, 1.0);
    return r;
}

ResidualDiagnostics residual_diagnostics(const models::ModelParams& params, std::span<const double> y,
                                         const ResidualOptions& opt) {
    models::validate(params);
    if (opt.lags < 1) throw SizeError("Ljung-Box needs at least one lag");
    Rng rng = make_rng(opt.seed, "diagnose");
    const filter::RandomField field(y.size(), opt.particles, 1, rng);
    filter::FilterOptions fo;
    fo.lstm_z0 = opt.lstm_z0;
    const auto out = filter::filtered_volatility(params, y, field, fo);
    if (out.degenerate) throw EstimationError("particle filter degenerated during diagnostics");

    ResidualDiagnostics d;
    d.filtered_mean = out.filtered_mean;
    d.residuals.resize(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double v = models::measurement_variance(params, out.filtered_mean[t]);
        if (!(v > 0.0) || !std::isfinite(v))
            throw EstimationError("variance at the filtered mean is undefined");
        d.residuals[t] = y[t] / std::sqrt(v);
    }
    const auto stats = data::descriptive_stats(d.residuals);
    d.skewness = stats.skewness;
    d.kurtosis = stats.kurtosis;
    const auto lb = ljung_box(d.residuals, opt.lags);
    d.lb_stat = lb.statistic;
    d.lb_pvalue = lb.pvalue;
    d.lb_lags = lb.lags;
    return d;
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> residuals) {
    const std::size_t n = residuals.size();
    if (n < 2) throw SizeError("QQ points need at least two residuals");
    std::vector<double> sorted(residuals.begin(), residuals.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = {normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n)), sorted[i]};
    return pts;
}

}  // namespace lstmsv::evaluate
