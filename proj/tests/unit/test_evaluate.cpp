#include "lstmsv/errors.hpp"
#include "lstmsv/evaluate.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/rng.hpp"
#include "lstmsv/simulate.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace lstmsv;
using namespace lstmsv::evaluate;

TEST(ScaleMixtureTest, SingleGaussianQuantiles) {
    const ScaleMixture mix({1.0}, {4.0});
    EXPECT_NEAR(mix.quantile(0.005), -2.0 * 2.5758293035489, 1e-6);
    EXPECT_NEAR(mix.quantile(0.995), 2.0 * 2.5758293035489, 1e-6);
    EXPECT_NEAR(mix.quantile(0.01), -2.0 * 2.3263478740408, 1e-6);
    EXPECT_NEAR(mix.cdf(0.0), 0.5, 1e-15);
}

TEST(ScaleMixtureTest, QuantileInvertsCdf) {
    const ScaleMixture mix({0.2, 0.5, 0.3}, {0.5, 3.0, 40.0});
    for (double p : {0.001, 0.01, 0.1, 0.5, 0.8, 0.995}) EXPECT_NEAR(mix.cdf(mix.quantile(p)), p, 1e-9);
    double prev = -1e300;
    for (double cov : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999}) {
        const double upper = mix.quantile(0.5 + cov / 2);
        EXPECT_GT(upper, prev);
        prev = upper;
    }
    EXPECT_THROW((void)mix.quantile(1.0), DomainError);
    EXPECT_THROW(ScaleMixture({1.0}, {0.0}), DomainError);
}

TEST(ScaleMixtureTest, LogPdf) {
    const ScaleMixture mix({1.0, 3.0}, {1.0, 4.0});
    const double x = 0.7;
    const double expect = 0.25 * std::exp(normal_logpdf(x, 0, 1)) + 0.75 * std::exp(normal_logpdf(x, 0, 4));
    EXPECT_NEAR(mix.log_pdf(x), std::log(expect), 1e-12);
}

TEST(Forecast, ZeroReturnsNeverViolate) {
    const models::SvParams p{0.0, 0.9, 0.1};
    auto y = models::simulate(p, 300, 1).y;
    for (std::size_t t = 200; t < 300; ++t) y[t] = 0.0;
    ForecastOptions opt;
    opt.particles = 50;
    opt.predictive_draws = 4;
    const auto rep = predictive_scores(p, data::make_series(y, 200), opt);
    EXPECT_EQ(rep.violations, 0u);
    EXPECT_DOUBLE_EQ(rep.hit_pct, 0.0);
    EXPECT_EQ(rep.test_len, 100u);
    for (std::size_t i = 0; i < 100; ++i) {
        EXPECT_LT(rep.lower[i], rep.upper[i]);
        EXPECT_LT(rep.lower[i], rep.var_forecast[i]);
    }
}

TEST(Forecast, ScoresAreConsistent) {
    models::LstmSvParams p;
    p.beta0 = 0.1;
    p.beta1 = 0.2;
    p.phi = 0.9;
    p.sigma2 = 0.1;
    const auto y = models::simulate(p, 400, 2).y;
    ForecastOptions opt;
    opt.particles = 60;
    opt.predictive_draws = 5;
    const auto rep = predictive_scores(p, data::make_series(y, 250), opt);
    EXPECT_GE(rep.qs, 0.0);
    EXPECT_GE(rep.hit_pct, 0.0);
    EXPECT_LE(rep.hit_pct, 1.0);
    EXPECT_LE(rep.violations, rep.test_len);
    double s = 0.0, qs = 0.0;
    std::size_t v = 0;
    for (std::size_t i = 0; i < rep.test_len; ++i) {
        s += rep.log_predictive[i];
        v += rep.y[i] < rep.lower[i] || rep.y[i] > rep.upper[i];
        const double q = rep.var_forecast[i];
        const double term = (0.01 - (rep.y[i] <= q ? 1.0 : 0.0)) * (rep.y[i] - q);
        EXPECT_GE(term, 0.0);
        qs += term;
    }
    EXPECT_NEAR(rep.pps, -s / rep.test_len, 1e-12);
    EXPECT_NEAR(rep.qs, qs / rep.test_len, 1e-12);
    EXPECT_EQ(rep.violations, v);
    const auto again = predictive_scores(p, data::make_series(y, 250), opt);
    EXPECT_EQ(again.var_forecast, rep.var_forecast);
}

TEST(Forecast, HitRateCalibratedAtTruth) {
    const models::SvParams p{0.0, 0.95, 0.05};
    const auto y = models::simulate(p, 10500, 3).y;
    ForecastOptions opt;
    opt.particles = 100;
    opt.predictive_draws = 5;
    const auto rep = predictive_scores(p, data::make_series(y, 500), opt);
    EXPECT_NEAR(rep.hit_pct, 0.01, 0.005);
}

TEST(Forecast, TrueConditionalDensityScoresBetter) {
    const models::SvParams p{0.0, 0.95, 0.1};
    const auto path = models::simulate(p, 2000, 4);
    ForecastOptions opt;
    opt.particles = 100;
    opt.predictive_draws = 2;
    const auto rep = predictive_scores(p, data::make_series(path.y, 1000), opt);
    double oracle = 0.0;
    for (std::size_t t = 1000; t < 2000; ++t) oracle -= normal_logpdf(path.y[t], 0.0, std::exp(path.z[t]));
    EXPECT_LT(oracle / 1000.0, rep.pps);
}

TEST(Forecast, Errors) {
    const models::SvParams p{0.0, 0.9, 0.1};
    const auto y = models::simulate(p, 50, 1).y;
    EXPECT_THROW((void)predictive_scores(p, data::make_series(y, 50)), SizeError);
    EXPECT_THROW((void)predictive_scores(p, data::make_series(y, 0)), SizeError);
}

TEST(LjungBox, ZeroAutocorrelation) {
    // Nonzero entries farther apart than every tested lag.
    std::vector<double> x(12, 0.0);
    x.front() = 1.0;
    x.back() = -1.0;
    const auto r = ljung_box(x, 10);
    EXPECT_DOUBLE_EQ(r.statistic, 0.0);
    EXPECT_DOUBLE_EQ(r.pvalue, 1.0);
}

TEST(LjungBox, MatchesDirectFormula) {
    Rng rng(5);
    std::normal_distribution<double> normal;
    std::vector<double> x(300);
    double prev = 0.0;
    for (double& v : x) v = prev = 0.3 * prev + normal(rng);
    const double n = 300.0;
    double m = 0.0;
    for (double v : x) m += v / n;
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    double q = 0.0;
    for (int k = 1; k <= 10; ++k) {
        double ck = 0.0;
        for (int i = 0; i + k < 300; ++i) ck += (x[i] - m) * (x[i + k] - m);
        q += (ck / c0) * (ck / c0) / (n - k);
    }
    q *= n * (n + 2);
    const auto r = ljung_box(x, 10);
    EXPECT_NEAR(r.statistic, q, 1e-9);
    EXPECT_NEAR(r.pvalue, boost::math::cdf(boost::math::complement(boost::math::chi_squared(10), q)), 1e-12);
}

TEST(LjungBox, NullRejectionRate) {
    Rng rng(6);
    std::normal_distribution<double> normal;
    int reject = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> x(2000);
        for (double& v : x) v = normal(rng);
        reject += ljung_box(x, 10).pvalue < 0.05;
    }
    EXPECT_NEAR(reject / double(reps), 0.05, 0.025);
}

TEST(LjungBox, Errors) {
    EXPECT_THROW((void)ljung_box(std::vector<double>{1, 2, 3}, 3), SizeError);
    EXPECT_THROW((void)ljung_box(std::vector<double>{1, 2, 3}, 0), SizeError);
    EXPECT_THROW((void)ljung_box(std::vector<double>(20, 1.0), 2), DegenerateInputError);
}

TEST(QQ, DiagonalAndReflection) {
    const std::size_t n = 50;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[n - 1 - i] = normal_quantile((i + 0.5) / n);
    const auto pts = qq_points(r);
    for (const auto& [th, s] : pts) EXPECT_NEAR(th, s, 1e-12);

    std::vector<double> x{0.3, -1.2, 2.5, 0.0, 0.7};
    auto neg = x;
    for (double& v : neg) v = -v;
    const auto a = qq_points(x), b = qq_points(neg);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(a[i].first, -b[x.size() - 1 - i].first, 1e-12);
        EXPECT_NEAR(a[i].second, -b[x.size() - 1 - i].second, 1e-12);
    }
    EXPECT_THROW((void)qq_points(std::vector<double>{1.0}), SizeError);
}

TEST(QQ, GaussianSampleBand) {
    Rng rng(7);
    std::normal_distribution<double> normal;
    std::vector<double> x(10000);
    for (double& v : x) v = normal(rng);
    const auto pts = qq_points(x);
    double worst = 0.0;
    for (std::size_t i = 100; i < 9900; ++i) worst = std::max(worst, std::abs(pts[i].first - pts[i].second));
    EXPECT_LT(worst, 0.1);
}

TEST(Residuals, StandardiseByFilteredMean) {
    const models::NsvParams p{0.2, 0.9, 0.1, 0.05};
    const auto y = models::simulate(p, 300, 8).y;
    ResidualOptions opt;
    opt.particles = 80;
    const auto d = residual_diagnostics(p, y, opt);
    ASSERT_EQ(d.residuals.size(), 300u);
    for (std::size_t t = 0; t < 300; ++t)
        EXPECT_NEAR(d.residuals[t], y[t] / std::sqrt(models::measurement_variance(p, d.filtered_mean[t])), 1e-12);
    EXPECT_GE(d.lb_pvalue, 0.0);
    EXPECT_LE(d.lb_pvalue, 1.0);
    EXPECT_EQ(d.lb_lags, 10u);
    EXPECT_GT(d.kurtosis, 1.0);
}
