#pragma once

#include "lstmsv/data.hpp"
#include "lstmsv/models.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lstmsv::evaluate {

/// Zero-mean Gaussian scale mixture Σ w_k N(0, v_k).
class ScaleMixture {
public:
    /// Throws DomainError unless weights are nonnegative with a positive sum
    /// and variances positive and finite. Weights are normalised internally.
    ScaleMixture(std::vector<double> weights, std::vector<double> variances);

    [[nodiscard]] double cdf(double x) const noexcept;
    [[nodiscard]] double log_pdf(double x) const noexcept;
    /// Quantile by bisection on the CDF; the bracket shrinks until its width
    /// is below 1e-8·max(1, |x|). Throws DomainError unless p ∈ (0, 1).
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }

private:
    std::vector<double> weights_;
    std::vector<double> sds_;
    double max_sd_ = 0.0;
};

struct ForecastOptions {
    double alpha = 0.01;
    /// Central interval coverage used for violations.
    double coverage = 0.99;
    std::size_t particles = 200;
    /// Propagation draws per particle for the predictive mixture.
    std::size_t predictive_draws = 10;
    std::uint64_t seed = 1;
    double lstm_z0 = 0.0;
};

struct ForecastReport {
    double pps = 0.0;
    std::size_t violations = 0;
    double qs = 0.0;
    double hit_pct = 0.0;
    double alpha = 0.0;
    std::size_t test_len = 0;
    // Per test step.
    std::vector<double> y;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> var_forecast;
    std::vector<double> log_predictive;
};

/// Out-of-sample scores of a point estimate.
///
/// One filter pass over the whole series (random field from the ("forecast",
/// seed) substream). For each test step t:
///   - log p(y_t | y_{1:t−1}) is the filter's incremental term; PPS is minus
///     its mean over the test slice;
///   - the predictive law is the scale mixture obtained by propagating every
///     weighted particle at t−1 with `predictive_draws` fresh draws, each
///     component weighted W_k / S;
///   - the interval is the central `coverage` interval of that law and the
///     VaR forecast its α-quantile;
///   - a violation is y_t outside the interval, a hit is y_t below the VaR and
///     QS is the mean of (α − 1{y_t ≤ q_t})(y_t − q_t).
/// Throws SizeError when the test slice or the training slice is empty and
/// EstimationError when the filter degenerates.
[[nodiscard]] ForecastReport predictive_scores(const models::ModelParams& params, const data::ReturnSeries& y,
                                               const ForecastOptions& opt = {});

struct LjungBoxResult {
    double statistic = 0.0;
    double pvalue = 1.0;
    std::size_t lags = 0;
};

/// Q = n(n+2) Σ_{k≤lags} ρ̂_k² / (n − k), p-value from χ²(lags).
/// Throws SizeError unless 1 ≤ lags < n and DegenerateInputError for a
/// constant series.
[[nodiscard]] LjungBoxResult ljung_box(std::span<const double> x, std::size_t lags);

struct ResidualOptions {
    std::size_t particles = 200;
    std::uint64_t seed = 1;
    std::size_t lags = 10;
    double lstm_z0 = 0.0;
};

struct ResidualDiagnostics {
    std::vector<double> residuals;
    std::vector<double> filtered_mean;
    double skewness = 0.0;
    double kurtosis = 0.0;
    double lb_stat = 0.0;
    double lb_pvalue = 1.0;
    std::size_t lb_lags = 0;
};

/// Standardised residuals y_t / √Var(y_t | ẑ_t) with ẑ_t the filtered mean of
/// z_t (random field from the ("diagnose", seed) substream), their moments
/// and the Ljung–Box test.
[[nodiscard]] ResidualDiagnostics residual_diagnostics(const models::ModelParams& params,
                                                       std::span<const double> y,
                                                       const ResidualOptions& opt = {});

/// Sorted residuals paired with Φ⁻¹((i − 0.5)/n): (theoretical, sample).
/// Throws SizeError for fewer than 2 points.
[[nodiscard]] std::vector<std::pair<double, double>> qq_points(std::span<const double> residuals);

}  // namespace lstmsv::evaluate
