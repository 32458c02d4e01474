#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lstmsv::data {

/// Adjusted closing prices, optionally labelled.
struct PriceSeries {
    std::vector<double> prices;
    std::vector<std::string> timestamps;  // empty or same length as prices
};

/// Demeaned percentage log-returns with a train/test split.
///
/// The first `train_len` values are the estimation sample; the remaining
/// `test_len` values are held out for forecasting.
struct ReturnSeries {
    std::vector<double> values;
    std::size_t train_len = 0;
    std::size_t test_len = 0;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] std::span<const double> train() const noexcept {
        return std::span<const double>(values).first(train_len);
    }
    [[nodiscard]] std::span<const double> test() const noexcept {
        return std::span<const double>(values).subspan(train_len, test_len);
    }
};

struct DescriptiveStats {
    double min = 0.0;
    double max = 0.0;
    double std = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;  // non-excess: 3 for a normal
};

struct LoTestResult {
    std::size_t lag = 0;
    double statistic = 0.0;
    bool reject_5pct = false;
};

/// Bounds of the 5% acceptance region of Lo's modified R/S statistic.
inline constexpr double kLoLower5 = 0.809;
inline constexpr double kLoUpper5 = 1.862;

/// y_t = 100·(log(P_{t+1}/P_t) − mean log ratio), t = 1..n−1.
///
/// The returned series has train_len = length and test_len = 0; use
/// `split` to carve out a hold-out segment.
/// Throws DomainError on a non-positive price and SizeError when fewer than
/// three prices are given.
[[nodiscard]] ReturnSeries demeaned_returns(const PriceSeries& p);

/// Re-split a series so that the first `train_len` values form the training set.
[[nodiscard]] ReturnSeries split(ReturnSeries series, std::size_t train_len);

/// Wrap raw returns (already demeaned, e.g. simulated) into a split series.
[[nodiscard]] ReturnSeries make_series(std::vector<double> values, std::size_t train_len);

/// Sample min/max, std (n−1 denominator), skewness and kurtosis (n denominators).
/// Throws SizeError for n < 4 and DegenerateInputError for constant input.
[[nodiscard]] DescriptiveStats descriptive_stats(std::span<const double> y);

/// Lo's modified rescaled-range statistic V_n(q) = R_n / (√n · σ̂_n(q)).
///
/// σ̂²_n(q) = γ̂₀ + 2 Σ_{j=1..q} (1 − j/(q+1)) γ̂_j with 1/n autocovariances.
/// Throws SizeError when q ≥ n and DegenerateInputError when σ̂²_n(q) ≤ 0.
[[nodiscard]] LoTestResult lo_modified_rs(std::span<const double> x, std::size_t q);

/// log(y_t² + eps), the input Lo's test is applied to for return series.
[[nodiscard]] std::vector<double> log_squared(std::span<const double> y, double eps = 1e-12);

/// Sample mean.
[[nodiscard]] double mean(std::span<const double> x);

/// Sample variance with n−1 denominator.
[[nodiscard]] double variance(std::span<const double> x);

}  // namespace lstmsv::data
