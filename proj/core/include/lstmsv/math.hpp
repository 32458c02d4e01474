#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace lstmsv {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(2π)/2
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

[[nodiscard]] inline double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

/// Standard normal CDF.
[[nodiscard]] inline double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

[[nodiscard]] inline double normal_logpdf(double x, double mean, double variance) noexcept {
    const double d = x - mean;
    return -kLogSqrt2Pi - 0.5 * std::log(variance) - 0.5 * d * d / variance;
}

/// Standard normal quantile.
[[nodiscard]] double normal_quantile(double p);

/// log(Σ exp(v)); -inf for an empty span or when every entry is -inf.
[[nodiscard]] double log_sum_exp(std::span<const double> v) noexcept;

}  // namespace lstmsv
