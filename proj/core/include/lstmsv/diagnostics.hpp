#pragma once

#include <span>

namespace lstmsv::mcmc {

/// Integrated autocorrelation time 1 + 2 Σ ρ_k, truncated by Geyer's initial
/// positive sequence: sums ρ_{2m} + ρ_{2m+1} are accumulated until the first
/// non-positive pair. Throws SizeError when n < 100 and DegenerateInputError
/// for a constant series.
[[nodiscard]] double iact(std::span<const double> series);

/// Sample autocorrelation at `lag` with the 1/n autocovariance convention.
[[nodiscard]] double autocorrelation(std::span<const double> series, std::size_t lag);

}  // namespace lstmsv::mcmc
