#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lstmsv::filter {

/// Sorted multinomial resampling.
///
/// Particles are ordered by ascending z (ties broken by index) and ancestor k
/// is the first particle in that order whose cumulative weight reaches
/// uniforms[k], reported as an index into the original arrays. Nearby
/// uniforms therefore select nearby particle values, which keeps the
/// likelihood estimate smooth in the parameters for a fixed random field.
///
/// Throws DomainError when the weights are negative, non-finite or do not sum
/// to 1 within 1e-9, SizeError on mismatched lengths.
[[nodiscard]] std::vector<std::size_t> sorted_multinomial_resample(std::span<const double> z,
                                                                   std::span<const double> weights,
                                                                   std::span<const double> uniforms);

namespace detail {

/// Merge form of the inverse-CDF step used inside the filter.
///
/// `order` lists particles in the order in which weights are accumulated,
/// `weights` are unnormalised with sum `total`, and `uniform_order` sorts
/// `uniforms` ascending. Writes ancestors[k] for each uniform k in O(N).
/// Only particles with positive weight are ever selected.
void inverse_cdf_merge(std::span<const std::uint32_t> order, std::span<const double> weights,
                       double total, std::span<const double> uniforms,
                       std::span<const std::uint32_t> uniform_order,
                       std::span<std::uint32_t> ancestors) noexcept;

}  // namespace detail

}  // namespace lstmsv::filter
