#include "lstmsv/resample.hpp"
#include "lstmsv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lstmsv::filter {

std::vector<std::size_t> sorted_multinomial_resample(std::span<const double> z,
                                                     std::span<const double> weights,
                                                     std::span<const double> uniforms) {
    const std::size_t n = z.size();
    if (n == 0 || weights.size() != n || uniforms.size() != n)
        throw SizeError("resample: z, weights and uniforms must have the same nonzero length");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("resample: invalid weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("resample: weights do not sum to 1");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });

    std::vector<double> cumulative(n);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += weights[perm[j]];
        cumulative[j] = acc;
        if (weights[perm[j]] > 0.0) last_positive = j;
    }

    std::vector<std::size_t> ancestors(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = uniforms[k];
        if (!(u > 0.0 && u < 1.0)) throw DomainError("resample: uniforms must lie in (0, 1)");
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        const auto j = std::min(static_cast<std::size_t>(it - cumulative.begin()), last_positive);
        ancestors[k] = perm[j];
    }
    return ancestors;
}

namespace detail {

void inverse_cdf_merge(std::span<const std::uint32_t> order, std::span<const double> weights,
                       double total, std::span<const double> uniforms,
                       std::span<const std::uint32_t> uniform_order,
                       std::span<std::uint32_t> ancestors) noexcept {
    const std::size_t n = order.size();
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (weights[order[j]] > 0.0) last_positive = j;

    // Compare u·total against the unnormalised running sum.
    std::size_t j = 0;
    double acc = weights[order[0]];
    for (std::size_t m = 0; m < uniform_order.size(); ++m) {
        const std::uint32_t k = uniform_order[m];
        const double target = uniforms[k] * total;
        while (acc < target && j < last_positive) acc += weights[order[++j]];
        ancestors[k] = order[std::min(j, last_positive)];
    }
}

}  // namespace detail

}  // namespace lstmsv::filter
