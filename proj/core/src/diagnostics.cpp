#include "lstmsv/diagnostics.hpp"
#include "lstmsv/errors.hpp"

#include <cmath>
#include <vector>

namespace lstmsv::mcmc {

namespace {

struct Centered {
    std::vector<double> x;
    double c0 = 0.0;
};

Centered center(std::span<const double> s) {
    Centered out;
    double m = 0.0;
    for (double v : s) m += v;
    m /= static_cast<double>(s.size());
    out.x.reserve(s.size());
    for (double v : s) {
        out.x.push_back(v - m);
        out.c0 += (v - m) * (v - m);
    }
    return out;
}

double lagged_product(const std::vector<double>& x, std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < x.size(); ++i) s += x[i] * x[i + lag];
    return s;
}

}  // namespace

double autocorrelation(std::span<const double> series, std::size_t lag) {
    if (lag >= series.size()) throw SizeError("autocorrelation: lag must be below the length");
    const auto c = center(series);
    if (!(c.c0 > 0.0)) throw DegenerateInputError("autocorrelation of a constant series");
    return lagged_product(c.x, lag) / c.c0;
}

double iact(std::span<const double> series) {
    if (series.size() < 100) throw SizeError("iact needs at least 100 values");
    const auto c = center(series);
    if (!(c.c0 > 0.0) || !std::isfinite(c.c0))
        throw DegenerateInputError("iact of a constant or non-finite series");
    const std::size_t n = c.x.size();
    double tau = -1.0;
    for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
        const double pair = (lagged_product(c.x, 2 * m) + lagged_product(c.x, 2 * m + 1)) / c.c0;
        if (!(pair > 0.0)) break;
        tau += 2.0 * pair;
    }
    return tau;
}

}  // namespace lstmsv::mcmc
