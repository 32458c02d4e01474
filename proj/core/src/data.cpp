#include "lstmsv/data.hpp"
#include "lstmsv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lstmsv::data {

ReturnSeries demeaned_returns(const PriceSeries& p) {
    const auto& prices = p.prices;
    if (prices.size() < 3) throw SizeError("demeaned_returns: need at least 3 prices");
    for (double v : prices) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("demeaned_returns: prices must be finite and strictly positive");
    }
    std::vector<double> r(prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.size(); ++t) r[t] = std::log(prices[t + 1] / prices[t]);
    const double m = mean(r);
    for (double& v : r) v = 100.0 * (v - m);
    return make_series(std::move(r), prices.size() - 1);
}

ReturnSeries split(ReturnSeries series, std::size_t train_len) {
    if (train_len > series.values.size())
        throw SizeError("split: training length exceeds series length");
    series.train_len = train_len;
    series.test_len = series.values.size() - train_len;
    return series;
}

ReturnSeries make_series(std::vector<double> values, std::size_t train_len) {
    ReturnSeries s;
    s.values = std::move(values);
    return split(std::move(s), train_len);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw SizeError("mean: empty input");
    // Kahan summation.
    double sum = 0.0, c = 0.0;
    for (double v : x) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw SizeError("variance: need at least 2 values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

DescriptiveStats descriptive_stats(std::span<const double> y) {
    if (y.size() < 4) throw SizeError("descriptive_stats: need at least 4 values");
    const auto n = static_cast<double>(y.size());
    const double m = mean(y);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : y) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if (!(m2 > 0.0)) throw DegenerateInputError("descriptive_stats: constant series");
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    DescriptiveStats s;
    s.min = *lo;
    s.max = *hi;
    s.std = std::sqrt(m2 * n / (n - 1.0));
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    return s;
}

LoTestResult lo_modified_rs(std::span<const double> x, std::size_t q) {
    const std::size_t n = x.size();
    if (q >= n) throw SizeError("lo_modified_rs: lag must be smaller than the series length");
    const double m = mean(x);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - m;

    double partial = 0.0, hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        partial += d[i];
        if (i == 0) {
            hi = lo = partial;
        } else {
            hi = std::max(hi, partial);
            lo = std::min(lo, partial);
        }
    }
    const double range = hi - lo;

    auto autocov = [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t i = j; i < n; ++i) s += d[i] * d[i - j];
        return s / static_cast<double>(n);
    };
    double lrv = autocov(0);
    for (std::size_t j = 1; j <= q; ++j) {
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(q + 1);
        lrv += 2.0 * w * autocov(j);
    }
    if (!(lrv > 0.0)) throw DegenerateInputError("lo_modified_rs: zero long-run variance");

    LoTestResult r;
    r.lag = q;
    r.statistic = range / (std::sqrt(static_cast<double>(n)) * std::sqrt(lrv));
    r.reject_5pct = r.statistic < kLoLower5 || r.statistic > kLoUpper5;
    return r;
}

std::vector<double> log_squared(std::span<const double> y, double eps) {
    std::vector<double> out(y.size());
    std::transform(y.begin(), y.end(), out.begin(), [eps](double v) { return std::log(v * v + eps); });
    return out;
}

}  // namespace lstmsv::data
