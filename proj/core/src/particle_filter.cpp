#include "lstmsv/particle_filter.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/lstm.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/resample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace lstmsv::filter {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_gauss_exp_var(double z, double half_y2) noexcept {
    return -kLogSqrt2Pi - 0.5 * z - half_y2 * std::exp(-z);
}

struct SvKernel {
    static constexpr bool kRecurrent = false;
    double mu, phi, sigma, sd0;
    explicit SvKernel(const models::SvParams& p)
        : mu(p.mu), phi(p.phi), sigma(std::sqrt(p.sigma2)),
          sd0(std::sqrt(p.sigma2 / (1.0 - p.phi * p.phi))) {}
    double init(double eps) const noexcept { return mu + sd0 * eps; }
    double step(double z, double eps) const noexcept { return mu + phi * (z - mu) + sigma * eps; }
    double logmeas(double z, double half_y2) const noexcept { return log_gauss_exp_var(z, half_y2); }
};

struct NsvKernel : SvKernel {
    double delta;
    explicit NsvKernel(const models::NsvParams& p)
        : SvKernel(models::SvParams{p.mu, p.phi, p.sigma2}), delta(p.delta) {}
    double logmeas(double z, double half_y2) const noexcept {
        if (std::abs(delta) < models::kBoxCoxLimit) return log_gauss_exp_var(z, half_y2);
        const double base = 1.0 + delta * z;
        if (!(base > 0.0)) return kNegInf;
        const double log_var = std::log(base) / delta;
        return -kLogSqrt2Pi - 0.5 * log_var - half_y2 * std::exp(-log_var);
    }
};

struct LstmKernel {
    static constexpr bool kRecurrent = true;
    double beta0, beta1, phi, sigma, z0;
    models::LstmWeights w;
    LstmKernel(const models::LstmSvParams& p, double z0_)
        : beta0(p.beta0), beta1(p.beta1), phi(p.phi), sigma(std::sqrt(p.sigma2)), z0(z0_), w(p.lstm) {}
    double logmeas(double z, double half_y2) const noexcept { return log_gauss_exp_var(z, half_y2); }
};

struct Workspace {
    std::vector<double> z, z_next, logw, w;
    std::vector<double> h, c, eta, h_next, c_next, eta_next;
    std::vector<std::uint32_t> order, ancestors;
    std::vector<std::pair<double, std::uint32_t>> keyed;
};

template <class Kernel>
FilterOutput run(const Kernel& kernel, std::span<const double> y, const RandomField& field,
                 const FilterOptions& opt) {
    const std::size_t T = field.steps();
    const std::size_t N = field.particles();
    if (y.size() != T) throw SizeError("particle filter: data length differs from random field");

    FilterOutput out;
    out.incremental.assign(T, kNaN);
    if (opt.record_stats) {
        out.filtered_mean.assign(T, kNaN);
        out.filtered_sd.assign(T, kNaN);
        out.ess.assign(T, kNaN);
    }

    Workspace ws;
    ws.z.resize(N);
    ws.z_next.resize(N);
    ws.logw.resize(N);
    ws.w.resize(N);
    ws.order.resize(N);
    ws.ancestors.resize(N);
    ws.keyed.resize(N);
    if constexpr (Kernel::kRecurrent) {
        ws.h.assign(N, 0.0);
        ws.c.assign(N, 0.0);
        ws.eta.resize(N);
        ws.h_next.resize(N);
        ws.c_next.resize(N);
        ws.eta_next.resize(N);
    }

    {
        const auto eps = field.proposal(0);
        for (std::size_t k = 0; k < N; ++k) {
            if constexpr (Kernel::kRecurrent) {
                ws.eta[k] = kernel.beta0 + kernel.sigma * eps[k];
                ws.z[k] = ws.eta[k] + kernel.phi * kernel.z0;
            } else {
                ws.z[k] = kernel.init(eps[k]);
            }
        }
    }

    double loglik = 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0) {
            if (opt.sort) {
                for (std::size_t k = 0; k < N; ++k)
                    ws.keyed[k] = {ws.z[k], static_cast<std::uint32_t>(k)};
                std::sort(ws.keyed.begin(), ws.keyed.end());
                for (std::size_t k = 0; k < N; ++k) ws.order[k] = ws.keyed[k].second;
            } else {
                std::iota(ws.order.begin(), ws.order.end(), 0u);
            }
            detail::inverse_cdf_merge(ws.order, ws.w, total, field.uniforms(t - 1),
                                      field.uniform_order(t - 1), ws.ancestors);

            const auto eps = field.proposal(t);
            for (std::size_t k = 0; k < N; ++k) {
                const std::uint32_t a = ws.ancestors[k];
                if constexpr (Kernel::kRecurrent) {
                    const models::LstmState s =
                        models::lstm_cell(ws.eta[a], models::LstmState{ws.h[a], ws.c[a], ws.eta[a]}, kernel.w);
                    const double eta = kernel.beta0 + kernel.beta1 * s.h + kernel.sigma * eps[k];
                    ws.h_next[k] = s.h;
                    ws.c_next[k] = s.c;
                    ws.eta_next[k] = eta;
                    ws.z_next[k] = eta + kernel.phi * ws.z[a];
                } else {
                    ws.z_next[k] = kernel.step(ws.z[a], eps[k]);
                }
            }
            std::swap(ws.z, ws.z_next);
            if constexpr (Kernel::kRecurrent) {
                std::swap(ws.h, ws.h_next);
                std::swap(ws.c, ws.c_next);
                std::swap(ws.eta, ws.eta_next);
            }
        }

        const double half_y2 = 0.5 * y[t] * y[t];
        double max_logw = kNegInf;
        for (std::size_t k = 0; k < N; ++k) {
            double lw = kernel.logmeas(ws.z[k], half_y2);
            if (std::isnan(lw)) lw = kNegInf;
            ws.logw[k] = lw;
            max_logw = std::max(max_logw, lw);
        }
        if (!(max_logw > kNegInf) || !std::isfinite(max_logw)) {
            out.degenerate = true;
            out.loglik = kNegInf;
            out.incremental[t] = kNegInf;
            return out;
        }
        total = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            ws.w[k] = std::exp(ws.logw[k] - max_logw);
            total += ws.w[k];
        }
        const double inc = max_logw + std::log(total / static_cast<double>(N));
        out.incremental[t] = inc;
        loglik += inc;

        if (opt.record_stats || opt.on_weighted) {
            double m = 0.0, sum_w2 = 0.0;
            for (std::size_t k = 0; k < N; ++k) {
                const double wk = ws.w[k] / total;
                m += wk * ws.z[k];
                sum_w2 += wk * wk;
            }
            if (opt.record_stats) {
                double v = 0.0;
                for (std::size_t k = 0; k < N; ++k) {
                    const double d = ws.z[k] - m;
                    v += ws.w[k] / total * d * d;
                }
                out.filtered_mean[t] = m;
                out.filtered_sd[t] = std::sqrt(v);
                out.ess[t] = std::clamp(1.0 / sum_w2, 1.0, static_cast<double>(N));
            }
            if (opt.on_weighted) {
                std::vector<double> wn(N);
                for (std::size_t k = 0; k < N; ++k) wn[k] = ws.w[k] / total;
                WeightedParticles view;
                view.t = t;
                view.z = ws.z;
                view.weights = wn;
                if constexpr (Kernel::kRecurrent) {
                    view.h = ws.h;
                    view.c = ws.c;
                    view.eta = ws.eta;
                }
                opt.on_weighted(view);
            }
        }
    }
    out.loglik = loglik;
    return out;
}

}  // namespace

FilterOutput particle_filter(const models::ModelParams& params, std::span<const double> y,
                             const RandomField& field, const FilterOptions& opt) {
    models::validate(params);
    if (const auto* p = std::get_if<models::SvParams>(&params)) return run(SvKernel(*p), y, field, opt);
    if (const auto* p = std::get_if<models::NsvParams>(&params)) return run(NsvKernel(*p), y, field, opt);
    return run(LstmKernel(std::get<models::LstmSvParams>(params), opt.lstm_z0), y, field, opt);
}

FilterOutput filtered_volatility(const models::ModelParams& params, std::span<const double> y,
                                 const RandomField& field, FilterOptions opt) {
    opt.record_stats = true;
    return particle_filter(params, y, field, opt);
}

}  // namespace lstmsv::filter
