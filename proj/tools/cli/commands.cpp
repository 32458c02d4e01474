#include "commands.hpp"

#include "lstmsv/data.hpp"
#include "lstmsv/errors.hpp"
#include "lstmsv/io.hpp"
#include "lstmsv/math.hpp"
#include "lstmsv/models.hpp"
#include "lstmsv/priors.hpp"
#include "lstmsv/rng.hpp"
#include "lstmsv/simulate.hpp"
#include "lstmsv/version.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace lstmsv::cli {

namespace {

namespace fs = std::filesystem;

fs::path output(const Common& c, const std::string& suffix) { return fs::path(c.out + suffix); }

void write_meta(const Common& c, const std::string& model, std::map<std::string, std::string> extra = {}) {
    extra["command"] = c.command;
    extra["config_hash"] = c.config_hash;
    extra["model"] = model;
    extra["seed"] = std::to_string(c.seed);
    extra["version"] = kVersion;
    io::write_sidecar(output(c, ".meta"), extra);
}

data::ReturnSeries load_returns(const DataSource& src) {
    auto file = io::read_series(src.path);
    data::ReturnSeries series = src.prices
        ? data::demeaned_returns(data::PriceSeries{std::move(file.values), std::move(file.labels)})
        : data::make_series(std::move(file.values), 0);
    const std::size_t n = series.size();
    if (n == 0) throw SizeError("input series is empty");
    return data::split(std::move(series), src.train_len == 0 ? n : src.train_len);
}

std::string fmt(double x) { return std::isnan(x) ? std::string("NA") : io::format_double(x); }

void write_rows(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    out << "name,value\n";
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

models::LstmSvParams default_lstm_params() {
    models::LstmSvParams p;
    p.beta0 = 0.552;
    p.beta1 = 0.131;
    p.phi = 0.928;
    p.sigma2 = 0.121;
    p.lstm = models::LstmWeights{0.228, 0.159, 0.270, -0.266, -0.074, -0.413, -0.421, -0.072, 0.401, 0.142, 0.162, 0.178};
    return p;
}

models::ModelParams default_params(models::Model m) {
    switch (m) {
        case models::Model::Sv: return models::SvParams{0.0, 0.97, 0.04};
        case models::Model::Nsv: return models::NsvParams{0.0, 0.97, 0.04, 0.05};
        case models::Model::LstmSv: return default_lstm_params();
    }
    return models::SvParams{};
}

// Conjugate toy: y_i ~ N(θ, 1), θ ~ N(0, τ²).
struct Toy {
    std::vector<double> y;
    double tau2 = 1.0;

    [[nodiscard]] double loglik(double theta) const {
        double s = 0.0;
        for (double v : y) s += normal_logpdf(v, theta, 1.0);
        return s;
    }
    [[nodiscard]] double post_var() const { return 1.0 / (1.0 / tau2 + static_cast<double>(y.size())); }
    [[nodiscard]] double post_mean() const {
        double s = 0.0;
        for (double v : y) s += v;
        return post_var() * s;
    }
    // y ~ N(0, I + τ²11ᵀ).
    [[nodiscard]] double log_evidence() const {
        const double n = static_cast<double>(y.size());
        double s = 0.0, ss = 0.0;
        for (double v : y) {
            s += v;
            ss += v * v;
        }
        const double quad = ss - tau2 / (1.0 + n * tau2) * s * s;
        return -n * kLogSqrt2Pi - 0.5 * std::log1p(n * tau2) - 0.5 * quad;
    }
};

mcmc::ChainDraws draws_from_file(const std::string& path, models::Model m) {
    const auto file = io::read_chain(path);
    const auto names = models::parameter_names(m);
    if (file.names != names) throw ConfigError("chain columns do not match the model parameters");
    mcmc::ChainDraws chain;
    chain.names = names;
    chain.completed = file.draws.size();
    chain.unconstrained.resize(static_cast<Eigen::Index>(file.draws.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < file.draws.size(); ++i) {
        const auto p = models::from_vector(m, file.draws[i]);
        models::validate(p);
        chain.unconstrained.row(static_cast<Eigen::Index>(i)) = models::to_unconstrained(p).transpose();
    }
    return chain;
}

void write_marglik(const Common& c, const is2::MarglikEstimate& est, std::optional<double> analytic) {
    std::vector<std::pair<std::string, std::string>> rows{
        {"log_marglik", fmt(est.log_marglik)},
        {"mc_se", fmt(est.mc_se)},
        {"samples", std::to_string(est.samples)},
        {"particles", std::to_string(est.particles)},
        {"runs", std::to_string(est.runs)},
    };
    if (analytic) rows.emplace_back("analytic_log_evidence", fmt(*analytic));
    write_rows(output(c, "_marglik.csv"), rows);
    std::vector<double> run_index(est.run_estimates.size());
    for (std::size_t r = 0; r < run_index.size(); ++r) run_index[r] = static_cast<double>(r + 1);
    io::write_table(output(c, "_runs.csv"), {"run", "log_marglik"}, {run_index, est.run_estimates});
    std::cout << "log marginal likelihood " << fmt(est.log_marglik) << " (mc_se " << fmt(est.mc_se) << ")\n";
}

}  // namespace

int run_simulate(const Common& c, const SimulateArgs& a) {
    models::SimulatedPath path;
    if (a.model == "dgp") {
        path = models::simulate_dgp(a.T, c.seed);
    } else {
        const auto m = models::parse_model(a.model);
        const auto p = a.params.empty() ? default_params(m) : io::read_params(a.params, m);
        path = models::simulate(p, a.T, c.seed, models::SimulationOptions{a.z0});
    }
    io::write_series(output(c, ".csv"), path.y, "y");
    if (a.latent) io::write_series(output(c, "_latent.csv"), path.z, "z");
    write_meta(c, a.model, {{"T", std::to_string(a.T)}});
    return kOk;
}

int run_fit(const Common& c, const FitArgs& a) {
    const auto m = models::parse_model(a.model);
    const auto series = load_returns(a.data);
    auto cfg = a.sampler;
    cfg.seed = c.seed;
    cfg.validate();
    filter::FilterOptions fopt;
    fopt.lstm_z0 = a.z0;
    const auto chain = mcmc::run_bpm(models::PriorSet::defaults(m), series.train(), cfg, fopt);

    const auto rows = mcmc::retained_indices(chain.completed, cfg.burnin, cfg.thin);
    io::write_chain(output(c, "_chain.csv"), chain, rows);
    std::map<std::string, std::string> meta{
        {"iters", std::to_string(cfg.iters)},
        {"burnin", std::to_string(cfg.burnin)},
        {"thin", std::to_string(cfg.thin)},
        {"particles", std::to_string(cfg.particles)},
        {"blocks", std::to_string(cfg.blocks)},
        {"sampler", cfg.blocks == 1 ? "pseudo-marginal (uncorrelated, single block)" : "block pseudo-marginal"},
        {"train_len", std::to_string(series.train_len)},
        {"completed", std::to_string(chain.completed)},
    };
    if (!chain.failure.empty()) meta["failure"] = chain.failure;
    write_meta(c, a.model, meta);

    if (!rows.empty()) {
        const auto s = mcmc::summarize(chain, cfg.burnin, cfg.thin);
        std::ofstream out(output(c, "_summary.csv"), std::ios::binary | std::ios::trunc);
        out << "parameter,mean,sd,iact\n";
        for (std::size_t j = 0; j < s.names.size(); ++j)
            out << s.names[j] << ',' << fmt(s.mean[j]) << ',' << fmt(s.sd[j]) << ',' << fmt(s.iact[j]) << '\n';
        out.close();
        write_rows(output(c, "_run.csv"), {{"acceptance_rate", fmt(s.acceptance_rate)},
                                           {"retained", std::to_string(s.retained)},
                                           {"completed", std::to_string(chain.completed)}});
        std::vector<double> means = s.mean;
        io::write_params(output(c, "_means.csv"), models::from_vector(m, means));
        std::cout << "acceptance rate " << fmt(s.acceptance_rate) << ", retained draws " << s.retained << '\n';
        for (std::size_t j = 0; j < s.names.size(); ++j)
            std::cout << "  " << s.names[j] << " mean " << fmt(s.mean[j]) << " sd " << fmt(s.sd[j]) << '\n';
    }
    if (!chain.failure.empty()) {
        std::cerr << "error: chain stopped after " << chain.completed << " iterations: " << chain.failure << '\n';
        return kNumericFailure;
    }
    return kOk;
}

int run_marglik(const Common& c, const MarglikArgs& a) {
    auto cfg = a.is2;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    cfg.validate();

    if (a.toy) {
        if (!(a.toy_prior_var > 0.0)) throw DomainError("toy prior variance must be positive");
        Toy toy{io::read_series(a.data.path).values, a.toy_prior_var};
        if (toy.y.empty()) throw SizeError("input series is empty");
        mcmc::ChainDraws draws;
        if (!a.chain.empty()) {
            const auto file = io::read_chain(a.chain);
            if (file.names != std::vector<std::string>{"theta"}) throw ConfigError("toy chain needs one column 'theta'");
            draws.unconstrained.resize(static_cast<Eigen::Index>(file.draws.size()), 1);
            for (std::size_t i = 0; i < file.draws.size(); ++i)
                draws.unconstrained(static_cast<Eigen::Index>(i), 0) = file.draws[i][0];
        } else {
            // Exact posterior draws stand in for a chain.
            auto rng = make_rng(c.seed, "toy-posterior");
            std::normal_distribution<double> normal(toy.post_mean(), std::sqrt(toy.post_var()));
            draws.unconstrained.resize(2000, 1);
            for (Eigen::Index i = 0; i < 2000; ++i) draws.unconstrained(i, 0) = normal(rng);
        }
        draws.names = {"theta"};
        draws.completed = static_cast<std::size_t>(draws.unconstrained.rows());
        const auto fit = is2::fit_proposal(draws, 0, 1);
        const double tau2 = toy.tau2;
        const auto est = is2::is2_marglik([tau2](const Eigen::VectorXd& u) { return normal_logpdf(u[0], 0.0, tau2); },
                                          [&toy](const Eigen::VectorXd& u, Rng&) { return toy.loglik(u[0]); },
                                          fit.proposal, cfg);
        write_marglik(c, est, toy.log_evidence());
        write_meta(c, "toy", {{"samples", std::to_string(cfg.samples)}, {"runs", std::to_string(cfg.runs)}});
        return kOk;
    }

    const auto m = models::parse_model(a.model);
    if (a.chain.empty()) throw ConfigError("--chain is required unless --toy is given");
    const auto series = load_returns(a.data);
    const auto fit = is2::fit_proposal(draws_from_file(a.chain, m), 0, 1);
    filter::FilterOptions fopt;
    fopt.lstm_z0 = a.z0;
    const auto est = is2::is2_marglik(models::PriorSet::defaults(m), series.train(), fit.proposal, cfg, fopt);
    write_marglik(c, est, std::nullopt);
    write_meta(c, a.model,
               {{"samples", std::to_string(cfg.samples)},
                {"particles", std::to_string(cfg.particles)},
                {"runs", std::to_string(cfg.runs)},
                {"train_len", std::to_string(series.train_len)},
                {"mixture_converged", fit.converged ? "true" : "false"}});
    return kOk;
}

int run_forecast(const Common& c, const ForecastArgs& a) {
    const auto m = models::parse_model(a.model);
    const auto series = load_returns(a.data);
    if (series.test_len == 0) throw SizeError("forecast: the test segment is empty");
    const auto p = io::read_params(a.params, m);
    auto opt = a.forecast;
    opt.seed = c.seed;
    const auto rep = evaluate::predictive_scores(p, series, opt);

    std::vector<double> t(rep.test_len);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(series.train_len + i + 1);
    io::write_table(output(c, "_forecast.csv"), {"t", "y", "lower", "upper", "var", "log_predictive"},
                    {t, rep.y, rep.lower, rep.upper, rep.var_forecast, rep.log_predictive});
    write_rows(output(c, "_scores.csv"), {{"pps", fmt(rep.pps)},
                                          {"violations", std::to_string(rep.violations)},
                                          {"qs", fmt(rep.qs)},
                                          {"hit_pct", fmt(rep.hit_pct)},
                                          {"alpha", fmt(rep.alpha)},
                                          {"test_len", std::to_string(rep.test_len)}});
    write_meta(c, a.model, {{"train_len", std::to_string(series.train_len)}});
    std::cout << "PPS " << fmt(rep.pps) << ", violations " << rep.violations << ", QS " << fmt(rep.qs)
              << ", hit " << fmt(rep.hit_pct) << '\n';
    return kOk;
}

int run_diagnose(const Common& c, const DiagnoseArgs& a) {
    const auto m = models::parse_model(a.model);
    const auto series = load_returns(a.data);
    const auto p = io::read_params(a.params, m);
    auto opt = a.residual;
    opt.seed = c.seed;
    const auto d = evaluate::residual_diagnostics(p, series.train(), opt);

    std::vector<double> t(d.residuals.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i + 1);
    io::write_table(output(c, "_residuals.csv"), {"t", "residual", "filtered_mean"}, {t, d.residuals, d.filtered_mean});
    const auto qq = evaluate::qq_points(d.residuals);
    std::vector<double> theo, sample;
    for (const auto& [x, y] : qq) {
        theo.push_back(x);
        sample.push_back(y);
    }
    io::write_table(output(c, "_qq.csv"), {"theoretical", "sample"}, {theo, sample});
    write_rows(output(c, "_diagnostics.csv"), {{"skewness", fmt(d.skewness)},
                                               {"kurtosis", fmt(d.kurtosis)},
                                               {"lb_stat", fmt(d.lb_stat)},
                                               {"lb_pvalue", fmt(d.lb_pvalue)},
                                               {"lb_lags", std::to_string(d.lb_lags)}});
    write_meta(c, a.model, {{"train_len", std::to_string(series.train_len)}});
    return kOk;
}

int run_stats(const Common& c, const StatsArgs& a) {
    const auto series = load_returns(a.data);
    const auto st = data::descriptive_stats(series.values);
    write_rows(output(c, "_stats.csv"), {{"n", std::to_string(series.size())},
                                         {"min", fmt(st.min)},
                                         {"max", fmt(st.max)},
                                         {"std", fmt(st.std)},
                                         {"skewness", fmt(st.skewness)},
                                         {"kurtosis", fmt(st.kurtosis)}});
    const auto x = data::log_squared(a.lo_train_only ? series.train() : std::span<const double>(series.values));
    std::ofstream out(output(c, "_lo.csv"), std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file: " + output(c, "_lo.csv").string());
    out << "q,statistic,reject_5pct\n";
    for (std::size_t q : a.lags) {
        const auto r = data::lo_modified_rs(x, q);
        out << q << ',' << fmt(r.statistic) << ',' << (r.reject_5pct ? 1 : 0) << '\n';
    }
    out.close();
    write_meta(c, "none", {{"lo_sample", a.lo_train_only ? "train" : "full"}});
    return kOk;
}

}  // namespace lstmsv::cli
