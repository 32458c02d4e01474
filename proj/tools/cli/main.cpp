#include "commands.hpp"

#include "lstmsv/errors.hpp"
#include "lstmsv/io.hpp"
#include "lstmsv/rng.hpp"
#include "lstmsv/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lstmsv;
using namespace lstmsv::cli;

const std::vector<std::string> kModels{"sv", "nsv", "lstmsv"};

void add_common(CLI::App* sub, Common& c, std::string& config, const std::string& default_out) {
    c.out = default_out;
    sub->add_option("--out", c.out, "Output path prefix; files are written as PREFIX_<name>.csv plus PREFIX.meta");
    sub->add_option("--seed", c.seed, "Root seed; every random substream is derived from it");
    sub->add_option("--threads", c.threads, "Worker cap for parallel sections; never changes the output")
        ->check(CLI::PositiveNumber);
    sub->add_option("--config", config,
                    "key=value settings file with long option names as keys; '#' starts a comment. "
                    "Precedence: flags, then this file, then defaults")
        ->check(CLI::ExistingFile);
}

void add_data(CLI::App* sub, DataSource& d, bool required = true) {
    auto* opt = sub->add_option("--data", d.path, "Input CSV: one value per row, or label,value; a header is optional")
                    ->check(CLI::ExistingFile);
    if (required) opt->required();
    sub->add_flag("--prices", d.prices, "Input holds prices; convert to demeaned percentage log-returns");
    sub->add_option("--train-len", d.train_len, "Length of the training segment (0 = whole series)");
}

void add_model(CLI::App* sub, std::string& model, const std::vector<std::string>& allowed) {
    sub->add_option("--model", model, "Model tag")->check(CLI::IsMember(allowed))->required();
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::to_string(fnv1a64(ss.str()));
}

// FNV-1a over the effective option values (flags, config file or defaults) and
// the bytes of every input file. Thread count and output prefix are excluded.
std::string config_hash(const CLI::App* sub) {
    std::string canon = sub->get_name() + '\n';
    for (const CLI::Option* opt : sub->get_options()) {
        const auto& names = opt->get_lnames();
        if (names.empty()) continue;
        const std::string& name = names.front();
        if (name == "help" || name == "config" || name == "threads" || name == "out") continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += r + ';';
        } else {
            value = opt->get_default_str();
        }
        canon += name + '=' + value + '\n';
        if ((name == "data" || name == "params" || name == "chain") && opt->count() > 0)
            canon += name + ".digest=" + file_digest(opt->as<std::string>()) + '\n';
    }
    return std::to_string(fnv1a64(canon));
}

// Arguments with every key of the --config file that the command line does not
// already set appended as --key=value, so flags take precedence over the file
// and the file over defaults.
std::vector<std::string> with_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || !std::filesystem::is_regular_file(path)) return args;
    for (const auto& [key, value] : io::read_key_values(path)) {
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
        if (!given) args.push_back(flag + "=" + value);
    }
    return args;
}

void ensure_output_dir(const std::string& prefix) {
    const auto parent = std::filesystem::path(prefix).parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec || !std::filesystem::is_directory(parent))
        throw ConfigError("output directory is not writable: " + parent.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic volatility estimation (SV, N-SV, LSTM-SV) by block pseudo-marginal MCMC, "
                 "IS2 marginal likelihood and predictive scoring.\n"
                 "Exit status: 0 success, 1 numeric failure at runtime, 2 usage or validation error."};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);
    app.option_defaults()->always_capture_default();

    Common common;
    std::string config;

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate returns from a model or the nonlinear benchmark process");
    add_common(simulate, common, config, "sim");
    add_model(simulate, sim.model, {"sv", "nsv", "lstmsv", "dgp"});
    simulate->add_option("--params", sim.params,
                         "name,value parameter file. Defaults: sv mu=0 phi=0.97 sigma2=0.04; nsv adds delta=0.05; "
                         "lstmsv beta0=0.552 beta1=0.131 phi=0.928 sigma2=0.121 with fixed LSTM weights")
        ->check(CLI::ExistingFile);
    simulate->add_option("--T", sim.T, "Number of observations");
    simulate->add_flag("--latent", sim.latent, "Also write the latent log-variance path to PREFIX_latent.csv");
    simulate->add_option("--z0", sim.z0, "Pre-sample log-variance for lstmsv (z1 = eta1 + phi*z0)");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Block pseudo-marginal MCMC fit on the training segment");
    add_common(fit_cmd, common, config, "fit");
    add_model(fit_cmd, fit.model, kModels);
    add_data(fit_cmd, fit.data);
    fit_cmd->add_option("--iters", fit.sampler.iters, "MCMC iterations");
    fit_cmd->add_option("--burnin", fit.sampler.burnin, "Burn-in iterations; adaptation stops after it");
    fit_cmd->add_option("--thin", fit.sampler.thin, "Keep every thin-th post-burn-in draw");
    fit_cmd->add_option("--particles", fit.sampler.particles, "Particles per likelihood estimate");
    fit_cmd->add_option("--blocks", fit.sampler.blocks,
                        "Random-number blocks; 1 gives the uncorrelated pseudo-marginal sampler");
    fit_cmd->add_option("--target-accept", fit.sampler.target_accept, "Target acceptance rate of the scale adaptation");
    fit_cmd->add_option("--z0", fit.z0, "Pre-sample log-variance for lstmsv");

    MarglikArgs ml;
    auto* marglik = app.add_subcommand("marglik", "IS2 log marginal likelihood from a fitted chain");
    add_common(marglik, common, config, "marglik");
    marglik->add_option("--model", ml.model, "Model tag (ignored with --toy)")->check(CLI::IsMember(kModels));
    add_data(marglik, ml.data);
    marglik->add_option("--chain", ml.chain, "Chain CSV written by fit (draws after burn-in and thinning)")
        ->check(CLI::ExistingFile);
    marglik->add_option("--samples", ml.is2.samples, "Importance samples M per run");
    marglik->add_option("--particles", ml.is2.particles, "Particles per likelihood estimate");
    marglik->add_option("--runs", ml.is2.runs, "Independent runs; mc_se is NA for a single run");
    marglik->add_option("--z0", ml.z0, "Pre-sample log-variance for lstmsv");
    marglik->add_flag("--toy", ml.toy,
                      "Exact-likelihood conjugate toy: y_i ~ N(theta, 1), theta ~ N(0, toy-prior-var); "
                      "reports the closed-form evidence alongside");
    marglik->add_option("--toy-prior-var", ml.toy_prior_var, "Prior variance of theta in the toy");

    ForecastArgs fc;
    auto* forecast = app.add_subcommand("forecast", "One-step predictive scores on the test segment");
    add_common(forecast, common, config, "forecast");
    add_model(forecast, fc.model, kModels);
    add_data(forecast, fc.data);
    forecast->get_option("--train-len")->required()->description("Length of the training segment; the rest is test");
    forecast->add_option("--params", fc.params, "name,value parameter file (e.g. PREFIX_means.csv from fit)")
        ->check(CLI::ExistingFile)
        ->required();
    forecast->add_option("--alpha", fc.forecast.alpha, "VaR level for hits and the quantile score");
    forecast->add_option("--coverage", fc.forecast.coverage, "Central interval coverage for violations");
    forecast->add_option("--particles", fc.forecast.particles, "Particles of the filter pass");
    forecast->add_option("--draws", fc.forecast.predictive_draws, "Propagation draws per particle for the predictive law");
    forecast->add_option("--z0", fc.forecast.lstm_z0, "Pre-sample log-variance for lstmsv");

    DiagnoseArgs dg;
    auto* diagnose = app.add_subcommand("diagnose", "Standardised residuals, QQ points and Ljung-Box test");
    add_common(diagnose, common, config, "diagnose");
    add_model(diagnose, dg.model, kModels);
    add_data(diagnose, dg.data);
    diagnose->add_option("--params", dg.params, "name,value parameter file")->check(CLI::ExistingFile)->required();
    diagnose->add_option("--particles", dg.residual.particles, "Particles of the filter pass");
    diagnose->add_option("--lb-lags", dg.residual.lags, "Ljung-Box lags");
    diagnose->add_option("--z0", dg.residual.lstm_z0, "Pre-sample log-variance for lstmsv");

    StatsArgs st;
    auto* stats = app.add_subcommand("stats", "Descriptive statistics and Lo's modified R/S test");
    add_common(stats, common, config, "stats");
    add_data(stats, st.data);
    stats->add_option("--lags", st.lags, "Comma-separated Lo lags q")->delimiter(',');
    stats->add_flag("--lo-train-only", st.lo_train_only,
                    "Apply Lo's test to the training segment instead of the full series");

    try {
        auto args = with_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const lstmsv::ParseError& e) {
        std::cerr << "error: config file: " << e.what() << '\n';
        return kUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    common.command = sub->get_name();
    try {
        common.config_hash = config_hash(sub);
        ensure_output_dir(common.out);
        if (sub == simulate) return run_simulate(common, sim);
        if (sub == fit_cmd) return run_fit(common, fit);
        if (sub == marglik) return run_marglik(common, ml);
        if (sub == forecast) return run_forecast(common, fc);
        if (sub == diagnose) return run_diagnose(common, dg);
        return run_stats(common, st);
    } catch (const EstimationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const lstmsv::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::logic_error& e) {
        // DomainError, SizeError, ConfigError and DegenerateInputError.
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericFailure;
    }
}
