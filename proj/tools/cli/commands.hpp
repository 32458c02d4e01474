#pragma once

#include "lstmsv/bpm.hpp"
#include "lstmsv/evaluate.hpp"
#include "lstmsv/is2.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lstmsv::cli {

/// Exit status of a command: 0 success, 1 numeric failure at runtime, 2 usage
/// or validation error.
enum ExitCode : int { kOk = 0, kNumericFailure = 1, kUsage = 2 };

/// Settings shared by every command. `config_hash` is computed by the parser
/// from the effective option values and the bytes of every input file.
struct Common {
    std::string out;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string config_hash;
    std::string command;
};

struct DataSource {
    std::string path;
    bool prices = false;
    /// 0 keeps the whole series as the training set.
    std::size_t train_len = 0;
};

struct SimulateArgs {
    std::string model = "sv";
    std::string params;
    std::size_t T = 1000;
    bool latent = false;
    double z0 = 0.0;
};

struct FitArgs {
    std::string model = "sv";
    DataSource data;
    mcmc::SamplerConfig sampler;
    double z0 = 0.0;
};

struct MarglikArgs {
    std::string model = "sv";
    DataSource data;
    std::string chain;
    is2::Is2Config is2;
    double z0 = 0.0;
    bool toy = false;
    double toy_prior_var = 1.0;
};

struct ForecastArgs {
    std::string model = "sv";
    DataSource data;
    std::string params;
    evaluate::ForecastOptions forecast;
};

struct DiagnoseArgs {
    std::string model = "sv";
    DataSource data;
    std::string params;
    evaluate::ResidualOptions residual;
};

struct StatsArgs {
    DataSource data;
    std::vector<std::size_t> lags{5, 20, 35};
    bool lo_train_only = false;
};

int run_simulate(const Common& c, const SimulateArgs& a);
int run_fit(const Common& c, const FitArgs& a);
int run_marglik(const Common& c, const MarglikArgs& a);
int run_forecast(const Common& c, const ForecastArgs& a);
int run_diagnose(const Common& c, const DiagnoseArgs& a);
int run_stats(const Common& c, const StatsArgs& a);

}  // namespace lstmsv::cli
