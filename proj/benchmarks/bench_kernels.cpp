#include "lstmsv/lstm.hpp"
#include "lstmsv/resample.hpp"
#include "lstmsv/rng.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using namespace lstmsv;
using namespace lstmsv::filter;

void BM_LstmCell(benchmark::State& state) {
    const models::LstmWeights w{0.228, 0.159, 0.270, -0.266, -0.074, -0.413, -0.421, -0.072, 0.401, 0.142, 0.162, 0.178};
    models::LstmState s;
    double x = 0.1;
    for (auto _ : state) {
        s = lstm_cell(x, s, w);
        x = 0.5 * s.h + 0.1;
        benchmark::DoNotOptimize(s);
    }
}

void BM_SortedResample(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    auto rng = make_rng(1, "bench");
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    std::vector<double> z(N), w(N), u(N);
    for (std::size_t i = 0; i < N; ++i) {
        z[i] = normal(rng);
        w[i] = unif(rng);
        u[i] = unif(rng);
    }
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    for (auto _ : state) benchmark::DoNotOptimize(sorted_multinomial_resample(z, w, u));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * N));
}

}  // namespace

BENCHMARK(BM_LstmCell);
BENCHMARK(BM_SortedResample)->Arg(200)->Arg(2000);
BENCHMARK_MAIN();
