#include "lstmsv/particle_filter.hpp"
#include "lstmsv/random_field.hpp"
#include "lstmsv/rng.hpp"
#include "lstmsv/simulate.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace lstmsv;
using namespace lstmsv::filter;

models::LstmSvParams lstm_params() {
    models::LstmSvParams p;
    p.beta0 = 0.552;
    p.beta1 = 0.131;
    p.phi = 0.928;
    p.sigma2 = 0.121;
    p.lstm = models::LstmWeights{0.228, 0.159, 0.270, -0.266, -0.074, -0.413, -0.421, -0.072, 0.401, 0.142, 0.162, 0.178};
    return p;
}

template <class Params>
void run_filter(benchmark::State& state, const Params& p) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const auto N = static_cast<std::size_t>(state.range(1));
    const auto y = models::simulate(p, T, 1).y;
    auto rng = make_rng(1, "bench");
    const RandomField field(T, N, 200, rng);
    for (auto _ : state) benchmark::DoNotOptimize(filter::particle_filter(p, y, field).loglik);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * T * N));
}

void BM_FilterSv(benchmark::State& state) { run_filter(state, models::SvParams{0.0, 0.97, 0.04}); }
void BM_FilterLstm(benchmark::State& state) { run_filter(state, lstm_params()); }

void BM_RandomField(benchmark::State& state) {
    const auto T = static_cast<std::size_t>(state.range(0));
    const auto N = static_cast<std::size_t>(state.range(1));
    auto rng = make_rng(1, "bench");
    for (auto _ : state) {
        RandomField field(T, N, 200, rng);
        benchmark::DoNotOptimize(field.proposal(0).data());
    }
}

void BM_BlockRefresh(benchmark::State& state) {
    auto rng = make_rng(1, "bench");
    RandomField field(1000, 200, 200, rng);
    std::size_t b = 0;
    for (auto _ : state) {
        field.refresh_block(b, rng);
        field.commit();
        b = (b + 1) % field.block_count();
    }
}

}  // namespace

BENCHMARK(BM_FilterSv)->Args({1000, 200})->Args({1000, 2000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterLstm)->Args({1000, 200})->Args({1000, 2000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomField)->Args({1000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockRefresh)->Unit(benchmark::kMicrosecond);
