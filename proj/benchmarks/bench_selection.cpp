// Selection-method throughput on a mid-sized planted dataset. The dataset is
// built once per binary run; methods see identical inputs.

#include <benchmark/benchmark.h>

#include "aptfs/fs_runner.hpp"
#include "aptfs/preprocess.hpp"
#include "aptfs/synth.hpp"

namespace {

const aptfs::Dataset& planted() {
    static const aptfs::Dataset ds = [] {
        aptfs::SynthSpec spec;
        spec.n_samples = 1000;
        spec.n_features = 100;
        spec.n_informative = 8;
        spec.n_redundant = 12;
        spec.seed = 1;
        return aptfs::generate(spec).first;
    }();
    return ds;
}

void run_method(benchmark::State& state, aptfs::FsMethod method, aptfs::FsOverrides overrides) {
    const aptfs::Dataset& ds = planted();
    aptfs::FsOptions opt;
    opt.k_select = 30;
    opt.seed = 7;
    opt.overrides = std::move(overrides);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::run_selection(method, ds, opt));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(ds.n_samples()));
}

void BM_relieff(benchmark::State& state) { run_method(state, aptfs::FsMethod::relieff, {}); }
void BM_spectral(benchmark::State& state) { run_method(state, aptfs::FsMethod::sfs, {}); }
void BM_rfe(benchmark::State& state) {
    run_method(state, aptfs::FsMethod::rfe, {{"n_trees", "25"}});
}
void BM_mifs(benchmark::State& state) { run_method(state, aptfs::FsMethod::mi, {}); }
void BM_gds(benchmark::State& state) { run_method(state, aptfs::FsMethod::gds, {}); }
void BM_cae(benchmark::State& state) {
    run_method(state, aptfs::FsMethod::cae, {{"epochs", "10"}, {"hidden", "32"}});
}
void BM_cfmi(benchmark::State& state) {
    run_method(state, aptfs::FsMethod::cfmi, {{"epochs", "10"}});
}

void BM_scaler(benchmark::State& state) {
    const aptfs::Dataset& ds = planted();
    for (auto _ : state) {
        const aptfs::Scaler s = aptfs::fit_scaler(ds);
        benchmark::DoNotOptimize(aptfs::apply_scaler(s, ds));
    }
}

}  // namespace

BENCHMARK(BM_relieff)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectral)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rfe)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mifs)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gds)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cae)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cfmi)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scaler)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
