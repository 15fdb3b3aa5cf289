// Classifier and estimator hot paths: tree/forest/knn fit-predict cycles,
// the histogram MI estimator, and fold metric aggregation.

#include <benchmark/benchmark.h>

#include <vector>

#include "aptfs/forest.hpp"
#include "aptfs/knn.hpp"
#include "aptfs/metrics.hpp"
#include "aptfs/mutual_info.hpp"
#include "aptfs/rng.hpp"
#include "aptfs/synth.hpp"
#include "aptfs/tree.hpp"

namespace {

const aptfs::Dataset& corpus() {
    static const aptfs::Dataset ds = [] {
        aptfs::SynthSpec spec;
        spec.n_samples = 2000;
        spec.n_features = 50;
        spec.n_informative = 6;
        spec.n_redundant = 8;
        spec.seed = 2;
        return aptfs::generate(spec).first;
    }();
    return ds;
}

void BM_tree_fit(benchmark::State& state) {
    const aptfs::Dataset& ds = corpus();
    aptfs::TreeConfig cfg;
    cfg.max_depth = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::fit_tree(ds, cfg));
    }
}

void BM_forest_fit(benchmark::State& state) {
    const aptfs::Dataset& ds = corpus();
    aptfs::ForestConfig cfg;
    cfg.n_trees = static_cast<std::size_t>(state.range(0));
    cfg.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::fit_forest(ds, cfg));
    }
}

void BM_forest_predict(benchmark::State& state) {
    const aptfs::Dataset& ds = corpus();
    aptfs::ForestConfig cfg;
    cfg.n_trees = 50;
    cfg.seed = 3;
    const aptfs::ForestModel model = aptfs::fit_forest(ds, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::predict_forest(model, ds.X));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(ds.n_samples()));
}

void BM_knn_predict(benchmark::State& state) {
    const aptfs::Dataset& ds = corpus();
    const aptfs::KnnModel model = aptfs::fit_knn(ds, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::knn_predict(model, ds.X));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(ds.n_samples()));
}

void BM_mutual_information(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    aptfs::Rng rng(4);
    std::vector<double> x(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(rng.below(3));
        x[i] = y[i] + rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::mutual_information(x, y, 10));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}

void BM_compute_metrics(benchmark::State& state) {
    aptfs::Rng rng(5);
    const std::size_t n = 10000;
    std::vector<int> yt(n), yp(n);
    for (std::size_t i = 0; i < n; ++i) {
        yt[i] = static_cast<int>(rng.below(16)) + 1;
        yp[i] = static_cast<int>(rng.below(16)) + 1;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::compute_metrics(yt, yp, aptfs::Averaging::macro));
    }
}

void BM_boxplot_stats(benchmark::State& state) {
    aptfs::Rng rng(6);
    std::vector<double> values(static_cast<std::size_t>(state.range(0)));
    for (double& v : values) v = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(aptfs::boxplot_stats(values));
    }
}

}  // namespace

BENCHMARK(BM_tree_fit)->Arg(0)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_forest_fit)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_forest_predict)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_knn_predict)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mutual_information)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_compute_metrics)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_boxplot_stats)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
