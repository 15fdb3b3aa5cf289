#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aptfs/dataset.hpp"
#include "aptfs/fs_runner.hpp"
#include "aptfs/metrics.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

/// Classifier ids in report order: cart, forest, knn.
const std::vector<std::string>& classifier_names();

/// Metric ids in report order: accuracy, precision, recall, f1.
const std::vector<std::string>& metric_names();
double metric_value(const MetricSet& m, const std::string& name);

/// Column id of the no-selection reference run.
inline constexpr const char* kBaselineId = "baseline";

struct EvalConfig {
    std::size_t k_select = 110;
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;
    bool include_baseline = true;
    Averaging averaging = Averaging::macro;
    std::map<FsMethod, FsOverrides> overrides;  // per-method selection knobs
    std::size_t forest_trees = 100;
    std::size_t knn_k = 5;
};

/// One fold's outcome for one method column: the three classifiers' metrics
/// (classifier_names() order) and their arithmetic mean, which is the value
/// all distribution statistics are computed from.
struct FoldOutcome {
    std::vector<MetricSet> per_classifier;
    MetricSet mean;
};

struct MethodOutcome {
    std::string method;  // selection method id, or "baseline"
    std::map<std::string, std::string> fs_params;  // from the first fold's run
    std::vector<FoldOutcome> folds;
    std::map<std::string, BoxStats> stats;  // metric -> stats over fold means
    std::map<std::string, double> mean;     // metric -> mean over fold means
};

struct EvalReport {
    std::string dataset;
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    std::size_t k_select = 0;
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    std::string averaging;
    std::vector<std::string> classifiers;
    std::vector<MethodOutcome> methods;  // requested order; baseline last
    std::map<std::string, std::vector<std::string>> ranking;  // metric -> ids, best first
};

/// Cross-validated selection-then-classification protocol. Per fold and
/// method: scaler and selection are fitted on the training split only, the
/// three classifiers train on the selected training features and predict the
/// test split, and the fold's record is the mean of the three classifiers'
/// metric sets. Each (method, fold) task seeds its own stream from
/// (seed, method, fold), so results do not depend on scheduling.
EvalReport evaluate_pipeline(const Dataset& raw, const std::vector<FsMethod>& methods,
                             const EvalConfig& cfg);

struct GridRow {
    FsOverrides params;
    double score = 0.0;
};

/// Exhaustive sweep outcome; the table keeps every evaluated point in
/// enumeration order (keys ascending, values in the given order).
struct GridResult {
    FsOverrides best;
    double best_score = 0.0;
    std::string objective;
    std::vector<GridRow> table;
};

/// Evaluates every grid point with the evaluate_pipeline protocol and
/// returns the argmax of the objective metric's cross-validated mean. Ties
/// keep the earliest point in enumeration order.
GridResult grid_search(const Dataset& raw, FsMethod method,
                       const std::map<std::string, std::vector<std::string>>& grid,
                       const std::string& objective, const EvalConfig& cfg);

}  // namespace aptfs
