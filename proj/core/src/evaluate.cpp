#include "aptfs/evaluate.hpp"

#include <algorithm>
#include <set>

#include "aptfs/error.hpp"
#include "aptfs/forest.hpp"
#include "aptfs/knn.hpp"
#include "aptfs/preprocess.hpp"
#include "aptfs/rng.hpp"
#include "aptfs/tree.hpp"

namespace aptfs {

const std::vector<std::string>& classifier_names() {
    static const std::vector<std::string> names = {"cart", "forest", "knn"};
    return names;
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {"accuracy", "precision", "recall", "f1"};
    return names;
}

double metric_value(const MetricSet& m, const std::string& name) {
    if (name == "accuracy") return m.accuracy;
    if (name == "precision") return m.precision;
    if (name == "recall") return m.recall;
    if (name == "f1") return m.f1;
    throw ConfigError("unknown metric '" + name + "' (valid: accuracy, precision, recall, f1)");
}

namespace {

MetricSet mean_of(const std::vector<MetricSet>& sets) {
    MetricSet out;
    for (const MetricSet& m : sets) {
        out.accuracy += m.accuracy;
        out.precision += m.precision;
        out.recall += m.recall;
        out.f1 += m.f1;
    }
    const double inv = 1.0 / static_cast<double>(sets.size());
    out.accuracy *= inv;
    out.precision *= inv;
    out.recall *= inv;
    out.f1 *= inv;
    return out;
}

/// One method column on one fold: select on the training split, train the
/// three classifiers on the surviving columns, score the test split.
FoldOutcome run_task(const Dataset& train, const Dataset& test, bool baseline, FsMethod method,
                     std::uint64_t task_seed, const EvalConfig& cfg,
                     std::map<std::string, std::string>* fs_params_out) {
    const Scaler scaler = fit_scaler(train);
    const Dataset train_s = apply_scaler(scaler, train);
    const Dataset test_s = apply_scaler(scaler, test);

    Dataset train_fs, test_fs;
    if (baseline) {
        train_fs = train_s;
        test_fs = test_s;
        if (fs_params_out)
            (*fs_params_out)["features"] = std::to_string(scaler.kept_dim());
    } else {
        FsOptions opts;
        opts.k_select = cfg.k_select;
        opts.seed = task_seed;
        opts.n_threads = cfg.n_threads;
        if (const auto it = cfg.overrides.find(method); it != cfg.overrides.end())
            opts.overrides = it->second;
        const SelectionResult sel = run_selection(method, train, opts);
        if (fs_params_out) *fs_params_out = sel.params;

        // original index -> scaled column; constants padded into the
        // selection have no column and are skipped here
        std::vector<std::size_t> inv(train.n_features(), train.n_features());
        for (std::size_t j = 0; j < scaler.kept_dim(); ++j) inv[scaler.to_original(j)] = j;
        std::vector<int> cols;
        cols.reserve(sel.selected.size());
        for (int idx : sel.selected) {
            const std::size_t j = inv[static_cast<std::size_t>(idx)];
            if (j != train.n_features()) cols.push_back(static_cast<int>(j));
        }
        train_fs = subset_columns(train_s, cols);
        test_fs = subset_columns(test_s, cols);
    }

    FoldOutcome out;
    {
        const auto root = fit_tree(train_fs, TreeConfig{});
        out.per_classifier.push_back(
            compute_metrics(test.y, predict_tree(*root, test_fs.X), cfg.averaging));
    }
    {
        ForestConfig fc;
        fc.n_trees = cfg.forest_trees;
        fc.seed = mix_seed(task_seed, 0xf0);
        fc.n_threads = cfg.n_threads;
        const ForestModel model = fit_forest(train_fs, fc);
        out.per_classifier.push_back(compute_metrics(
            test.y, predict_forest(model, test_fs.X, cfg.n_threads), cfg.averaging));
    }
    {
        const KnnModel model = fit_knn(train_fs, std::min(cfg.knn_k, train_fs.n_samples()));
        out.per_classifier.push_back(
            compute_metrics(test.y, knn_predict(model, test_fs.X, cfg.n_threads), cfg.averaging));
    }
    out.mean = mean_of(out.per_classifier);
    return out;
}

}  // namespace

EvalReport evaluate_pipeline(const Dataset& raw, const std::vector<FsMethod>& methods,
                             const EvalConfig& cfg) {
    validate_dataset(raw);
    if (methods.empty() && !cfg.include_baseline)
        throw ConfigError("evaluate_pipeline: nothing to evaluate");
    {
        std::set<FsMethod> seen;
        for (FsMethod m : methods)
            if (!seen.insert(m).second)
                throw ConfigError("evaluate_pipeline: method '" + to_string(m) +
                                  "' listed twice");
    }

    const FoldPlan plan = stratified_folds(raw, cfg.folds, cfg.seed);

    EvalReport report;
    report.dataset = raw.name;
    report.n_samples = raw.n_samples();
    report.n_features = raw.n_features();
    report.k_select = cfg.k_select;
    report.folds = cfg.folds;
    report.seed = cfg.seed;
    report.averaging = cfg.averaging == Averaging::macro ? "macro" : "micro";
    report.classifiers = classifier_names();

    struct Column {
        std::string id;
        bool baseline;
        FsMethod method;
        std::uint64_t tag;  // 0 = baseline, 1 + enum value otherwise
    };
    std::vector<Column> columns;
    for (FsMethod m : methods)
        columns.push_back({to_string(m), false, m, 1 + static_cast<std::uint64_t>(m)});
    if (cfg.include_baseline) columns.push_back({kBaselineId, true, FsMethod::mi, 0});

    for (const Column& col : columns) {
        MethodOutcome outcome;
        outcome.method = col.id;
        for (std::size_t f = 0; f < plan.folds.size(); ++f) {
            const Dataset train = subset_rows(raw, plan.folds[f].train);
            const Dataset test = subset_rows(raw, plan.folds[f].test);
            const std::uint64_t task_seed = mix_seed(cfg.seed, col.tag, f);
            try {
                outcome.folds.push_back(run_task(train, test, col.baseline, col.method, task_seed,
                                                 cfg, f == 0 ? &outcome.fs_params : nullptr));
            } catch (const Error& e) {
                throw Error("evaluate_pipeline: column '" + col.id + "', fold " +
                            std::to_string(f) + ": " + e.what());
            }
        }
        for (const std::string& metric : metric_names()) {
            std::vector<double> values;
            values.reserve(outcome.folds.size());
            for (const FoldOutcome& fo : outcome.folds)
                values.push_back(metric_value(fo.mean, metric));
            outcome.stats[metric] = boxplot_stats(values);
            double sum = 0.0;
            for (double v : values) sum += v;
            outcome.mean[metric] = sum / static_cast<double>(values.size());
        }
        report.methods.push_back(std::move(outcome));
    }

    for (const std::string& metric : metric_names()) {
        std::vector<std::size_t> order(report.methods.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return report.methods[a].mean.at(metric) > report.methods[b].mean.at(metric);
        });
        std::vector<std::string>& ids = report.ranking[metric];
        for (std::size_t i : order) ids.push_back(report.methods[i].method);
    }
    return report;
}

GridResult grid_search(const Dataset& raw, FsMethod method,
                       const std::map<std::string, std::vector<std::string>>& grid,
                       const std::string& objective, const EvalConfig& cfg) {
    if (grid.empty()) throw ConfigError("grid_search: empty grid");
    for (const auto& [key, values] : grid)
        if (values.empty())
            throw ConfigError("grid_search: parameter '" + key + "' has no candidate values");
    metric_value(MetricSet{}, objective);  // rejects unknown metric names

    std::vector<std::string> keys;
    for (const auto& [key, values] : grid) keys.push_back(key);

    GridResult result;
    result.objective = objective;
    std::vector<std::size_t> at(keys.size(), 0);
    for (bool done = false; !done;) {
        FsOverrides point;
        for (std::size_t i = 0; i < keys.size(); ++i) point[keys[i]] = grid.at(keys[i])[at[i]];

        EvalConfig run_cfg = cfg;
        run_cfg.include_baseline = false;
        FsOverrides merged = point;
        if (const auto it = cfg.overrides.find(method); it != cfg.overrides.end())
            merged.insert(it->second.begin(), it->second.end());  // grid point wins
        run_cfg.overrides[method] = merged;

        const EvalReport report = evaluate_pipeline(raw, {method}, run_cfg);
        const double score = report.methods.front().mean.at(objective);
        result.table.push_back({point, score});
        if (result.table.size() == 1 || score > result.best_score) {
            result.best = point;
            result.best_score = score;
        }

        // odometer over the value lists, last key fastest
        done = true;
        for (std::size_t i = keys.size(); i-- > 0;) {
            if (++at[i] < grid.at(keys[i]).size()) {
                done = false;
                break;
            }
            at[i] = 0;
        }
    }
    return result;
}

}  // namespace aptfs
