#include "aptfs/forest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "aptfs/error.hpp"
#include "aptfs/mutual_info.hpp"
#include "aptfs/parallel.hpp"
#include "cart_engine.hpp"

namespace aptfs {

ForestModel fit_forest(const Dataset& train, const ForestConfig& cfg) {
    if (train.n_samples() == 0) throw DataError("fit_forest: empty training set");
    if (cfg.n_trees == 0) throw ConfigError("fit_forest: n_trees must be >= 1");

    const std::size_t n = train.n_samples();
    const std::size_t d = train.n_features();
    std::size_t mtry = cfg.features_per_split > 0
                           ? std::min(cfg.features_per_split, d)
                           : static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(d))));
    mtry = std::max<std::size_t>(mtry, 1);

    std::size_t n_classes = 0;
    const std::vector<int> codes = dense_codes(train.y, n_classes);
    const std::vector<int> labels = train.classes();

    std::vector<int> features(d);
    std::iota(features.begin(), features.end(), 0);
    const detail::Presort ps = detail::build_presort(train.X, features);

    ForestModel model;
    model.features_per_split = mtry;
    model.trees.resize(cfg.n_trees);
    model.tree_seeds.resize(cfg.n_trees);
    std::vector<std::vector<double>> tree_importance(cfg.n_trees);

    parallel_for(0, cfg.n_trees, cfg.n_threads, [&](std::size_t t) {
        Rng rng(mix_seed(cfg.seed, t));
        model.tree_seeds[t] = mix_seed(cfg.seed, t);

        std::vector<std::uint32_t> weights(n, 0);
        if (cfg.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) weights[rng.below(n)]++;
        } else {
            std::fill(weights.begin(), weights.end(), 1);
        }

        detail::GrowConfig gc;
        gc.max_depth = cfg.max_depth;
        gc.min_samples_split = cfg.min_samples_split;
        gc.features_per_split = mtry < d ? mtry : 0;
        gc.rng = &rng;
        tree_importance[t].assign(d, 0.0);
        model.trees[t] = detail::grow_tree(train.X, codes, n_classes, labels, weights, features,
                                           ps, gc, &tree_importance[t]);
    });

    // Tree-order accumulation keeps importance identical for any thread count.
    model.importance.assign(d, 0.0);
    for (const auto& imp : tree_importance) {
        for (std::size_t j = 0; j < d; ++j) model.importance[j] += imp[j];
    }
    const double total = std::accumulate(model.importance.begin(), model.importance.end(), 0.0);
    if (total > 0.0) {
        for (double& v : model.importance) v /= total;
    }
    return model;
}

int predict_forest(const ForestModel& model, std::span<const double> x) {
    std::map<int, std::size_t> votes;
    for (const auto& tree : model.trees) votes[predict_tree(*tree, x)]++;
    int best_label = 0;
    std::size_t best = 0;
    for (const auto& [label, count] : votes) {
        if (count > best) {
            best = count;
            best_label = label;
        }
    }
    return best_label;
}

std::vector<int> predict_forest(const ForestModel& model, const Matrix& X,
                                std::size_t n_threads) {
    std::vector<int> out(X.rows);
    parallel_for(0, X.rows, n_threads,
                 [&](std::size_t i) { out[i] = predict_forest(model, {X.row(i), X.cols}); });
    return out;
}

}  // namespace aptfs
