#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "aptfs/dataset.hpp"
#include "aptfs/tree.hpp"

namespace aptfs {

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t features_per_split = 0;  // 0 = round(sqrt(d))
    std::size_t max_depth = 0;           // 0 = unlimited
    std::size_t min_samples_split = 2;
    bool bootstrap = true;
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;  // trees are independent; output identical for any value
};

struct ForestModel {
    std::vector<std::unique_ptr<TreeNode>> trees;
    std::vector<std::uint64_t> tree_seeds;
    std::size_t features_per_split = 0;
    /// Mean impurity decrease per feature (node-size weighted), normalized to
    /// sum 1 when any split occurred; all-zero otherwise.
    std::vector<double> importance;
};

/// Random forest of CART trees on bootstrap resamples, each split considering
/// features_per_split uniformly sampled candidate features.
ForestModel fit_forest(const Dataset& train, const ForestConfig& cfg = {});

/// Majority vote over trees; ties resolve to the smallest label.
int predict_forest(const ForestModel& model, std::span<const double> x);
std::vector<int> predict_forest(const ForestModel& model, const Matrix& X,
                                std::size_t n_threads = 1);

}  // namespace aptfs
