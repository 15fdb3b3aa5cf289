#pragma once

#include <cstdint>

#include "aptfs/dataset.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

enum class EliminatorKind {
    forest,  // impurity importance from the in-repo random forest
    linear,  // one-vs-all ridge regression; importance = sum of |coefficients|
};

struct EliminatorConfig {
    EliminatorKind kind = EliminatorKind::forest;
    std::size_t n_trees = 50;
    std::size_t features_per_split = 0;  // 0 = round(sqrt(surviving))
    std::size_t max_depth = 0;
    double ridge_lambda = 1e-3;
};

struct RfeConfig {
    double step_fraction = 0.1;
    std::size_t k_select = 110;
    EliminatorConfig eliminator;
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;
};

/// Surviving-count sequence of recursive elimination, starting at d and ending
/// exactly at k_select: each round removes max(1, floor(step_fraction *
/// surviving)), truncated by the final step.
std::vector<std::size_t> rfe_schedule(std::size_t d, double step_fraction, std::size_t k_select);

/// Recursive feature elimination. Each round refits the eliminator on the
/// survivors and drops the lowest-importance ones (ties drop the higher index
/// first). Scores hold the elimination round; survivors score one past the
/// last round, so later-surviving features rank higher.
SelectionResult rfe(const Dataset& train, const RfeConfig& cfg = {});

}  // namespace aptfs
