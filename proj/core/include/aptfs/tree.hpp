#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "aptfs/dataset.hpp"

namespace aptfs {

/// Gini impurity 1 - sum((n_c/n)^2) of a class-count vector.
double gini_impurity(std::span<const std::size_t> class_counts);

struct TreeConfig {
    std::size_t max_depth = 0;  // 0 = unlimited
    std::size_t min_samples_split = 2;
};

/// CART node. Internal nodes send x[feature] <= threshold left; leaves carry
/// the majority label and the (weighted) class distribution that reached them.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
    int label = 0;
    std::map<int, std::size_t> distribution;  // leaves only; sums to arrived sample count

    bool is_leaf() const { return left == nullptr; }
};

/// Greedy CART fit: exact threshold search over midpoints of consecutive
/// distinct sorted values, minimizing weighted child Gini. An impure node is
/// split whenever any candidate threshold exists, even at zero Gini gain;
/// recursion stops on purity, depth, min_samples_split, or indistinguishable
/// rows. Leaf majority ties resolve to the smallest label.
std::unique_ptr<TreeNode> fit_tree(const Dataset& train, const TreeConfig& cfg = {});

int predict_tree(const TreeNode& root, std::span<const double> x);
std::vector<int> predict_tree(const TreeNode& root, const Matrix& X);

}  // namespace aptfs
