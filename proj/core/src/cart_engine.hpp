#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "aptfs/matrix.hpp"
#include "aptfs/rng.hpp"
#include "aptfs/tree.hpp"

namespace aptfs::detail {

/// Row orderings per feature, sorted by (value, row). Built once per matrix
/// and shared by every tree grown on it; order[i] corresponds to features[i]
/// as passed to build_presort.
struct Presort {
    std::vector<std::vector<std::uint32_t>> order;
};

Presort build_presort(const Matrix& X, const std::vector<int>& features);

struct GrowConfig {
    std::size_t max_depth = 0;           // 0 = unlimited
    std::size_t min_samples_split = 2;   // weighted count threshold
    std::size_t features_per_split = 0;  // 0 = all features
    Rng* rng = nullptr;                  // required when features_per_split > 0
};

/// Grows one CART tree over the rows with weight > 0, where weights are
/// bootstrap multiplicities. y holds dense class codes 0..C-1 and
/// code_to_label maps them back (ascending label order, so majority ties
/// resolve to the smallest label by scan order). Split ties resolve to the
/// lowest feature id, then the lowest threshold. When importance is non-null
/// (size X.cols), each split adds its impurity decrease divided by the root
/// weight to the split feature's slot.
std::unique_ptr<TreeNode> grow_tree(const Matrix& X, const std::vector<int>& y,
                                    std::size_t n_classes, const std::vector<int>& code_to_label,
                                    const std::vector<std::uint32_t>& weights,
                                    const std::vector<int>& features, const Presort& presort,
                                    const GrowConfig& cfg, std::vector<double>* importance);

}  // namespace aptfs::detail
