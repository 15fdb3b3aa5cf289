#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "aptfs/dataset.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

/// Vote tally across feature-selection methods: how many methods picked each
/// feature, which ones, and the feature's mean min-max normalized score among
/// the methods that picked it.
struct ConsensusTally {
    std::vector<int> counts;                        // per feature, in [0, n_methods]
    std::vector<std::vector<std::string>> sources;  // per feature, method ids sorted lexically
    std::vector<double> mean_scores;                // 0.0 where counts == 0
    std::size_t n_methods = 0;

    std::size_t n_features() const { return counts.size(); }
};

/// Counts votes. All selections must cover the same feature space and carry
/// distinct method ids; every score must be finite. Sources are stored sorted,
/// so the result is independent of input order.
ConsensusTally tally(const std::vector<SelectionResult>& selections);

/// Features selected by exactly `level` of the methods. Ordered by descending
/// mean normalized score, ties by ascending index.
struct PriorityTier {
    std::size_t level = 0;
    std::vector<int> features;
};

/// Splits features into tiers n_methods down to 0 (every level present, some
/// possibly empty). The tiers partition the feature set.
std::vector<PriorityTier> tier_partition(const ConsensusTally& tally);

/// Category counts of a tier's features; values sum to |tier.features|.
std::map<FeatureCategory, std::size_t> category_breakdown(const PriorityTier& tier,
                                                          const std::vector<FeatureMeta>& metas);

}  // namespace aptfs
