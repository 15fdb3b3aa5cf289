#pragma once

#include <cstdint>

#include "aptfs/dataset.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

struct MifsConfig {
    double beta = 0.5;
    std::size_t bins = 10;
    std::size_t k_select = 110;
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;
};

/// Greedy forward selection maximizing I(f;y) - beta * sum_{s in S} I(f;s).
/// Scores record the objective at each feature's addition step; unselected
/// features sit one unit below the lowest selected score.
SelectionResult mifs(const Dataset& train, const MifsConfig& cfg = {});

struct GdsConfig {
    std::size_t bins = 10;
    std::size_t k_select = 110;
    std::size_t probe_budget = 256;  // candidates examined per step
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;
};

/// Greedy conditional-gain selection: each step probes a random candidate
/// subset and adds the feature maximizing max(0, I(f;y) - max_{s in S} I(f;s)).
/// A greedy surrogate standing in for a learned dynamic-selection policy; the
/// substitution is recorded in params and carried into every report.
SelectionResult gds(const Dataset& train, const GdsConfig& cfg = {});

}  // namespace aptfs
