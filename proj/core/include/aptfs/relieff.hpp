#pragma once

#include <cstdint>

#include "aptfs/dataset.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

struct RelieffConfig {
    std::size_t k_neighbors = 10;
    std::size_t n_iterations = 0;  // 0 = min(n, 1000)
    std::size_t k_select = 110;
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;
};

/// Multiclass ReliefF on [0,1]-scaled data. Each sampled instance pulls
/// weights down by the mean per-feature distance to its k nearest same-class
/// hits and up by the prior-weighted mean distance to the k nearest misses of
/// every other class; distances are Manhattan. Classes too small to supply k
/// neighbors fall back to the available ones (counted in params).
SelectionResult relieff(const Dataset& train, const RelieffConfig& cfg = {});

}  // namespace aptfs
