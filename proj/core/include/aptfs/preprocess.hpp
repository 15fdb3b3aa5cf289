#pragma once

#include <cstddef>
#include <vector>

#include "aptfs/dataset.hpp"

namespace aptfs {

/// Per-feature min-max statistics fitted on training rows. Constant features
/// (min == max on the fitting data) are dropped by apply(); kept_features maps
/// scaled-space column j back to the original feature index.
struct Scaler {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<std::size_t> kept_features;

    /// Scaled values on unseen data are clamped to [-clamp_lo, 1 + clamp_hi]
    /// so test-time outliers cannot dominate distance computations.
    static constexpr double kClampLo = -0.5;
    static constexpr double kClampHi = 1.5;

    std::size_t original_dim() const { return min.size(); }
    std::size_t kept_dim() const { return kept_features.size(); }

    /// Original index of scaled-space column j.
    std::size_t to_original(std::size_t j) const { return kept_features[j]; }
};

Scaler fit_scaler(const Dataset& train);

/// Maps kept features through (x - min) / (max - min), clamped to
/// [-0.5, 1.5]; dropped features are removed from the matrix and metas.
Dataset apply_scaler(const Scaler& scaler, const Dataset& data);

}  // namespace aptfs
