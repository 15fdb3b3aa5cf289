#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aptfs {

/// Plug-in mutual information estimate in bits.
struct MIEstimate {
    double value = 0.0;   // >= 0
    std::size_t bins = 0; // bins actually used for x
    std::size_t n = 0;    // sample count
};

/// Equal-width discretization over [min(x), max(x)]. Features with at most
/// two distinct values pass through as identity bins. Constant input maps to
/// a single bin. Returns bin indices in [0, actual_bins).
std::vector<int> equal_width_bins(std::span<const double> x, std::size_t bins,
                                  std::size_t& actual_bins);

/// Maps arbitrary integer labels to dense codes 0..k-1 (ascending label order).
std::vector<int> dense_codes(std::span<const int> labels, std::size_t& cardinality);

/// MI of two already-discretized sequences, by direct summation of
/// p(a,b) * log2(p(a,b) / (p(a) p(b))) over non-empty cells.
double discrete_mi_bits(std::span<const int> a, std::size_t a_card, std::span<const int> b,
                        std::size_t b_card);

/// Entropy (bits) of a discretized sequence.
double discrete_entropy_bits(std::span<const int> a, std::size_t a_card);

/// Feature-vs-label MI: discretizes x into equal-width bins and computes the
/// plug-in estimate. Constant x yields exactly 0.
MIEstimate mutual_information(std::span<const double> x, std::span<const int> y, std::size_t bins);

}  // namespace aptfs
