#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aptfs/dataset.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

/// Class populations of the reference corpus: 15 APT campaigns (labels 1..15)
/// plus commodity malware (label 16), totalling 11107 samples.
const std::vector<std::size_t>& reference_populations();

/// Apportions n samples across the reference class proportions by largest
/// remainder, so the counts sum to exactly n. n == 11107 reproduces the
/// reference populations exactly.
std::vector<std::size_t> proportional_populations(std::size_t n);

/// Recipe for a ground-truth benchmark dataset. Empty class_populations means
/// "proportional to the reference corpus".
struct SynthSpec {
    std::size_t n_samples = 11107;
    std::size_t n_features = 500;
    std::size_t n_informative = 10;
    std::size_t n_redundant = 20;
    std::vector<std::size_t> class_populations;
    double binary_fraction = 0.25;  // share of features that are 0/1 indicators
    double noise_level = 0.05;      // noise added to redundant copies
    std::uint64_t seed = 0;
};

/// Which features carry signal: the planted informative set and the mapping
/// from each redundant copy to its informative source.
struct GroundTruth {
    std::vector<int> informative;
    std::map<int, int> redundant;
};

/// Generates a labelled dataset with planted signal.
///
/// Informative features are numeric: class-conditional means on a grid of
/// levels 1.5 within-class standard deviations apart, level-to-class
/// assignment permuted per feature. The 0/1 indicator budget
/// (round(binary_fraction * d)) is filled from the class-independent noise
/// features first — their rates are drawn from U[0.02, 0.10], mimicking rare
/// import flags — and spills into informative features (two class groups with
/// rates 0.45 apart) only when the budget exceeds the noise count. Redundant
/// features are affine copies of informative ones plus noise_level-scaled
/// Gaussian noise; with noise_level == 0 they correlate exactly +/-1 with
/// their source. Deterministic under spec.seed.
std::pair<Dataset, GroundTruth> generate(const SynthSpec& spec);

/// Fraction of informative sources covered by the selection; a redundant copy
/// credits its source, each source at most once. Throws on an empty
/// informative set.
double recovery_at_k(const SelectionResult& selection, const GroundTruth& truth);

/// Truth sidecar round-trip (structured text document).
void write_truth(const GroundTruth& truth, const std::string& path);
GroundTruth load_truth(const std::string& path);

}  // namespace aptfs
