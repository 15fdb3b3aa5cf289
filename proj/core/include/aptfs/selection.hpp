#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace aptfs {

enum class FsMethod { relieff, sfs, rfe, mi, gds, cae, cfmi };

constexpr std::size_t kNumFsMethods = 7;

std::string to_string(FsMethod m);
FsMethod fs_method_from_string(const std::string& s);
/// All methods in enum order.
const std::vector<FsMethod>& all_fs_methods();

/// Outcome of one feature-selection run on one training set.
struct SelectionResult {
    FsMethod method = FsMethod::mi;
    std::vector<int> selected;    // k original-feature indices, descending score, ties ascending
    std::vector<double> scores;   // one score per original feature (all d)
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;  // every knob that shaped the run
};

/// Throws DataError unless: |selected| == k, indices unique and in [0, d),
/// scores has size d, and selected is ordered by (descending score, ascending
/// index).
void validate_selection(const SelectionResult& result, std::size_t d);

/// Indices of the k largest scores, ties broken by ascending index.
std::vector<int> top_k_by_score(const std::vector<double>& scores, std::size_t k);

/// Reorders an index list by (descending score, ascending index) — the
/// canonical SelectionResult ordering.
void sort_by_score(std::vector<int>& indices, const std::vector<double>& scores);

}  // namespace aptfs
