#include "aptfs/selection.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "aptfs/error.hpp"

namespace aptfs {

std::string to_string(FsMethod m) {
    switch (m) {
        case FsMethod::relieff: return "relieff";
        case FsMethod::sfs: return "sfs";
        case FsMethod::rfe: return "rfe";
        case FsMethod::mi: return "mi";
        case FsMethod::gds: return "gds";
        case FsMethod::cae: return "cae";
        case FsMethod::cfmi: return "cfmi";
    }
    throw ConfigError("to_string: invalid FsMethod value");
}

FsMethod fs_method_from_string(const std::string& s) {
    for (FsMethod m : all_fs_methods()) {
        if (to_string(m) == s) return m;
    }
    throw ConfigError("unknown feature-selection method '" + s +
                      "' (expected one of: relieff, sfs, rfe, mi, gds, cae, cfmi)");
}

const std::vector<FsMethod>& all_fs_methods() {
    static const std::vector<FsMethod> methods = {
        FsMethod::relieff, FsMethod::sfs, FsMethod::rfe, FsMethod::mi,
        FsMethod::gds,     FsMethod::cae, FsMethod::cfmi};
    return methods;
}

void validate_selection(const SelectionResult& result, std::size_t d) {
    if (result.scores.size() != d)
        throw DataError("selection: scores size " + std::to_string(result.scores.size()) +
                        " does not match feature count " + std::to_string(d));
    if (result.selected.size() != result.k)
        throw DataError("selection: |selected| = " + std::to_string(result.selected.size()) +
                        " but k = " + std::to_string(result.k));
    std::unordered_set<int> seen;
    for (int idx : result.selected) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= d)
            throw DataError("selection: index " + std::to_string(idx) + " out of range [0, " +
                            std::to_string(d) + ")");
        if (!seen.insert(idx).second)
            throw DataError("selection: duplicate index " + std::to_string(idx));
    }
    for (std::size_t i = 1; i < result.selected.size(); ++i) {
        const int a = result.selected[i - 1];
        const int b = result.selected[i];
        const double sa = result.scores[static_cast<std::size_t>(a)];
        const double sb = result.scores[static_cast<std::size_t>(b)];
        if (sa < sb || (sa == sb && a > b))
            throw DataError("selection: order violated at position " + std::to_string(i) +
                            " (index " + std::to_string(b) + ")");
    }
}

std::vector<int> top_k_by_score(const std::vector<double>& scores, std::size_t k) {
    if (k > scores.size())
        throw ConfigError("top_k_by_score: k = " + std::to_string(k) + " exceeds d = " +
                          std::to_string(scores.size()));
    std::vector<int> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double sa = scores[static_cast<std::size_t>(a)];
        const double sb = scores[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    idx.resize(k);
    return idx;
}

void sort_by_score(std::vector<int>& indices, const std::vector<double>& scores) {
    std::sort(indices.begin(), indices.end(), [&](int a, int b) {
        const double sa = scores[static_cast<std::size_t>(a)];
        const double sb = scores[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
}

}  // namespace aptfs
