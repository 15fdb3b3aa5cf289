#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "aptfs/dataset.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

/// Method-specific knobs as text, the way they arrive from a command line
/// ("epochs=30"). Unknown keys are rejected with the valid set named.
using FsOverrides = std::map<std::string, std::string>;

struct FsOptions {
    std::size_t k_select = 110;
    std::uint64_t seed = 0;
    std::size_t n_threads = 1;
    FsOverrides overrides;
};

/// Runs one selection method on raw (unscaled) data: fits the min-max scaler
/// on it, runs the method in scaled space, and maps the outcome back to
/// original feature indices. Features the scaler drops as constant re-enter
/// only as lowest-score padding when fewer than k_select survive, so the
/// selection budget holds on any dataset with d >= k_select.
SelectionResult run_selection(FsMethod method, const Dataset& raw, const FsOptions& opts);

}  // namespace aptfs
