#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aptfs/consensus.hpp"
#include "aptfs/dataset.hpp"
#include "aptfs/evaluate.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

/// Schema version stamped into every structured document.
inline constexpr int kDocVersion = 1;

/// Selection document: versioned JSON with method, k, seed, params, the
/// selected indices, and the full per-feature score vector. All numbers are
/// shortest-round-trip formatted, so rendering is byte-stable and parsing is
/// exact.
std::string selection_to_text(const SelectionResult& s);
SelectionResult selection_from_text(const std::string& text);

/// Everything a combined report can carry. metas give features their names
/// and categories (may be empty when no dataset is at hand: tiers then list
/// bare indices). config is echoed verbatim. metrics is optional.
struct ReportInputs {
    ConsensusTally tally;
    std::vector<PriorityTier> tiers;
    std::vector<SelectionResult> selections;
    std::vector<FeatureMeta> metas;
    std::map<std::string, std::string> config;
    const EvalReport* metrics = nullptr;
};

/// Versioned JSON document with fixed top-level fields: version, config,
/// selections[], tally{}, tiers[], metrics{}.
std::string render_structured_report(const ReportInputs& in);

/// Plain-text tier listing: one "N. Selected" heading per populated level
/// >= 1, features named when metas are known, category totals per tier, and
/// an optional metric summary table.
std::string render_human_report(const ReportInputs& in);

struct ParsedReport {
    int version = 0;
    std::map<std::string, std::string> config;
    ConsensusTally tally;
    std::vector<PriorityTier> tiers;
    std::vector<FeatureMeta> metas;  // empty when the document carried no names
    std::optional<EvalReport> metrics;
};

/// Reads back a structured report; tally and tiers round-trip exactly.
ParsedReport parse_report(const std::string& text);

/// Plain-text metric summary table plus per-metric ranking.
std::string render_human_eval(const EvalReport& r);

/// Evaluation document: versioned JSON carrying the run config, per-method
/// per-fold metrics (including per-classifier values), box statistics, means,
/// and the per-metric ranking. Round-trips exactly.
std::string eval_report_to_text(const EvalReport& r);
EvalReport eval_report_from_text(const std::string& text);

}  // namespace aptfs
