#include "aptfs/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aptfs/error.hpp"

namespace aptfs {

ConsensusTally tally(const std::vector<SelectionResult>& selections) {
    if (selections.empty()) throw ConfigError("tally: no selections given");
    const std::size_t d = selections.front().scores.size();

    std::set<std::string> ids;
    for (const SelectionResult& s : selections) {
        validate_selection(s, d);
        if (!ids.insert(to_string(s.method)).second)
            throw ConfigError("tally: duplicate method '" + to_string(s.method) + "'");
        for (double v : s.scores) {
            if (!std::isfinite(v))
                throw DataError("tally: method '" + to_string(s.method) +
                                "' carries a non-finite score");
        }
    }

    ConsensusTally t;
    t.n_methods = selections.size();
    t.counts.assign(d, 0);
    t.sources.assign(d, {});
    t.mean_scores.assign(d, 0.0);

    for (const SelectionResult& s : selections) {
        const auto [lo_it, hi_it] = std::minmax_element(s.scores.begin(), s.scores.end());
        const double lo = *lo_it;
        const double span = *hi_it - lo;
        for (int idx : s.selected) {
            const std::size_t f = static_cast<std::size_t>(idx);
            // flat scoring scale carries no ranking information: neutral 0.5
            const double norm = span > 0.0 ? (s.scores[f] - lo) / span : 0.5;
            ++t.counts[f];
            t.sources[f].push_back(to_string(s.method));
            t.mean_scores[f] += norm;
        }
    }
    for (std::size_t f = 0; f < d; ++f) {
        if (t.counts[f] > 0) t.mean_scores[f] /= static_cast<double>(t.counts[f]);
        std::sort(t.sources[f].begin(), t.sources[f].end());
    }
    return t;
}

std::vector<PriorityTier> tier_partition(const ConsensusTally& tally) {
    const std::size_t d = tally.n_features();
    if (tally.sources.size() != d || tally.mean_scores.size() != d)
        throw DataError("tier_partition: tally field sizes disagree");
    for (std::size_t f = 0; f < d; ++f) {
        if (tally.counts[f] < 0 || static_cast<std::size_t>(tally.counts[f]) > tally.n_methods)
            throw DataError("tier_partition: count out of [0, M] at feature " + std::to_string(f));
        if (static_cast<std::size_t>(tally.counts[f]) != tally.sources[f].size())
            throw DataError("tier_partition: count and sources disagree at feature " +
                            std::to_string(f));
    }

    std::vector<PriorityTier> tiers(tally.n_methods + 1);
    for (std::size_t i = 0; i < tiers.size(); ++i) tiers[i].level = tally.n_methods - i;
    for (std::size_t f = 0; f < d; ++f) {
        tiers[tally.n_methods - static_cast<std::size_t>(tally.counts[f])].features.push_back(
            static_cast<int>(f));
    }
    for (PriorityTier& tier : tiers) {
        std::sort(tier.features.begin(), tier.features.end(), [&](int a, int b) {
            const double sa = tally.mean_scores[static_cast<std::size_t>(a)];
            const double sb = tally.mean_scores[static_cast<std::size_t>(b)];
            if (sa != sb) return sa > sb;
            return a < b;
        });
    }
    return tiers;
}

std::map<FeatureCategory, std::size_t> category_breakdown(const PriorityTier& tier,
                                                          const std::vector<FeatureMeta>& metas) {
    std::map<FeatureCategory, std::size_t> out;
    for (int idx : tier.features) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= metas.size())
            throw DataError("category_breakdown: feature index " + std::to_string(idx) +
                            " outside metadata range");
        ++out[metas[static_cast<std::size_t>(idx)].category];
    }
    return out;
}

}  // namespace aptfs
