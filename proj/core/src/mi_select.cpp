#include "aptfs/mi_select.hpp"

#include <algorithm>
#include <limits>

#include "aptfs/error.hpp"
#include "aptfs/mutual_info.hpp"
#include "aptfs/parallel.hpp"
#include "aptfs/rng.hpp"

namespace aptfs {

namespace {

struct Discretized {
    std::vector<std::vector<int>> fx;  // per-feature bin codes
    std::vector<std::size_t> card;     // per-feature bin count
    std::vector<int> yb;               // dense label codes
    std::size_t y_card = 0;
    std::vector<double> relevance;     // I(f;y) per feature
};

Discretized discretize_all(const Dataset& train, std::size_t bins, std::size_t n_threads) {
    const std::size_t n = train.n_samples();
    const std::size_t d = train.n_features();
    if (n < 2) throw DataError("mi selection: need at least 2 samples");
    if (bins < 2) throw ConfigError("mi selection: bins must be >= 2");

    Discretized out;
    out.fx.resize(d);
    out.card.resize(d);
    out.relevance.resize(d);
    out.yb = dense_codes(train.y, out.y_card);

    parallel_for(0, d, n_threads, [&](std::size_t f) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = train.X(i, f);
        out.fx[f] = equal_width_bins(col, bins, out.card[f]);
        out.relevance[f] =
            out.card[f] == 1 ? 0.0 : discrete_mi_bits(out.fx[f], out.card[f], out.yb, out.y_card);
    });
    return out;
}

/// Final SelectionResult assembly shared by mifs and gds: picked features keep
/// their step objective, everything else sits strictly below, and the selected
/// list is reordered into the canonical (descending score, ascending index).
SelectionResult assemble(FsMethod method, std::size_t d, std::size_t k,
                         const std::vector<int>& picked, const std::vector<double>& pick_score) {
    SelectionResult result;
    result.method = method;
    result.k = k;
    double lowest = 0.0;
    for (std::size_t t = 0; t < picked.size(); ++t) lowest = std::min(lowest, pick_score[t]);
    result.scores.assign(d, lowest - 1.0);
    for (std::size_t t = 0; t < picked.size(); ++t)
        result.scores[static_cast<std::size_t>(picked[t])] = pick_score[t];
    result.selected = picked;
    sort_by_score(result.selected, result.scores);
    return result;
}

}  // namespace

SelectionResult mifs(const Dataset& train, const MifsConfig& cfg) {
    const std::size_t d = train.n_features();
    if (cfg.k_select > d)
        throw ConfigError("mifs: k_select = " + std::to_string(cfg.k_select) + " exceeds d = " +
                          std::to_string(d));
    if (cfg.beta < 0.0) throw ConfigError("mifs: beta must be >= 0");

    const Discretized dz = discretize_all(train, cfg.bins, cfg.n_threads);

    std::vector<double> penalty(d, 0.0);
    std::vector<char> taken(d, 0);
    std::vector<int> picked;
    std::vector<double> pick_score;
    picked.reserve(cfg.k_select);

    for (std::size_t step = 0; step < cfg.k_select; ++step) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_f = d;
        for (std::size_t f = 0; f < d; ++f) {
            if (taken[f]) continue;
            const double obj = dz.relevance[f] - cfg.beta * penalty[f];
            if (obj > best) {
                best = obj;
                best_f = f;
            }
        }
        taken[best_f] = 1;
        picked.push_back(static_cast<int>(best_f));
        pick_score.push_back(best);

        if (cfg.beta > 0.0 && step + 1 < cfg.k_select) {
            parallel_for(0, d, cfg.n_threads, [&](std::size_t f) {
                if (taken[f]) return;
                penalty[f] += discrete_mi_bits(dz.fx[f], dz.card[f], dz.fx[best_f],
                                               dz.card[best_f]);
            });
        }
    }

    SelectionResult result = assemble(FsMethod::mi, d, cfg.k_select, picked, pick_score);
    result.seed = cfg.seed;
    result.params["beta"] = std::to_string(cfg.beta);
    result.params["bins"] = std::to_string(cfg.bins);
    result.params["objective"] = "relevance_minus_beta_redundancy";
    return result;
}

SelectionResult gds(const Dataset& train, const GdsConfig& cfg) {
    const std::size_t d = train.n_features();
    if (cfg.k_select > d)
        throw ConfigError("gds: k_select = " + std::to_string(cfg.k_select) + " exceeds d = " +
                          std::to_string(d));
    if (cfg.probe_budget < 1) throw ConfigError("gds: probe_budget must be >= 1");

    const Discretized dz = discretize_all(train, cfg.bins, cfg.n_threads);
    Rng rng(cfg.seed);

    // max_{s in S} I(f;s), folded lazily: folded[f] counts how many picks have
    // been incorporated, so a feature probed at several steps pays for each
    // pick once over the whole run.
    std::vector<double> max_red(d, 0.0);
    std::vector<std::size_t> folded(d, 0);
    std::vector<char> taken(d, 0);
    std::vector<int> picked;
    std::vector<double> pick_score;
    std::vector<std::size_t> remaining, probe;

    for (std::size_t step = 0; step < cfg.k_select; ++step) {
        remaining.clear();
        for (std::size_t f = 0; f < d; ++f) {
            if (!taken[f]) remaining.push_back(f);
        }
        if (remaining.size() <= cfg.probe_budget) {
            probe = remaining;
        } else {
            probe.clear();
            for (std::size_t pos : rng.sample_without_replacement(remaining.size(), cfg.probe_budget))
                probe.push_back(remaining[pos]);
            std::sort(probe.begin(), probe.end());
        }

        std::vector<double> gain(probe.size());
        parallel_for(0, probe.size(), cfg.n_threads, [&](std::size_t p) {
            const std::size_t f = probe[p];
            while (folded[f] < picked.size()) {
                const auto s = static_cast<std::size_t>(picked[folded[f]]);
                max_red[f] = std::max(
                    max_red[f], discrete_mi_bits(dz.fx[f], dz.card[f], dz.fx[s], dz.card[s]));
                folded[f]++;
            }
            gain[p] = std::max(0.0, dz.relevance[f] - max_red[f]);
        });

        double best = -1.0;
        std::size_t best_f = d;
        for (std::size_t p = 0; p < probe.size(); ++p) {
            if (gain[p] > best) {
                best = gain[p];
                best_f = probe[p];
            }
        }
        taken[best_f] = 1;
        picked.push_back(static_cast<int>(best_f));
        pick_score.push_back(best);
    }

    SelectionResult result = assemble(FsMethod::gds, d, cfg.k_select, picked, pick_score);
    result.seed = cfg.seed;
    result.params["bins"] = std::to_string(cfg.bins);
    result.params["probe_budget"] = std::to_string(cfg.probe_budget);
    result.params["objective"] = "greedy_conditional_gain";
    result.params["surrogate"] =
        "greedy information-gain proxy standing in for a learned dynamic-selection policy";
    return result;
}

}  // namespace aptfs
