#include "aptfs/relieff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "aptfs/error.hpp"
#include "aptfs/mutual_info.hpp"
#include "aptfs/parallel.hpp"
#include "aptfs/rng.hpp"

namespace aptfs {

SelectionResult relieff(const Dataset& train, const RelieffConfig& cfg) {
    const std::size_t n = train.n_samples();
    const std::size_t d = train.n_features();
    if (cfg.k_neighbors < 1) throw ConfigError("relieff: k_neighbors must be >= 1");
    if (cfg.k_select > d)
        throw ConfigError("relieff: k_select = " + std::to_string(cfg.k_select) + " exceeds d = " +
                          std::to_string(d));
    for (double v : train.X.data) {
        if (v < 0.0 || v > 1.0)
            throw DataError("relieff: expects [0,1]-scaled features, found value " +
                            std::to_string(v));
    }

    std::size_t n_classes = 0;
    const std::vector<int> codes = dense_codes(train.y, n_classes);
    std::vector<std::vector<std::uint32_t>> members(n_classes);
    for (std::size_t i = 0; i < n; ++i)
        members[static_cast<std::size_t>(codes[i])].push_back(static_cast<std::uint32_t>(i));
    std::vector<double> prior(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c)
        prior[c] = static_cast<double>(members[c].size()) / static_cast<double>(n);

    std::size_t m = cfg.n_iterations > 0 ? cfg.n_iterations : std::min<std::size_t>(n, 1000);
    std::vector<std::uint32_t> targets;
    bool sampled = false;
    if (m >= n) {
        m = n;
        targets.resize(n);
        std::iota(targets.begin(), targets.end(), 0);
    } else {
        sampled = true;
        Rng rng(cfg.seed);
        for (std::size_t i : rng.sample_without_replacement(n, m))
            targets.push_back(static_cast<std::uint32_t>(i));
    }

    std::atomic<std::size_t> hit_fallbacks{0};
    std::atomic<std::size_t> miss_fallbacks{0};
    std::vector<double> weights(d, 0.0);

    // Block-wise iteration deltas, reduced in iteration order so the result
    // is identical for every thread count.
    constexpr std::size_t kBlock = 256;
    Matrix deltas(std::min(kBlock, m), d);
    for (std::size_t base = 0; base < m; base += kBlock) {
        const std::size_t hi = std::min(base + kBlock, m);
        std::fill(deltas.data.begin(), deltas.data.end(), 0.0);

        parallel_for(base, hi, cfg.n_threads, [&](std::size_t it) {
            const std::uint32_t r = targets[it];
            const double* xr = train.X.row(r);
            double* delta = deltas.row(it - base);

            std::vector<double> dist(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double* xi = train.X.row(i);
                double s = 0.0;
                for (std::size_t f = 0; f < d; ++f) s += std::fabs(xr[f] - xi[f]);
                dist[i] = s;
            }

            const auto cls = static_cast<std::size_t>(codes[r]);
            std::vector<std::pair<double, std::uint32_t>> cand;
            bool short_hits = false, short_misses = false;
            for (std::size_t c = 0; c < n_classes; ++c) {
                cand.clear();
                for (std::uint32_t i : members[c]) {
                    if (i == r) continue;
                    cand.emplace_back(dist[i], i);
                }
                const std::size_t take = std::min(cand.size(), cfg.k_neighbors);
                if (take < cfg.k_neighbors) (c == cls ? short_hits : short_misses) = true;
                if (take == 0) continue;
                std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take),
                                  cand.end());

                // Hits pull shared-variation features down; misses push
                // separating features up, weighted by the miss class prior.
                const double coef = c == cls
                                        ? -1.0 / (static_cast<double>(m) * static_cast<double>(take))
                                        : prior[c] / (1.0 - prior[cls]) /
                                              (static_cast<double>(m) * static_cast<double>(take));
                for (std::size_t t = 0; t < take; ++t) {
                    const double* xn = train.X.row(cand[t].second);
                    for (std::size_t f = 0; f < d; ++f) delta[f] += coef * std::fabs(xr[f] - xn[f]);
                }
            }
            if (short_hits) hit_fallbacks.fetch_add(1, std::memory_order_relaxed);
            if (short_misses) miss_fallbacks.fetch_add(1, std::memory_order_relaxed);
        });

        for (std::size_t it = base; it < hi; ++it) {
            const double* delta = deltas.row(it - base);
            for (std::size_t f = 0; f < d; ++f) weights[f] += delta[f];
        }
    }

    SelectionResult result;
    result.method = FsMethod::relieff;
    result.scores = std::move(weights);
    result.k = cfg.k_select;
    result.seed = cfg.seed;
    result.selected = top_k_by_score(result.scores, cfg.k_select);
    result.params["k_neighbors"] = std::to_string(cfg.k_neighbors);
    result.params["n_iterations"] = std::to_string(m);
    result.params["sampling"] = sampled ? "without_replacement" : "all_instances";
    result.params["distance"] = "manhattan";
    result.params["hit_fallbacks"] = std::to_string(hit_fallbacks.load());
    result.params["miss_fallbacks"] = std::to_string(miss_fallbacks.load());
    return result;
}

}  // namespace aptfs
