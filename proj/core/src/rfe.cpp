#include "aptfs/rfe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aptfs/error.hpp"
#include "aptfs/forest.hpp"
#include "aptfs/rng.hpp"

namespace aptfs {

namespace {

/// Solves A x = b for symmetric positive-definite A via Cholesky, in place.
void cholesky_solve(Matrix& a, Matrix& b) {
    const std::size_t n = a.rows;
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
        if (diag <= 0.0) throw DataError("cholesky_solve: matrix not positive definite");
        diag = std::sqrt(diag);
        a(j, j) = diag;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
            a(i, j) = v / diag;
        }
    }
    // L y = b, then L' x = y, per right-hand-side column.
    for (std::size_t c = 0; c < b.cols; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = b(i, c);
            for (std::size_t k = 0; k < i; ++k) v -= a(i, k) * b(k, c);
            b(i, c) = v / a(i, i);
        }
        for (std::size_t ii = n; ii > 0; --ii) {
            const std::size_t i = ii - 1;
            double v = b(i, c);
            for (std::size_t k = i + 1; k < n; ++k) v -= a(k, i) * b(k, c);
            b(i, c) = v / a(i, i);
        }
    }
}

std::vector<double> forest_importance(const Dataset& sub, const EliminatorConfig& el,
                                      std::uint64_t seed, std::size_t n_threads) {
    ForestConfig fc;
    fc.n_trees = el.n_trees;
    fc.features_per_split = el.features_per_split;
    fc.max_depth = el.max_depth;
    fc.seed = seed;
    fc.n_threads = n_threads;
    return fit_forest(sub, fc).importance;
}

std::vector<double> linear_importance(const Dataset& sub, const EliminatorConfig& el) {
    const std::size_t n = sub.n_samples();
    const std::size_t d = sub.n_features();

    // Standardize columns so coefficient magnitudes are comparable.
    Matrix Z(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += sub.X(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = sub.X(i, j) - mean;
            var += c * c;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        if (sd > 0.0) {
            for (std::size_t i = 0; i < n; ++i) Z(i, j) = (sub.X(i, j) - mean) / sd;
        }
    }

    const std::vector<int> classes = sub.classes();
    Matrix Y(n, classes.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(
            std::lower_bound(classes.begin(), classes.end(), sub.y[i]) - classes.begin());
        Y(i, c) = 1.0;
    }

    Matrix gram;
    matmul_tn(Z, Z, gram);
    const double ridge = el.ridge_lambda * static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) gram(j, j) += ridge;
    Matrix coef;
    matmul_tn(Z, Y, coef);
    cholesky_solve(gram, coef);

    std::vector<double> importance(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t c = 0; c < classes.size(); ++c) importance[j] += std::fabs(coef(j, c));
    }
    return importance;
}

}  // namespace

std::vector<std::size_t> rfe_schedule(std::size_t d, double step_fraction, std::size_t k_select) {
    if (!(step_fraction > 0.0 && step_fraction < 1.0))
        throw ConfigError("rfe: step_fraction must be in (0,1)");
    if (k_select < 1 || k_select > d)
        throw ConfigError("rfe: k_select must be in [1, d], got " + std::to_string(k_select) +
                          " with d = " + std::to_string(d));
    std::vector<std::size_t> counts{d};
    std::size_t cur = d;
    while (cur > k_select) {
        const auto drop = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(step_fraction * static_cast<double>(cur))));
        cur -= std::min(drop, cur - k_select);
        counts.push_back(cur);
    }
    return counts;
}

SelectionResult rfe(const Dataset& train, const RfeConfig& cfg) {
    const std::size_t d = train.n_features();
    const std::vector<std::size_t> schedule = rfe_schedule(d, cfg.step_fraction, cfg.k_select);
    if (train.classes().size() < 2)
        throw DataError("rfe: training data holds a single class; the eliminator cannot rank "
                        "features on it");

    std::vector<int> active(d);
    std::iota(active.begin(), active.end(), 0);
    std::vector<double> scores(d, 0.0);
    std::size_t round = 0;

    auto importance_of = [&](const std::vector<int>& feats) {
        const Dataset sub = subset_columns(train, feats);
        return cfg.eliminator.kind == EliminatorKind::forest
                   ? forest_importance(sub, cfg.eliminator, mix_seed(cfg.seed, round),
                                       cfg.n_threads)
                   : linear_importance(sub, cfg.eliminator);
    };

    if (schedule.size() == 1) {
        importance_of(active);  // single validation fit; nothing to eliminate
    }
    for (std::size_t r = 1; r < schedule.size(); ++r) {
        round = r;
        const std::vector<double> imp = importance_of(active);
        const std::size_t drop = active.size() - schedule[r];

        // Lowest importance goes first; ties drop the higher feature id.
        std::vector<std::size_t> order(active.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (imp[a] != imp[b]) return imp[a] < imp[b];
            return active[a] > active[b];
        });
        std::vector<char> eliminated(active.size(), 0);
        for (std::size_t t = 0; t < drop; ++t) {
            eliminated[order[t]] = 1;
            scores[static_cast<std::size_t>(active[order[t]])] = static_cast<double>(r);
        }
        std::vector<int> next;
        next.reserve(schedule[r]);
        for (std::size_t p = 0; p < active.size(); ++p) {
            if (!eliminated[p]) next.push_back(active[p]);
        }
        active = std::move(next);
    }

    const auto rounds = static_cast<double>(schedule.size() - 1);
    for (int f : active) scores[static_cast<std::size_t>(f)] = rounds + 1.0;

    SelectionResult result;
    result.method = FsMethod::rfe;
    result.k = cfg.k_select;
    result.seed = cfg.seed;
    result.scores = std::move(scores);
    result.selected = top_k_by_score(result.scores, cfg.k_select);
    result.params["step_fraction"] = std::to_string(cfg.step_fraction);
    result.params["rounds"] = std::to_string(schedule.size() - 1);
    result.params["eliminator"] =
        cfg.eliminator.kind == EliminatorKind::forest ? "forest" : "linear";
    if (cfg.eliminator.kind == EliminatorKind::forest) {
        result.params["eliminator_trees"] = std::to_string(cfg.eliminator.n_trees);
    } else {
        result.params["ridge_lambda"] = std::to_string(cfg.eliminator.ridge_lambda);
    }
    result.params["tie_rule"] = "equal importance drops the higher feature id first";
    return result;
}

}  // namespace aptfs
