#include "aptfs/knn.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aptfs/error.hpp"
#include "aptfs/parallel.hpp"

namespace aptfs {

KnnModel fit_knn(const Dataset& train, std::size_t k) {
    if (k < 1 || k > train.n_samples())
        throw ConfigError("fit_knn: k must be in [1, n_train], got k=" + std::to_string(k) +
                          " with n_train=" + std::to_string(train.n_samples()));
    return {train.X, train.y, k};
}

int knn_predict(const KnnModel& model, std::span<const double> x) {
    const std::size_t n = model.X.rows;
    const std::size_t d = model.X.cols;
    if (x.size() != d)
        throw DataError("knn_predict: query has " + std::to_string(x.size()) +
                        " features, model expects " + std::to_string(d));

    std::vector<std::pair<double, std::uint32_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = model.X.row(i);
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - row[j];
            sq += diff * diff;
        }
        dist[i] = {sq, static_cast<std::uint32_t>(i)};
    }
    // (distance, index) ordering makes the k-boundary cut deterministic.
    const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(model.k);
    std::nth_element(dist.begin(), kth - 1, dist.end());
    std::sort(dist.begin(), kth);

    struct Tally {
        std::size_t count = 0;
        double dist_sum = 0.0;
    };
    std::map<int, Tally> votes;
    for (std::size_t i = 0; i < model.k; ++i) {
        Tally& t = votes[model.y[dist[i].second]];
        t.count++;
        t.dist_sum += std::sqrt(dist[i].first);
    }
    int best_label = 0;
    Tally best{0, 0.0};
    // Ascending label order plus strict comparisons: residual ties keep the
    // smaller label.
    for (const auto& [label, t] : votes) {
        if (t.count > best.count || (t.count == best.count && t.dist_sum < best.dist_sum)) {
            best = t;
            best_label = label;
        }
    }
    return best_label;
}

std::vector<int> knn_predict(const KnnModel& model, const Matrix& X, std::size_t n_threads) {
    if (X.cols != model.X.cols)
        throw DataError("knn_predict: query matrix has " + std::to_string(X.cols) +
                        " features, model expects " + std::to_string(model.X.cols));
    std::vector<int> out(X.rows);
    parallel_for(0, X.rows, n_threads,
                 [&](std::size_t i) { out[i] = knn_predict(model, {X.row(i), X.cols}); });
    return out;
}

}  // namespace aptfs
