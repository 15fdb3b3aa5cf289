#include "aptfs/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "aptfs/error.hpp"
#include "aptfs/mutual_info.hpp"
#include "aptfs/parallel.hpp"

namespace aptfs {

std::vector<double> spectral_phi(const Matrix& X, const Matrix& W,
                                 std::vector<std::size_t>* removed_vertices) {
    const std::size_t n = X.rows;
    if (W.rows != n || W.cols != n)
        throw DataError("spectral_phi: graph is " + std::to_string(W.rows) + "x" +
                        std::to_string(W.cols) + " but data has " + std::to_string(n) + " rows");

    std::vector<double> degree(n, 0.0);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) degree[i] += W(i, j);
        if (degree[i] > 0.0) {
            kept.push_back(i);
        } else if (removed_vertices) {
            removed_vertices->push_back(i);
        }
    }
    if (kept.size() < 2) throw DataError("spectral_phi: fewer than 2 connected vertices");

    std::vector<double> phi(X.cols);
    for (std::size_t f = 0; f < X.cols; ++f) {
        double lo = X(kept[0], f), hi = lo;
        double den = 0.0;
        for (std::size_t i : kept) {
            const double v = X(i, f);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            den += degree[i] * v * v;
        }
        if (lo == hi) {  // constant on the graph: smoothness is vacuous
            phi[f] = 2.0;
            continue;
        }
        double num = 0.0;
        for (std::size_t i : kept) {
            double acc = 0.0;
            for (std::size_t j : kept) acc += W(i, j) * X(j, f);
            num += X(i, f) * acc;
        }
        phi[f] = 1.0 - num / den;
    }
    return phi;
}

namespace {

std::vector<double> class_block_phi(const Dataset& train, std::size_t n_threads) {
    const std::size_t n = train.n_samples();
    const std::size_t d = train.n_features();
    std::size_t n_classes = 0;
    const std::vector<int> codes = dense_codes(train.y, n_classes);
    std::vector<double> class_size(n_classes, 0.0);
    for (int c : codes) class_size[static_cast<std::size_t>(c)] += 1.0;

    // Block graph with self-edges: every degree is exactly 1, so
    // phi(f) = 1 - sum_c (sum_{i in c} f_i)^2 / (n_c ||f||^2).
    std::vector<double> phi(d);
    parallel_for(0, d, n_threads, [&](std::size_t f) {
        std::vector<double> sums(n_classes, 0.0);
        double norm = 0.0;
        double lo = train.X(0, f), hi = lo;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = train.X(i, f);
            sums[static_cast<std::size_t>(codes[i])] += v;
            norm += v * v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo == hi) {
            phi[f] = 2.0;
            return;
        }
        double smooth = 0.0;
        for (std::size_t c = 0; c < n_classes; ++c) smooth += sums[c] * sums[c] / class_size[c];
        phi[f] = 1.0 - smooth / norm;
    });
    return phi;
}

Matrix rbf_knn_graph(const Matrix& X, double sigma, std::size_t knn, double& sigma_out) {
    const std::size_t n = X.rows;
    Matrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sq = 0.0;
            for (std::size_t f = 0; f < X.cols; ++f) {
                const double diff = X(i, f) - X(j, f);
                sq += diff * diff;
            }
            const double e = std::sqrt(sq);
            dist(i, j) = e;
            dist(j, i) = e;
        }
    }
    if (sigma <= 0.0) {
        std::vector<double> all;
        all.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) all.push_back(dist(i, j));
        const auto mid = all.begin() + static_cast<std::ptrdiff_t>((all.size() - 1) / 2);
        std::nth_element(all.begin(), mid, all.end());
        sigma = *mid;
        if (sigma == 0.0) sigma = 1.0;  // all rows identical; any finite width works
    }
    sigma_out = sigma;

    // Symmetric k-NN mask: an edge survives if either endpoint ranks it.
    Matrix mask(n, n);
    std::vector<std::pair<double, std::uint32_t>> order(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t at = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) order[at++] = {dist(i, j), static_cast<std::uint32_t>(j)};
        }
        const std::size_t take = std::min(knn, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                          order.end());
        for (std::size_t t = 0; t < take; ++t) {
            mask(i, order[t].second) = 1.0;
            mask(order[t].second, i) = 1.0;
        }
    }

    Matrix W(n, n);
    const double denom = 2.0 * sigma * sigma;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && mask(i, j) > 0.0) W(i, j) = std::exp(-dist(i, j) * dist(i, j) / denom);
        }
    }
    return W;
}

}  // namespace

SelectionResult spectral_fs(const Dataset& train, const GraphParams& graph, std::size_t k_select) {
    const std::size_t n = train.n_samples();
    const std::size_t d = train.n_features();
    if (n < 3) throw DataError("spectral_fs: need at least 3 samples, got " + std::to_string(n));
    if (k_select > d)
        throw ConfigError("spectral_fs: k_select = " + std::to_string(k_select) + " exceeds d = " +
                          std::to_string(d));
    for (double v : train.X.data) {
        if (v < 0.0 || v > 1.0)
            throw DataError("spectral_fs: expects [0,1]-scaled features, found value " +
                            std::to_string(v));
    }

    SelectionResult result;
    result.method = FsMethod::sfs;
    result.k = k_select;
    result.seed = 0;
    result.params["ranking"] = "laplacian_quadratic_form";

    std::vector<double> phi;
    if (graph.kind == GraphKind::class_block) {
        phi = class_block_phi(train, 1);
        result.params["graph"] = "class_block";
        result.params["isolated_removed"] = "0";
    } else {
        double sigma_used = 0.0;
        const Matrix W = rbf_knn_graph(train.X, graph.sigma, graph.knn, sigma_used);
        std::vector<std::size_t> removed;
        phi = spectral_phi(train.X, W, &removed);
        result.params["graph"] = "rbf_knn";
        result.params["sigma"] = std::to_string(sigma_used);
        result.params["knn"] = std::to_string(graph.knn);
        result.params["isolated_removed"] = std::to_string(removed.size());
    }

    result.scores.resize(d);
    for (std::size_t f = 0; f < d; ++f) result.scores[f] = -phi[f];
    result.selected = top_k_by_score(result.scores, k_select);
    return result;
}

}  // namespace aptfs
