#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aptfs/dataset.hpp"

namespace aptfs {

struct KnnModel {
    Matrix X;
    std::vector<int> y;
    std::size_t k = 5;
};

/// Stores the training data; k must satisfy 1 <= k <= n_train.
KnnModel fit_knn(const Dataset& train, std::size_t k = 5);

/// Majority label among the k nearest training rows by Euclidean distance.
/// Vote ties resolve to the class with the smaller summed distance, then the
/// smaller label; distance ties at the k-boundary keep the smaller train index.
int knn_predict(const KnnModel& model, std::span<const double> x);
std::vector<int> knn_predict(const KnnModel& model, const Matrix& X, std::size_t n_threads = 1);

}  // namespace aptfs
