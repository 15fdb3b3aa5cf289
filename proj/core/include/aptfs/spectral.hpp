#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aptfs/dataset.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

enum class GraphKind {
    class_block,  // W_ij = 1/n_c when i and j share class c (self-edges included)
    rbf_knn,      // Gaussian similarities, symmetric k-NN sparsified
};

struct GraphParams {
    GraphKind kind = GraphKind::class_block;
    double sigma = 0.0;   // rbf_knn: 0 = median pairwise Euclidean distance
    std::size_t knn = 5;  // rbf_knn: neighbors kept per row (symmetric union)
};

/// Smoothness score phi(f) = f_hat' L f_hat per feature on an explicit
/// similarity graph, where L is the normalized Laplacian and
/// f_hat = D^(1/2) f / ||D^(1/2) f||. Zero-degree vertices are dropped and
/// reported through removed_vertices. Constant features (on the surviving
/// vertices) score 2.0, above the attainable range [0, 1], marking them worst.
std::vector<double> spectral_phi(const Matrix& X, const Matrix& W,
                                 std::vector<std::size_t>* removed_vertices = nullptr);

/// Spectral feature selection: smaller phi = smoother on the graph = better;
/// scores hold -phi so descending score order is uniform across methods.
SelectionResult spectral_fs(const Dataset& train, const GraphParams& graph, std::size_t k_select);

}  // namespace aptfs
