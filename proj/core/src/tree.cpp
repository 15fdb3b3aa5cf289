#include "aptfs/tree.hpp"

#include <numeric>

#include "aptfs/error.hpp"
#include "aptfs/mutual_info.hpp"
#include "cart_engine.hpp"

namespace aptfs {

double gini_impurity(std::span<const std::size_t> class_counts) {
    std::uint64_t n = 0, s = 0;
    for (std::size_t c : class_counts) {
        n += c;
        s += static_cast<std::uint64_t>(c) * c;
    }
    if (n == 0) throw DataError("gini_impurity: all-zero class counts");
    const auto nd = static_cast<double>(n);
    return 1.0 - static_cast<double>(s) / (nd * nd);
}

std::unique_ptr<TreeNode> fit_tree(const Dataset& train, const TreeConfig& cfg) {
    if (train.n_samples() == 0) throw DataError("fit_tree: empty training set");

    std::size_t n_classes = 0;
    const std::vector<int> codes = dense_codes(train.y, n_classes);
    const std::vector<int> labels = train.classes();

    std::vector<int> features(train.n_features());
    std::iota(features.begin(), features.end(), 0);
    const detail::Presort ps = detail::build_presort(train.X, features);
    const std::vector<std::uint32_t> weights(train.n_samples(), 1);

    detail::GrowConfig gc;
    gc.max_depth = cfg.max_depth;
    gc.min_samples_split = cfg.min_samples_split;
    return detail::grow_tree(train.X, codes, n_classes, labels, weights, features, ps, gc,
                             nullptr);
}

int predict_tree(const TreeNode& root, std::span<const double> x) {
    const TreeNode* node = &root;
    while (!node->is_leaf()) {
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left.get()
                                                                             : node->right.get();
    }
    return node->label;
}

std::vector<int> predict_tree(const TreeNode& root, const Matrix& X) {
    std::vector<int> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) out[i] = predict_tree(root, {X.row(i), X.cols});
    return out;
}

}  // namespace aptfs
