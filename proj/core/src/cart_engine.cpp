#include "cart_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aptfs::detail {

Presort build_presort(const Matrix& X, const std::vector<int>& features) {
    Presort ps;
    ps.order.resize(features.size());
    for (std::size_t p = 0; p < features.size(); ++p) {
        auto& ord = ps.order[p];
        ord.resize(X.rows);
        for (std::uint32_t i = 0; i < X.rows; ++i) ord[i] = i;
        const int fid = features[p];
        std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double va = X(a, static_cast<std::size_t>(fid));
            const double vb = X(b, static_cast<std::size_t>(fid));
            if (va != vb) return va < vb;
            return a < b;
        });
    }
    return ps;
}

namespace {

// Midpoint that always lands in [lo, hi): adjacent doubles can round the
// midpoint up to hi, which would send both values left.
double split_threshold(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return mid < hi ? mid : lo;
}

struct Frame {
    TreeNode* node;
    std::size_t lo, hi;
    std::size_t depth;
};

void fill_leaf(TreeNode& node, const std::vector<std::uint64_t>& counts,
               const std::vector<int>& code_to_label) {
    std::uint64_t best = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        node.distribution.emplace(code_to_label[c], static_cast<std::size_t>(counts[c]));
        if (counts[c] > best) {
            best = counts[c];
            node.label = code_to_label[c];
        }
    }
}

}  // namespace

std::unique_ptr<TreeNode> grow_tree(const Matrix& X, const std::vector<int>& y,
                                    std::size_t n_classes, const std::vector<int>& code_to_label,
                                    const std::vector<std::uint32_t>& weights,
                                    const std::vector<int>& features, const Presort& presort,
                                    const GrowConfig& cfg, std::vector<double>* importance) {
    const std::size_t af = features.size();
    std::size_t m = 0;
    for (std::uint32_t w : weights) m += w > 0 ? 1 : 0;

    // Per-feature row lists, kept sorted by feature value within every node
    // range by stable partitioning on each split.
    std::vector<std::uint32_t> work(af * m);
    for (std::size_t p = 0; p < af; ++p) {
        std::size_t at = p * m;
        for (std::uint32_t row : presort.order[p]) {
            if (weights[row] > 0) work[at++] = row;
        }
    }
    std::vector<std::uint32_t> aux(m);
    std::vector<std::uint8_t> goes_left(X.rows, 0);
    std::vector<std::uint64_t> tot(n_classes), left(n_classes);

    double root_weight = 0.0;
    {
        std::uint64_t rw = 0;
        for (std::uint32_t w : weights) rw += w;
        root_weight = static_cast<double>(rw);
    }

    auto root = std::make_unique<TreeNode>();
    std::vector<Frame> stack{{root.get(), 0, m, 0}};
    std::vector<std::size_t> sampled;

    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();

        std::fill(tot.begin(), tot.end(), 0);
        std::uint64_t node_w = 0;
        for (std::size_t r = fr.lo; r < fr.hi; ++r) {
            const std::uint32_t row = work[r];  // feature 0's list; any list holds the same rows
            tot[static_cast<std::size_t>(y[row])] += weights[row];
            node_w += weights[row];
        }
        std::uint64_t s_tot = 0;
        std::size_t present = 0;
        for (std::uint64_t c : tot) {
            s_tot += c * c;
            present += c > 0 ? 1 : 0;
        }

        const bool depth_capped = cfg.max_depth > 0 && fr.depth >= cfg.max_depth;
        if (present <= 1 || node_w < cfg.min_samples_split || depth_capped) {
            fill_leaf(*fr.node, tot, code_to_label);
            continue;
        }

        // Candidate features for this node, ascending so equal-impurity ties
        // resolve to the lowest feature id, then the lowest threshold.
        std::size_t n_cand = af;
        const std::size_t* cand = nullptr;
        if (cfg.features_per_split > 0 && cfg.features_per_split < af) {
            sampled = cfg.rng->sample_without_replacement(af, cfg.features_per_split);
            std::sort(sampled.begin(), sampled.end());
            cand = sampled.data();
            n_cand = sampled.size();
        }

        double best_imp = std::numeric_limits<double>::infinity();
        std::size_t best_p = af;
        double best_thr = 0.0;
        const double node_wd = static_cast<double>(node_w);

        for (std::size_t ci = 0; ci < n_cand; ++ci) {
            const std::size_t p = cand ? cand[ci] : ci;
            const std::size_t fid = static_cast<std::size_t>(features[p]);
            const std::uint32_t* lst = work.data() + p * m;

            std::fill(left.begin(), left.end(), 0);
            std::uint64_t wl = 0, sl = 0, sr = s_tot;
            double prev = 0.0;
            for (std::size_t r = fr.lo; r < fr.hi; ++r) {
                const std::uint32_t row = lst[r];
                const double v = X(row, fid);
                if (r > fr.lo && v > prev) {
                    const double wld = static_cast<double>(wl);
                    const double wrd = node_wd - wld;
                    const double imp = (wld - static_cast<double>(sl) / wld) +
                                       (wrd - static_cast<double>(sr) / wrd);
                    if (imp < best_imp) {
                        best_imp = imp;
                        best_p = p;
                        best_thr = split_threshold(prev, v);
                    }
                }
                const std::uint64_t w = weights[row];
                const std::size_t c = static_cast<std::size_t>(y[row]);
                sl += w * w + 2 * w * left[c];
                // Unsigned wraparound is fine: sr stays the exact sum of
                // squared right-side class counts after each update.
                sr += w * w - 2 * w * (tot[c] - left[c]);
                left[c] += w;
                wl += w;
                prev = v;
            }
        }

        if (best_p == af) {  // no distinct values among candidates
            fill_leaf(*fr.node, tot, code_to_label);
            continue;
        }

        const std::size_t best_fid = static_cast<std::size_t>(features[best_p]);
        fr.node->feature = features[best_p];
        fr.node->threshold = best_thr;
        if (importance) {
            const double node_imp = node_wd - static_cast<double>(s_tot) / node_wd;
            (*importance)[best_fid] += std::max(0.0, node_imp - best_imp) / root_weight;
        }

        std::size_t nl = 0;
        {
            const std::uint32_t* lst = work.data() + best_p * m;
            for (std::size_t r = fr.lo; r < fr.hi; ++r) {
                const std::uint32_t row = lst[r];
                const bool l = X(row, best_fid) <= best_thr;
                goes_left[row] = l ? 1 : 0;
                nl += l ? 1 : 0;
            }
        }
        for (std::size_t p = 0; p < af; ++p) {
            std::uint32_t* lst = work.data() + p * m;
            std::size_t a = 0, b = nl;
            for (std::size_t r = fr.lo; r < fr.hi; ++r) {
                const std::uint32_t row = lst[r];
                if (goes_left[row]) {
                    aux[a++] = row;
                } else {
                    aux[b++] = row;
                }
            }
            std::copy(aux.begin(), aux.begin() + static_cast<std::ptrdiff_t>(fr.hi - fr.lo),
                      lst + fr.lo);
        }

        fr.node->left = std::make_unique<TreeNode>();
        fr.node->right = std::make_unique<TreeNode>();
        // Left child processed first so feature subsampling consumes the rng
        // in a fixed depth-first order.
        stack.push_back({fr.node->right.get(), fr.lo + nl, fr.hi, fr.depth + 1});
        stack.push_back({fr.node->left.get(), fr.lo, fr.lo + nl, fr.depth + 1});
    }
    return root;
}

}  // namespace aptfs::detail
