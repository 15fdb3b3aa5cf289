#include "aptfs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aptfs/error.hpp"

namespace aptfs {

MetricSet compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          Averaging averaging) {
    if (y_true.size() != y_pred.size())
        throw DataError("compute_metrics: length mismatch (" + std::to_string(y_true.size()) +
                        " vs " + std::to_string(y_pred.size()) + ")");
    if (y_true.empty()) throw DataError("compute_metrics: empty input");

    const std::size_t n = y_true.size();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (y_true[i] == y_pred[i]) ++correct;

    // tp/fp/fn per class present in y_true
    struct Tally {
        std::size_t tp = 0, fp = 0, fn = 0;
    };
    std::map<int, Tally> per_class;
    for (int c : y_true) per_class[c];
    for (std::size_t i = 0; i < n; ++i) {
        if (y_true[i] == y_pred[i]) {
            ++per_class[y_true[i]].tp;
        } else {
            ++per_class[y_true[i]].fn;
            auto it = per_class.find(y_pred[i]);
            if (it != per_class.end()) ++it->second.fp;
        }
    }
    // classes never seen in y_true must not contribute
    for (auto it = per_class.begin(); it != per_class.end();) {
        if (it->second.tp + it->second.fn == 0)
            it = per_class.erase(it);
        else
            ++it;
    }

    MetricSet m;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(n);

    if (averaging == Averaging::micro) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (const auto& [c, t] : per_class) {
            tp += t.tp;
            fp += t.fp;
            fn += t.fn;
        }
        m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        return m;
    }

    double sum_p = 0.0, sum_r = 0.0, sum_f1 = 0.0;
    for (const auto& [c, t] : per_class) {
        (void)c;
        const double p = (t.tp + t.fp) > 0 ? static_cast<double>(t.tp) / static_cast<double>(t.tp + t.fp) : 0.0;
        const double r = (t.tp + t.fn) > 0 ? static_cast<double>(t.tp) / static_cast<double>(t.tp + t.fn) : 0.0;
        const double f1 = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        sum_p += p;
        sum_r += r;
        sum_f1 += f1;
    }
    const double k = static_cast<double>(per_class.size());
    m.precision = sum_p / k;
    m.recall = sum_r / k;
    m.f1 = sum_f1 / k;
    return m;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double rank = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(rank));
    if (lo == hi) return sorted[lo];
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

BoxStats boxplot_stats(const std::vector<double>& values) {
    if (values.empty()) throw DataError("boxplot_stats: empty input");

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    BoxStats stats;
    stats.q1 = quantile_sorted(sorted, 0.25);
    stats.median = quantile_sorted(sorted, 0.5);
    stats.q3 = quantile_sorted(sorted, 0.75);

    double sum = 0.0;
    for (double v : sorted) sum += v;
    stats.mean = sum / static_cast<double>(sorted.size());

    const double iqr = stats.q3 - stats.q1;
    const double lo_fence = stats.q1 - 1.5 * iqr;
    const double hi_fence = stats.q3 + 1.5 * iqr;

    bool have_whisker = false;
    for (double v : sorted) {
        if (v < lo_fence || v > hi_fence) {
            stats.outliers.push_back(v);
        } else {
            if (!have_whisker) {
                stats.min = stats.max = v;
                have_whisker = true;
            } else {
                stats.max = v;
            }
        }
    }
    // all points flagged cannot happen: q1..q3 always lie inside the fences,
    // and with m >= 1 at least one sample sits in [q1, q3]
    return stats;
}

}  // namespace aptfs
