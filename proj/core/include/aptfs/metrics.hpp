#pragma once

#include <vector>

namespace aptfs {

enum class Averaging { macro, micro };

/// The four detection metrics. Precision, recall and F1 are averaged over the
/// classes present in the true labels (macro by default; macro is the
/// imbalance-robust choice for heavily skewed class populations).
struct MetricSet {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    bool operator==(const MetricSet&) const = default;
};

/// Zero-denominator rules: per-class precision is 0 when nothing was
/// predicted as that class, recall is 0 when the class has no true samples in
/// the tally, and F1 is 0 when precision + recall is 0.
MetricSet compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          Averaging averaging = Averaging::macro);

/// Box-plot summary. Quartiles use linear interpolation between order
/// statistics (rank p*(m-1) on the sorted values); outliers follow the Tukey
/// 1.5*IQR rule; min/max are whisker ends over non-outliers; mean covers all
/// values.
struct BoxStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::vector<double> outliers;

    bool operator==(const BoxStats&) const = default;
};

BoxStats boxplot_stats(const std::vector<double>& values);

}  // namespace aptfs
