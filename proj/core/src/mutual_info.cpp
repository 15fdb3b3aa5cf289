#include "aptfs/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aptfs/error.hpp"

namespace aptfs {

std::vector<int> equal_width_bins(std::span<const double> x, std::size_t bins,
                                  std::size_t& actual_bins) {
    if (bins < 2) throw ConfigError("equal_width_bins: bins must be >= 2, got " + std::to_string(bins));
    if (x.empty()) throw DataError("equal_width_bins: empty input");

    // Inputs with <= 2 distinct values keep their natural coding; width-based
    // cut points would be arbitrary there.
    std::vector<double> distinct(x.begin(), x.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<int> out(x.size());
    if (distinct.size() <= 2) {
        actual_bins = distinct.size();
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[i] = x[i] == distinct[0] ? 0 : 1;
        }
        return out;
    }

    const double lo = distinct.front();
    const double hi = distinct.back();
    const double span = hi - lo;
    actual_bins = bins;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto b = static_cast<long>((x[i] - lo) / span * static_cast<double>(bins));
        // Rightmost edge belongs to the last bin.
        b = std::clamp<long>(b, 0, static_cast<long>(bins) - 1);
        out[i] = static_cast<int>(b);
    }
    return out;
}

std::vector<int> dense_codes(std::span<const int> labels, std::size_t& cardinality) {
    std::map<int, int> code;
    for (int v : labels) code.emplace(v, 0);
    int next = 0;
    for (auto& [_, c] : code) c = next++;
    cardinality = code.size();
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = code.at(labels[i]);
    return out;
}

double discrete_mi_bits(std::span<const int> a, std::size_t a_card, std::span<const int> b,
                        std::size_t b_card) {
    if (a.size() != b.size())
        throw DataError("discrete_mi_bits: length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    const std::size_t n = a.size();
    if (n == 0) throw DataError("discrete_mi_bits: empty input");

    std::vector<std::size_t> joint(a_card * b_card, 0);
    std::vector<std::size_t> ma(a_card, 0), mb(b_card, 0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[static_cast<std::size_t>(a[i]) * b_card + static_cast<std::size_t>(b[i])]++;
        ma[static_cast<std::size_t>(a[i])]++;
        mb[static_cast<std::size_t>(b[i])]++;
    }

    // Count-ratio form keeps the independent and identical cases exact:
    // the log argument is a ratio of integer products.
    const auto nd = static_cast<double>(n);
    double mi = 0.0;
    for (std::size_t i = 0; i < a_card; ++i) {
        for (std::size_t j = 0; j < b_card; ++j) {
            const std::size_t c = joint[i * b_card + j];
            if (c == 0) continue;
            const double num = static_cast<double>(c) * nd;
            const double den = static_cast<double>(ma[i]) * static_cast<double>(mb[j]);
            mi += static_cast<double>(c) / nd * std::log2(num / den);
        }
    }
    return std::max(mi, 0.0);
}

double discrete_entropy_bits(std::span<const int> a, std::size_t a_card) {
    if (a.empty()) throw DataError("discrete_entropy_bits: empty input");
    std::vector<std::size_t> counts(a_card, 0);
    for (int v : a) counts[static_cast<std::size_t>(v)]++;
    const auto nd = static_cast<double>(a.size());
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / nd;
        h -= p * std::log2(p);
    }
    return std::max(h, 0.0);
}

MIEstimate mutual_information(std::span<const double> x, std::span<const int> y,
                              std::size_t bins) {
    if (x.size() != y.size())
        throw DataError("mutual_information: length mismatch (" + std::to_string(x.size()) +
                        " vs " + std::to_string(y.size()) + ")");
    if (x.size() < 2) throw DataError("mutual_information: need at least 2 samples");

    std::size_t x_card = 0;
    const std::vector<int> xb = equal_width_bins(x, bins, x_card);
    if (x_card == 1) return {0.0, 1, x.size()};  // constant feature carries no information

    std::size_t y_card = 0;
    const std::vector<int> yb = dense_codes(y, y_card);
    return {discrete_mi_bits(xb, x_card, yb, y_card), x_card, x.size()};
}

}  // namespace aptfs
