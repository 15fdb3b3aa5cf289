#include "aptfs/preprocess.hpp"

#include <algorithm>

#include "aptfs/error.hpp"

namespace aptfs {

Scaler fit_scaler(const Dataset& train) {
    const std::size_t n = train.n_samples();
    const std::size_t d = train.n_features();
    if (n == 0) throw DataError("fit_scaler: empty training data");

    Scaler s;
    s.min.assign(d, 0.0);
    s.max.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        s.min[j] = s.max[j] = train.X(0, j);
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double* row = train.X.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            s.min[j] = std::min(s.min[j], row[j]);
            s.max[j] = std::max(s.max[j], row[j]);
        }
    }
    for (std::size_t j = 0; j < d; ++j)
        if (s.max[j] > s.min[j]) s.kept_features.push_back(j);
    return s;
}

Dataset apply_scaler(const Scaler& scaler, const Dataset& data) {
    const std::size_t d = data.n_features();
    if (d != scaler.original_dim())
        throw DataError("apply_scaler: data has " + std::to_string(d) + " features, scaler fitted on " +
                        std::to_string(scaler.original_dim()));

    const std::size_t n = data.n_samples();
    const std::size_t kept = scaler.kept_dim();

    Dataset out;
    out.name = data.name;
    out.y = data.y;
    out.X.rows = n;
    out.X.cols = kept;
    out.X.data.resize(n * kept);
    out.metas.reserve(kept);
    for (std::size_t j : scaler.kept_features) out.metas.push_back(data.metas[j]);

    for (std::size_t i = 0; i < n; ++i) {
        const double* src = data.X.row(i);
        double* dst = out.X.row(i);
        for (std::size_t jj = 0; jj < kept; ++jj) {
            const std::size_t j = scaler.kept_features[jj];
            double v = (src[j] - scaler.min[j]) / (scaler.max[j] - scaler.min[j]);
            v = std::clamp(v, Scaler::kClampLo, Scaler::kClampHi);
            dst[jj] = v;
        }
    }
    return out;
}

}  // namespace aptfs
