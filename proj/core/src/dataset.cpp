#include "aptfs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "aptfs/error.hpp"
#include "aptfs/rng.hpp"

namespace aptfs {

namespace {

const std::pair<FeatureCategory, const char*> kCategoryNames[] = {
    {FeatureCategory::dll_import, "dll_import"},
    {FeatureCategory::api_import, "api_import"},
    {FeatureCategory::optional_header, "optional_header"},
    {FeatureCategory::dos_header, "dos_header"},
    {FeatureCategory::file_header, "file_header"},
    {FeatureCategory::string_stats, "string_stats"},
    {FeatureCategory::mutex, "mutex"},
    {FeatureCategory::packer, "packer"},
    {FeatureCategory::directory_bucket, "directory_bucket"},
    {FeatureCategory::function_bucket, "function_bucket"},
    {FeatureCategory::other, "other"},
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
    return ec == std::errc() && ptr == last && !cell.empty();
}

bool parse_int(const std::string& cell, int& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !cell.empty();
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

const char* to_string(FeatureCategory c) {
    for (const auto& [cat, name] : kCategoryNames)
        if (cat == c) return name;
    return "other";
}

std::optional<FeatureCategory> category_from_string(const std::string& s) {
    for (const auto& [cat, name] : kCategoryNames)
        if (s == name) return cat;
    return std::nullopt;
}

FeatureCategory infer_category(const std::string& feature_name) {
    if (ends_with(feature_name, ".dll")) return FeatureCategory::dll_import;
    if (starts_with(feature_name, "directory_")) return FeatureCategory::directory_bucket;
    if (starts_with(feature_name, "function_")) return FeatureCategory::function_bucket;
    if (starts_with(feature_name, "e_")) return FeatureCategory::dos_header;
    return FeatureCategory::other;
}

std::vector<int> Dataset::classes() const {
    std::set<int> distinct(y.begin(), y.end());
    return std::vector<int>(distinct.begin(), distinct.end());
}

void validate_dataset(const Dataset& ds) {
    const std::size_t n = ds.X.rows;
    const std::size_t d = ds.X.cols;
    if (n < 1) throw DataError("dataset '" + ds.name + "': needs at least one sample");
    if (d < 2) throw DataError("dataset '" + ds.name + "': needs at least two features");
    if (ds.y.size() != n)
        throw DataError("dataset '" + ds.name + "': label count " + std::to_string(ds.y.size()) +
                        " != sample count " + std::to_string(n));
    if (ds.metas.size() != d)
        throw DataError("dataset '" + ds.name + "': metadata count " + std::to_string(ds.metas.size()) +
                        " != feature count " + std::to_string(d));
    for (std::size_t i = 0; i < ds.X.data.size(); ++i) {
        if (!std::isfinite(ds.X.data[i]))
            throw DataError("dataset '" + ds.name + "': non-finite value at row " +
                            std::to_string(i / d + 1) + ", feature " + std::to_string(i % d));
    }
    std::unordered_set<std::string> seen;
    for (const auto& m : ds.metas) {
        if (!seen.insert(m.name).second)
            throw DataError("dataset '" + ds.name + "': duplicate feature name '" + m.name + "'");
    }
}

int LabelMode::map(int label) const {
    switch (kind) {
        case LabelModeKind::multiclass_16:
            return label;
        case LabelModeKind::binary_apt_vs_malware:
            if (label >= 1 && label <= 15) return 1;
            if (label == 16) return 0;
            throw DataError("label " + std::to_string(label) +
                            " outside the binary mapping domain 1..16");
    }
    throw ConfigError("unknown label mode");
}

const char* to_string(LabelModeKind k) {
    return k == LabelModeKind::multiclass_16 ? "multiclass_16" : "binary_apt_vs_malware";
}

std::optional<LabelModeKind> label_mode_from_string(const std::string& s) {
    if (s == "multiclass_16" || s == "multiclass") return LabelModeKind::multiclass_16;
    if (s == "binary_apt_vs_malware" || s == "binary") return LabelModeKind::binary_apt_vs_malware;
    return std::nullopt;
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::optional<std::string>& meta_sidecar) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "': empty file, header row required");
    const std::vector<std::string> header = split_csv_line(line);

    std::size_t label_col = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == label_column) {
            label_col = j;
            break;
        }
    }
    if (label_col == header.size())
        throw DataError("'" + path + "': label column '" + label_column + "' not in header");

    Dataset ds;
    ds.name = path;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j == label_col) continue;
        if (header[j].empty())
            throw DataError("'" + path + "': empty feature name in header column " + std::to_string(j + 1));
        ds.metas.push_back({header[j], infer_category(header[j])});
    }
    const std::size_t d = ds.metas.size();

    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("'" + path + "': row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        std::size_t feat = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == label_col) {
                int label = 0;
                if (!parse_int(cells[j], label))
                    throw DataError("'" + path + "': unknown label value '" + cells[j] + "' at row " +
                                    std::to_string(row) + ", column " + std::to_string(j + 1) + " (" +
                                    header[j] + ")");
                ds.y.push_back(label);
            } else {
                double v = 0.0;
                if (!parse_double(cells[j], v) || !std::isfinite(v))
                    throw DataError("'" + path + "': non-numeric cell '" + cells[j] + "' at row " +
                                    std::to_string(row) + ", column " + std::to_string(j + 1) + " (" +
                                    header[j] + ")");
                values.push_back(v);
                ++feat;
            }
        }
        (void)feat;
    }

    ds.X.rows = row;
    ds.X.cols = d;
    ds.X.data = std::move(values);

    if (meta_sidecar) {
        std::ifstream meta(*meta_sidecar);
        if (!meta) throw DataError("cannot open sidecar '" + *meta_sidecar + "'");
        std::unordered_map<std::string, std::size_t> by_name;
        for (std::size_t j = 0; j < ds.metas.size(); ++j) by_name[ds.metas[j].name] = j;
        std::string mline;
        std::size_t mrow = 0;
        bool header_skipped = false;
        while (std::getline(meta, mline)) {
            if (trim(mline).empty()) continue;
            ++mrow;
            const std::vector<std::string> cells = split_csv_line(mline);
            if (cells.size() != 2)
                throw DataError("sidecar '" + *meta_sidecar + "': row " + std::to_string(mrow) +
                                " must have exactly two cells (feature_name,category)");
            if (!header_skipped && cells[0] == "feature_name") {
                header_skipped = true;
                continue;
            }
            auto it = by_name.find(cells[0]);
            if (it == by_name.end())
                throw DataError("sidecar '" + *meta_sidecar + "': unknown feature '" + cells[0] +
                                "' at row " + std::to_string(mrow));
            auto cat = category_from_string(cells[1]);
            if (!cat)
                throw DataError("sidecar '" + *meta_sidecar + "': unknown category '" + cells[1] +
                                "' at row " + std::to_string(mrow));
            ds.metas[it->second].category = *cat;
        }
    }

    validate_dataset(ds);
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path, const std::string& label_column) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (const auto& m : ds.metas) out << m.name << ',';
    out << label_column << '\n';
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        const double* row = ds.X.row(i);
        for (std::size_t j = 0; j < ds.n_features(); ++j) out << format_double(row[j]) << ',';
        out << ds.y[i] << '\n';
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

void write_sidecar(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "feature_name,category\n";
    for (const auto& m : ds.metas) out << m.name << ',' << to_string(m.category) << '\n';
    if (!out) throw DataError("write failed for '" + path + "'");
}

Dataset apply_label_mode(const Dataset& ds, const LabelMode& mode) {
    Dataset out = ds;
    for (auto& label : out.y) label = mode.map(label);
    return out;
}

FoldPlan stratified_folds(const Dataset& ds, std::size_t n_folds, std::uint64_t seed) {
    const std::size_t n = ds.n_samples();
    if (n_folds < 2) throw ConfigError("stratified_folds: n_folds must be >= 2");
    if (n_folds > n)
        throw ConfigError("stratified_folds: n_folds " + std::to_string(n_folds) +
                          " exceeds sample count " + std::to_string(n));

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[ds.y[i]].push_back(i);

    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.seed = seed;
    plan.folds.resize(n_folds);

    Rng rng(mix_seed(seed, 0x5f01d5ULL));
    for (auto& [label, indices] : by_class) {
        (void)label;
        rng.shuffle(indices);
        const std::size_t base = indices.size() / n_folds;
        const std::size_t extra = indices.size() % n_folds;
        std::size_t pos = 0;
        for (std::size_t f = 0; f < n_folds; ++f) {
            const std::size_t take = base + (f < extra ? 1 : 0);
            for (std::size_t t = 0; t < take; ++t) plan.folds[f].test.push_back(indices[pos++]);
        }
    }

    for (std::size_t f = 0; f < n_folds; ++f) {
        auto& fold = plan.folds[f];
        std::sort(fold.test.begin(), fold.test.end());
        std::vector<bool> in_test(n, false);
        for (std::size_t idx : fold.test) in_test[idx] = true;
        fold.train.reserve(n - fold.test.size());
        for (std::size_t i = 0; i < n; ++i)
            if (!in_test[i]) fold.train.push_back(i);
    }
    return plan;
}

std::map<int, std::size_t> class_histogram(const Dataset& ds) {
    std::map<int, std::size_t> counts;
    for (int label : ds.y) ++counts[label];
    return counts;
}

Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Dataset sub;
    sub.name = ds.name;
    sub.metas = ds.metas;
    sub.X = Matrix(rows.size(), ds.n_features());
    sub.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= ds.n_samples())
            throw DataError("subset_rows: row " + std::to_string(rows[i]) + " out of range");
        const double* src = ds.X.row(rows[i]);
        std::copy(src, src + ds.n_features(), sub.X.row(i));
        sub.y.push_back(ds.y[rows[i]]);
    }
    return sub;
}

Dataset subset_columns(const Dataset& ds, const std::vector<int>& features) {
    Dataset sub;
    sub.name = ds.name;
    sub.y = ds.y;
    sub.X = Matrix(ds.n_samples(), features.size());
    sub.metas.reserve(features.size());
    for (std::size_t p = 0; p < features.size(); ++p) {
        if (features[p] < 0 || static_cast<std::size_t>(features[p]) >= ds.n_features())
            throw DataError("subset_columns: feature " + std::to_string(features[p]) +
                            " out of range");
        sub.metas.push_back(ds.metas[static_cast<std::size_t>(features[p])]);
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            sub.X(i, p) = ds.X(i, static_cast<std::size_t>(features[p]));
    }
    return sub;
}

}  // namespace aptfs
