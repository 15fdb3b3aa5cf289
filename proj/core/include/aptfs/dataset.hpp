#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aptfs/matrix.hpp"

namespace aptfs {

enum class FeatureCategory {
    dll_import,
    api_import,
    optional_header,
    dos_header,
    file_header,
    string_stats,
    mutex,
    packer,
    directory_bucket,
    function_bucket,
    other,
};

const char* to_string(FeatureCategory c);
std::optional<FeatureCategory> category_from_string(const std::string& s);

/// Category guessed from the feature-name conventions of PE static features:
/// ".dll" suffix, "directory_"/"function_"/"e_" prefixes; everything else is
/// `other`. A metadata sidecar overrides this.
FeatureCategory infer_category(const std::string& feature_name);

struct FeatureMeta {
    std::string name;
    FeatureCategory category = FeatureCategory::other;

    bool operator==(const FeatureMeta&) const = default;
};

/// Immutable sample matrix with integer class labels and per-feature metadata.
/// All cells are finite; feature names are unique.
struct Dataset {
    Matrix X;                          // n x d
    std::vector<int> y;                // n labels
    std::vector<FeatureMeta> metas;    // d entries
    std::string name;

    std::size_t n_samples() const { return X.rows; }
    std::size_t n_features() const { return X.cols; }

    /// Distinct labels, ascending.
    std::vector<int> classes() const;

    bool operator==(const Dataset&) const = default;
};

/// Checks the structural invariants (sizes, finiteness, unique names) and
/// throws DataError naming the first violation.
void validate_dataset(const Dataset& ds);

enum class LabelModeKind { multiclass_16, binary_apt_vs_malware };

/// Label remapping. The binary mode collapses campaign labels 1..15 to 1 and
/// the commodity-malware label 16 to 0.
struct LabelMode {
    LabelModeKind kind = LabelModeKind::multiclass_16;

    static LabelMode multiclass() { return {LabelModeKind::multiclass_16}; }
    static LabelMode binary() { return {LabelModeKind::binary_apt_vs_malware}; }

    /// Throws DataError for labels outside the mapping domain.
    int map(int label) const;
};

const char* to_string(LabelModeKind k);
std::optional<LabelModeKind> label_mode_from_string(const std::string& s);

/// Stratified cross-validation split: test sets partition all sample indices,
/// and per class every test fold holds floor(n_c/F) or ceil(n_c/F) samples.
struct FoldPlan {
    struct Fold {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
    };
    std::vector<Fold> folds;
    std::size_t n_folds = 0;
    std::uint64_t seed = 0;
};

/// Loads a header-rowed CSV with one integer label column; all other columns
/// are numeric features. Categories come from the optional sidecar (CSV of
/// feature_name,category) and fall back to name inference.
Dataset load_csv(const std::string& path, const std::string& label_column = "label",
                 const std::optional<std::string>& meta_sidecar = std::nullopt);

/// Writes the canonical CSV (features then a final label column). Values are
/// shortest-round-trip formatted so load_csv(write_csv(ds)) == ds.
void write_csv(const Dataset& ds, const std::string& path,
               const std::string& label_column = "label");

/// Two-column sidecar: feature_name,category.
void write_sidecar(const Dataset& ds, const std::string& path);

/// Returns a copy with labels remapped. X and metas are unchanged.
Dataset apply_label_mode(const Dataset& ds, const LabelMode& mode);

FoldPlan stratified_folds(const Dataset& ds, std::size_t n_folds, std::uint64_t seed);

std::map<int, std::size_t> class_histogram(const Dataset& ds);

/// Copy restricted to the given sample rows, in the given order.
Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows);

/// Copy restricted to the given feature columns, in the given order.
Dataset subset_columns(const Dataset& ds, const std::vector<int>& features);

}  // namespace aptfs
