#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aptfs/dataset.hpp"

namespace testutil {

/// Dataset with generated unique feature names; rows is a flat row-major list.
inline aptfs::Dataset make_dataset(std::size_t n, std::size_t d, const std::vector<double>& rows,
                                   const std::vector<int>& labels) {
    aptfs::Dataset ds;
    ds.X = aptfs::Matrix(n, d);
    ds.X.data = rows;
    ds.y = labels;
    for (std::size_t f = 0; f < d; ++f) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "f_%03zu", f);
        ds.metas.push_back({buf, aptfs::FeatureCategory::other});
    }
    ds.name = "fixture";
    return ds;
}

/// Self-cleaning temporary directory, one per test case.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("aptfs_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testutil
