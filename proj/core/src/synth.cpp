#include "aptfs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "aptfs/error.hpp"
#include "aptfs/rng.hpp"

namespace aptfs {

const std::vector<std::size_t>& reference_populations() {
    static const std::vector<std::size_t> pops = {68, 205, 101, 105, 45,  315, 58,  54,
                                                  559, 44, 31,  267, 23,  35,  176, 9021};
    return pops;
}

std::vector<std::size_t> proportional_populations(std::size_t n) {
    const std::vector<std::size_t>& ref = reference_populations();
    const std::size_t total = std::accumulate(ref.begin(), ref.end(), std::size_t{0});
    std::vector<std::size_t> out(ref.size());
    std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder, class idx)
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < ref.size(); ++c) {
        const std::size_t scaled = n * ref[c];
        out[c] = scaled / total;
        assigned += out[c];
        remainders.push_back({scaled % total, c});
    }
    // largest remainder first; ties go to the lower class id
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++out[remainders[i].second];
    return out;
}

namespace {

std::string feature_name(std::size_t index, bool binary) {
    char buf[48];
    if (binary) {
        std::snprintf(buf, sizeof buf, "import_%04zu.dll", index);
    } else {
        static const char* kPrefixes[4] = {"field_%04zu", "directory_%04zu", "function_%04zu",
                                           "e_field_%04zu"};
        std::snprintf(buf, sizeof buf, kPrefixes[index % 4], index);
    }
    return buf;
}

void validate_spec(const SynthSpec& spec, const std::vector<std::size_t>& pops) {
    if (spec.n_features < 2) throw ConfigError("generate: need at least 2 features");
    if (spec.n_informative + spec.n_redundant > spec.n_features)
        throw ConfigError("generate: informative + redundant exceed the feature count");
    if (spec.n_redundant > 0 && spec.n_informative == 0)
        throw ConfigError("generate: redundant features need an informative source");
    if (spec.binary_fraction < 0.0 || spec.binary_fraction > 1.0)
        throw ConfigError("generate: binary_fraction must lie in [0, 1]");
    if (!(spec.noise_level >= 0.0)) throw ConfigError("generate: noise_level must be >= 0");
    const std::size_t total = std::accumulate(pops.begin(), pops.end(), std::size_t{0});
    if (total != spec.n_samples)
        throw ConfigError("generate: class populations sum to " + std::to_string(total) +
                          ", not n_samples = " + std::to_string(spec.n_samples));
    if (spec.n_samples < 1) throw ConfigError("generate: need at least 1 sample");
    std::size_t nonzero = 0;
    for (std::size_t p : pops) nonzero += (p > 0);
    if (spec.n_informative > 0 && nonzero < 2)
        throw ConfigError("generate: class-conditional signal needs at least 2 populated classes");
}

}  // namespace

std::pair<Dataset, GroundTruth> generate(const SynthSpec& spec) {
    const std::vector<std::size_t> pops =
        spec.class_populations.empty() ? proportional_populations(spec.n_samples)
                                       : spec.class_populations;
    validate_spec(spec, pops);
    const std::size_t n = spec.n_samples;
    const std::size_t d = spec.n_features;
    const std::size_t n_classes = pops.size();

    Rng rng(spec.seed);

    // Fixed draw order: feature roles, then the row shuffle, then one
    // parameter-plus-column block per feature (informative, redundant, noise).
    const std::vector<std::size_t> role_perm = rng.sample_without_replacement(d, d);
    std::vector<int> informative(role_perm.begin(), role_perm.begin() + spec.n_informative);
    std::vector<int> redundant(role_perm.begin() + spec.n_informative,
                               role_perm.begin() + spec.n_informative + spec.n_redundant);
    std::vector<int> noise(role_perm.begin() + spec.n_informative + spec.n_redundant,
                           role_perm.end());
    std::sort(informative.begin(), informative.end());
    std::sort(redundant.begin(), redundant.end());
    std::sort(noise.begin(), noise.end());

    // 0/1 indicator budget: class-independent noise features first, spilling
    // into informative ones only when the budget exceeds the noise count.
    const std::size_t binary_budget =
        std::min(static_cast<std::size_t>(std::llround(spec.binary_fraction * d)),
                 noise.size() + informative.size());
    std::vector<char> is_binary(d, 0);
    {
        std::size_t left = binary_budget;
        for (std::size_t i = 0; i < noise.size() && left > 0; ++i, --left)
            is_binary[noise[i]] = 1;
        for (std::size_t i = 0; i < informative.size() && left > 0; ++i, --left)
            is_binary[informative[i]] = 1;
    }

    // Row labels: class blocks shuffled once.
    std::vector<int> y;
    y.reserve(n);
    for (std::size_t c = 0; c < n_classes; ++c)
        y.insert(y.end(), pops[c], static_cast<int>(c) + 1);
    rng.shuffle(y);

    Dataset ds;
    ds.name = "synth-seed" + std::to_string(spec.seed);
    ds.X = Matrix(n, d);
    ds.y = y;
    ds.metas.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        ds.metas[j].name = feature_name(j, is_binary[j]);
        ds.metas[j].category = infer_category(ds.metas[j].name);
    }

    GroundTruth truth;
    truth.informative = informative;

    for (int j : informative) {
        if (is_binary[j]) {
            // two class groups with indicator rates 0.45 apart
            std::vector<char> group(n_classes);
            for (bool degenerate = true; degenerate;) {
                bool any0 = false, any1 = false;
                for (std::size_t c = 0; c < n_classes; ++c) {
                    group[c] = static_cast<char>(rng.below(2));
                    if (pops[c] > 0) (group[c] ? any1 : any0) = true;
                }
                degenerate = !(any0 && any1);
            }
            const double p_lo = rng.uniform(0.05, 0.5);
            const double p_hi = p_lo + 0.45;
            for (std::size_t i = 0; i < n; ++i) {
                const double p = group[static_cast<std::size_t>(y[i]) - 1] ? p_hi : p_lo;
                ds.X(i, static_cast<std::size_t>(j)) = rng.u01() < p ? 1.0 : 0.0;
            }
        } else {
            // class means on a grid 1.5 sigma apart, level order permuted
            const std::vector<std::size_t> levels =
                rng.sample_without_replacement(n_classes, n_classes);
            for (std::size_t i = 0; i < n; ++i) {
                const double mean =
                    1.5 * static_cast<double>(levels[static_cast<std::size_t>(y[i]) - 1]);
                ds.X(i, static_cast<std::size_t>(j)) = mean + rng.normal();
            }
        }
    }

    for (std::size_t r = 0; r < redundant.size(); ++r) {
        const int j = redundant[r];
        const int src = informative[r % informative.size()];
        truth.redundant[j] = src;
        const double scale = (rng.below(2) ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
        const double offset = rng.uniform(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            double v = scale * ds.X(i, static_cast<std::size_t>(src)) + offset;
            if (spec.noise_level > 0.0) v += spec.noise_level * rng.normal();
            ds.X(i, static_cast<std::size_t>(j)) = v;
        }
    }

    for (int j : noise) {
        if (is_binary[j]) {
            const double p = rng.uniform(0.02, 0.10);
            for (std::size_t i = 0; i < n; ++i)
                ds.X(i, static_cast<std::size_t>(j)) = rng.u01() < p ? 1.0 : 0.0;
        } else {
            for (std::size_t i = 0; i < n; ++i)
                ds.X(i, static_cast<std::size_t>(j)) = rng.normal();
        }
    }

    validate_dataset(ds);
    return {std::move(ds), std::move(truth)};
}

double recovery_at_k(const SelectionResult& selection, const GroundTruth& truth) {
    if (truth.informative.empty())
        throw DataError("recovery_at_k: no informative features were planted");
    std::set<int> informative(truth.informative.begin(), truth.informative.end());
    std::set<int> credited;
    for (int idx : selection.selected) {
        if (informative.count(idx)) {
            credited.insert(idx);
        } else if (auto it = truth.redundant.find(idx); it != truth.redundant.end()) {
            credited.insert(it->second);
        }
    }
    return static_cast<double>(credited.size()) / static_cast<double>(informative.size());
}

void write_truth(const GroundTruth& truth, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["informative"] = truth.informative;
    nlohmann::ordered_json red = nlohmann::ordered_json::object();
    for (const auto& [copy, src] : truth.redundant) red[std::to_string(copy)] = src;
    doc["redundant"] = std::move(red);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("write_truth: cannot open '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out.good()) throw DataError("write_truth: failed writing '" + path + "'");
}

GroundTruth load_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("load_truth: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_truth: '" + path + "' is not valid: " + e.what());
    }
    GroundTruth truth;
    try {
        truth.informative = doc.at("informative").get<std::vector<int>>();
        for (const auto& [key, value] : doc.at("redundant").items())
            truth.redundant[std::stoi(key)] = value.get<int>();
    } catch (const std::exception& e) {
        throw DataError("load_truth: '" + path + "' has a bad field: " + e.what());
    }
    return truth;
}

}  // namespace aptfs
