#include "aptfs/fs_runner.hpp"

#include <algorithm>
#include <charconv>
#include <initializer_list>

#include "aptfs/concrete.hpp"
#include "aptfs/error.hpp"
#include "aptfs/mi_select.hpp"
#include "aptfs/preprocess.hpp"
#include "aptfs/relieff.hpp"
#include "aptfs/rfe.hpp"
#include "aptfs/spectral.hpp"

namespace aptfs {

namespace {

void check_keys(const FsOverrides& o, std::initializer_list<const char*> valid,
                const char* method) {
    for (const auto& [key, value] : o) {
        (void)value;
        if (std::find_if(valid.begin(), valid.end(),
                         [&](const char* v) { return key == v; }) == valid.end()) {
            std::string all;
            for (const char* v : valid) {
                if (!all.empty()) all += ", ";
                all += v;
            }
            throw ConfigError("method '" + std::string(method) + "' has no parameter '" + key +
                              "' (valid: " + all + ")");
        }
    }
}

double get_real(const FsOverrides& o, const char* key, double dflt) {
    const auto it = o.find(key);
    if (it == o.end()) return dflt;
    double v = 0.0;
    const char* b = it->second.data();
    const char* e = b + it->second.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        throw ConfigError("parameter '" + std::string(key) + "': '" + it->second +
                          "' is not a real number");
    return v;
}

std::size_t get_count(const FsOverrides& o, const char* key, std::size_t dflt) {
    const auto it = o.find(key);
    if (it == o.end()) return dflt;
    std::size_t v = 0;
    const char* b = it->second.data();
    const char* e = b + it->second.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        throw ConfigError("parameter '" + std::string(key) + "': '" + it->second +
                          "' is not a non-negative integer");
    return v;
}

std::string get_text(const FsOverrides& o, const char* key, const char* dflt) {
    const auto it = o.find(key);
    return it == o.end() ? dflt : it->second;
}

SelectionResult run_inner(FsMethod method, const Dataset& scaled, std::size_t k,
                          const FsOptions& opts) {
    const FsOverrides& o = opts.overrides;
    switch (method) {
        case FsMethod::relieff: {
            check_keys(o, {"k_neighbors", "n_iterations"}, "relieff");
            RelieffConfig cfg;
            cfg.k_neighbors = get_count(o, "k_neighbors", cfg.k_neighbors);
            cfg.n_iterations = get_count(o, "n_iterations", cfg.n_iterations);
            cfg.k_select = k;
            cfg.seed = opts.seed;
            cfg.n_threads = opts.n_threads;
            return relieff(scaled, cfg);
        }
        case FsMethod::sfs: {
            check_keys(o, {"graph", "sigma", "knn"}, "sfs");
            GraphParams gp;
            const std::string g = get_text(o, "graph", "class_block");
            if (g == "class_block") {
                gp.kind = GraphKind::class_block;
            } else if (g == "rbf_knn") {
                gp.kind = GraphKind::rbf_knn;
            } else {
                throw ConfigError("sfs: unknown graph '" + g +
                                  "' (valid: class_block, rbf_knn)");
            }
            gp.sigma = get_real(o, "sigma", gp.sigma);
            gp.knn = get_count(o, "knn", gp.knn);
            return spectral_fs(scaled, gp, k);
        }
        case FsMethod::rfe: {
            check_keys(o,
                       {"step_fraction", "eliminator", "n_trees", "features_per_split",
                        "max_depth", "ridge_lambda"},
                       "rfe");
            RfeConfig cfg;
            cfg.step_fraction = get_real(o, "step_fraction", cfg.step_fraction);
            const std::string e = get_text(o, "eliminator", "forest");
            if (e == "forest") {
                cfg.eliminator.kind = EliminatorKind::forest;
            } else if (e == "linear") {
                cfg.eliminator.kind = EliminatorKind::linear;
            } else {
                throw ConfigError("rfe: unknown eliminator '" + e + "' (valid: forest, linear)");
            }
            cfg.eliminator.n_trees = get_count(o, "n_trees", cfg.eliminator.n_trees);
            cfg.eliminator.features_per_split =
                get_count(o, "features_per_split", cfg.eliminator.features_per_split);
            cfg.eliminator.max_depth = get_count(o, "max_depth", cfg.eliminator.max_depth);
            cfg.eliminator.ridge_lambda = get_real(o, "ridge_lambda", cfg.eliminator.ridge_lambda);
            cfg.k_select = k;
            cfg.seed = opts.seed;
            cfg.n_threads = opts.n_threads;
            return rfe(scaled, cfg);
        }
        case FsMethod::mi: {
            check_keys(o, {"beta", "bins"}, "mi");
            MifsConfig cfg;
            cfg.beta = get_real(o, "beta", cfg.beta);
            cfg.bins = get_count(o, "bins", cfg.bins);
            cfg.k_select = k;
            cfg.seed = opts.seed;
            cfg.n_threads = opts.n_threads;
            return mifs(scaled, cfg);
        }
        case FsMethod::gds: {
            check_keys(o, {"bins", "probe_budget"}, "gds");
            GdsConfig cfg;
            cfg.bins = get_count(o, "bins", cfg.bins);
            cfg.probe_budget = get_count(o, "probe_budget", cfg.probe_budget);
            cfg.k_select = k;
            cfg.seed = opts.seed;
            cfg.n_threads = opts.n_threads;
            return gds(scaled, cfg);
        }
        case FsMethod::cae: {
            check_keys(o, {"epochs", "t_start", "t_end", "hidden", "learning_rate", "batch"},
                       "cae");
            AnnealSchedule sched;
            sched.t_start = get_real(o, "t_start", sched.t_start);
            sched.t_end = get_real(o, "t_end", sched.t_end);
            sched.epochs = get_count(o, "epochs", sched.epochs);
            NetConfig net;
            net.hidden = get_count(o, "hidden", net.hidden);
            OptConfig opt;
            opt.learning_rate = get_real(o, "learning_rate", opt.learning_rate);
            opt.batch = get_count(o, "batch", opt.batch);
            return train_cae(scaled, k, sched, net, opt, opts.seed).first;
        }
        case FsMethod::cfmi: {
            check_keys(o, {"epochs", "t_start", "t_end", "learning_rate", "batch"}, "cfmi");
            AnnealSchedule sched;
            sched.t_start = get_real(o, "t_start", sched.t_start);
            sched.t_end = get_real(o, "t_end", sched.t_end);
            sched.epochs = get_count(o, "epochs", sched.epochs);
            OptConfig opt;
            opt.learning_rate = get_real(o, "learning_rate", opt.learning_rate);
            opt.batch = get_count(o, "batch", opt.batch);
            return train_cfmi(scaled, k, sched, opt, opts.seed).first;
        }
    }
    throw ConfigError("run_selection: invalid method value");
}

}  // namespace

SelectionResult run_selection(FsMethod method, const Dataset& raw, const FsOptions& opts) {
    validate_dataset(raw);
    const std::size_t d = raw.n_features();
    if (opts.k_select < 1 || opts.k_select > d)
        throw ConfigError("run_selection: k_select must be in [1, " + std::to_string(d) +
                          "], got " + std::to_string(opts.k_select));

    const Scaler scaler = fit_scaler(raw);
    if (scaler.kept_dim() == 0)
        throw DataError("run_selection: every feature is constant; nothing can be ranked");
    const Dataset scaled = apply_scaler(scaler, raw);
    const std::size_t k_inner = std::min(opts.k_select, scaler.kept_dim());

    SelectionResult inner = run_inner(method, scaled, k_inner, opts);

    SelectionResult out;
    out.method = method;
    out.k = opts.k_select;
    out.seed = opts.seed;
    out.params = std::move(inner.params);

    // dropped constants sit strictly below every evaluated score
    const double pad =
        *std::min_element(inner.scores.begin(), inner.scores.end()) - 1.0;
    out.scores.assign(d, pad);
    for (std::size_t j = 0; j < scaler.kept_dim(); ++j)
        out.scores[scaler.to_original(j)] = inner.scores[j];

    out.selected.reserve(opts.k_select);
    for (int idx : inner.selected)
        out.selected.push_back(static_cast<int>(scaler.to_original(static_cast<std::size_t>(idx))));
    if (out.selected.size() < opts.k_select) {
        std::vector<char> kept(d, 0);
        for (std::size_t j = 0; j < scaler.kept_dim(); ++j) kept[scaler.to_original(j)] = 1;
        for (std::size_t f = 0; f < d && out.selected.size() < opts.k_select; ++f)
            if (!kept[f]) out.selected.push_back(static_cast<int>(f));
        out.params["padded_constant_features"] =
            std::to_string(opts.k_select - k_inner);
    }
    out.params["scaler"] = "minmax";
    out.params["dropped_constant_features"] = std::to_string(d - scaler.kept_dim());
    out.params["k"] = std::to_string(opts.k_select);

    validate_selection(out, d);
    return out;
}

}  // namespace aptfs
