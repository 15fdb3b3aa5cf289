#include "aptfs/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "aptfs/error.hpp"

namespace aptfs {

namespace {

using ojson = nlohmann::ordered_json;

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x))
            throw DataError(std::string(what) +
                            " holds a non-finite value; the document format cannot carry it");
    }
}

ojson params_json(const std::map<std::string, std::string>& params) {
    ojson o = ojson::object();
    for (const auto& [k, v] : params) o[k] = v;
    return o;
}

ojson parse_json(const std::string& text, const char* what) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string(what) + ": not valid JSON: " + e.what());
    }
}

template <typename T>
T field(const ojson& o, const char* key, const char* what) {
    try {
        return o.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string(what) + ": bad or missing field '" + key + "': " + e.what());
    }
}

std::map<std::string, std::string> params_from(const ojson& o, const char* key, const char* what) {
    std::map<std::string, std::string> out;
    try {
        for (const auto& [k, v] : o.at(key).items()) out[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string(what) + ": bad or missing field '" + key + "': " + e.what());
    }
    return out;
}

void check_version(const ojson& doc, const char* what) {
    const int v = field<int>(doc, "version", what);
    if (v != kDocVersion)
        throw DataError(std::string(what) + ": document version " + std::to_string(v) +
                        " is not supported (expected " + std::to_string(kDocVersion) + ")");
}

void check_kind(const ojson& doc, const char* expected, const char* what) {
    const auto k = field<std::string>(doc, "kind", what);
    if (k != expected)
        throw DataError(std::string(what) + ": document kind '" + k + "' does not match '" +
                        expected + "'");
}

ojson metric_set_json(const MetricSet& m) {
    ojson o;
    o["accuracy"] = m.accuracy;
    o["precision"] = m.precision;
    o["recall"] = m.recall;
    o["f1"] = m.f1;
    return o;
}

MetricSet metric_set_from(const ojson& o, const char* what) {
    MetricSet m;
    m.accuracy = field<double>(o, "accuracy", what);
    m.precision = field<double>(o, "precision", what);
    m.recall = field<double>(o, "recall", what);
    m.f1 = field<double>(o, "f1", what);
    return m;
}

ojson box_json(const BoxStats& b) {
    ojson o;
    o["min"] = b.min;
    o["q1"] = b.q1;
    o["median"] = b.median;
    o["q3"] = b.q3;
    o["max"] = b.max;
    o["mean"] = b.mean;
    o["outliers"] = b.outliers;
    return o;
}

BoxStats box_from(const ojson& o, const char* what) {
    BoxStats b;
    b.min = field<double>(o, "min", what);
    b.q1 = field<double>(o, "q1", what);
    b.median = field<double>(o, "median", what);
    b.q3 = field<double>(o, "q3", what);
    b.max = field<double>(o, "max", what);
    b.mean = field<double>(o, "mean", what);
    b.outliers = field<std::vector<double>>(o, "outliers", what);
    return b;
}

ojson eval_body_json(const EvalReport& r) {
    ojson doc;
    ojson config;
    config["dataset"] = r.dataset;
    config["n_samples"] = r.n_samples;
    config["n_features"] = r.n_features;
    config["k_select"] = r.k_select;
    config["folds"] = r.folds;
    config["seed"] = r.seed;
    config["averaging"] = r.averaging;
    config["classifiers"] = r.classifiers;
    doc["config"] = config;

    ojson methods = ojson::array();
    for (const MethodOutcome& m : r.methods) {
        ojson e;
        e["method"] = m.method;
        e["fs_params"] = params_json(m.fs_params);
        ojson folds = ojson::array();
        for (const FoldOutcome& fo : m.folds) {
            ojson fe;
            ojson pcs = ojson::array();
            for (const MetricSet& ms : fo.per_classifier) pcs.push_back(metric_set_json(ms));
            fe["per_classifier"] = pcs;
            fe["mean"] = metric_set_json(fo.mean);
            folds.push_back(fe);
        }
        e["folds"] = folds;
        ojson stats = ojson::object();
        for (const auto& [metric, box] : m.stats) stats[metric] = box_json(box);
        e["stats"] = stats;
        ojson mean = ojson::object();
        for (const auto& [metric, v] : m.mean) mean[metric] = v;
        e["mean"] = mean;
        methods.push_back(e);
    }
    doc["methods"] = methods;

    ojson ranking = ojson::object();
    for (const auto& [metric, ids] : r.ranking) ranking[metric] = ids;
    doc["ranking"] = ranking;
    return doc;
}

EvalReport eval_body_from(const ojson& doc, const char* what) {
    EvalReport r;
    const ojson config = field<ojson>(doc, "config", what);
    r.dataset = field<std::string>(config, "dataset", what);
    r.n_samples = field<std::size_t>(config, "n_samples", what);
    r.n_features = field<std::size_t>(config, "n_features", what);
    r.k_select = field<std::size_t>(config, "k_select", what);
    r.folds = field<std::size_t>(config, "folds", what);
    r.seed = field<std::uint64_t>(config, "seed", what);
    r.averaging = field<std::string>(config, "averaging", what);
    r.classifiers = field<std::vector<std::string>>(config, "classifiers", what);

    for (const ojson& e : field<ojson>(doc, "methods", what)) {
        MethodOutcome m;
        m.method = field<std::string>(e, "method", what);
        m.fs_params = params_from(e, "fs_params", what);
        for (const ojson& fe : field<ojson>(e, "folds", what)) {
            FoldOutcome fo;
            for (const ojson& pc : field<ojson>(fe, "per_classifier", what))
                fo.per_classifier.push_back(metric_set_from(pc, what));
            fo.mean = metric_set_from(field<ojson>(fe, "mean", what), what);
            m.folds.push_back(std::move(fo));
        }
        // items() keeps a reference, so the container must outlive the loop.
        const ojson stats = field<ojson>(e, "stats", what);
        for (const auto& [metric, box] : stats.items()) m.stats[metric] = box_from(box, what);
        const ojson means = field<ojson>(e, "mean", what);
        for (const auto& [metric, v] : means.items()) m.mean[metric] = v.get<double>();
        r.methods.push_back(std::move(m));
    }
    const ojson ranking = field<ojson>(doc, "ranking", what);
    for (const auto& [metric, ids] : ranking.items())
        r.ranking[metric] = ids.get<std::vector<std::string>>();
    return r;
}

}  // namespace

std::string selection_to_text(const SelectionResult& s) {
    require_finite(s.scores, "selection scores");
    ojson doc;
    doc["version"] = kDocVersion;
    doc["kind"] = "selection";
    doc["method"] = to_string(s.method);
    doc["k"] = s.k;
    doc["seed"] = s.seed;
    doc["params"] = params_json(s.params);
    doc["selected"] = s.selected;
    doc["scores"] = s.scores;
    return doc.dump(2) + "\n";
}

SelectionResult selection_from_text(const std::string& text) {
    const char* what = "selection document";
    const ojson doc = parse_json(text, what);
    check_version(doc, what);
    check_kind(doc, "selection", what);
    SelectionResult s;
    s.method = fs_method_from_string(field<std::string>(doc, "method", what));
    s.k = field<std::size_t>(doc, "k", what);
    s.seed = field<std::uint64_t>(doc, "seed", what);
    s.params = params_from(doc, "params", what);
    s.selected = field<std::vector<int>>(doc, "selected", what);
    s.scores = field<std::vector<double>>(doc, "scores", what);
    validate_selection(s, s.scores.size());
    return s;
}

std::string render_structured_report(const ReportInputs& in) {
    const std::size_t d = in.tally.n_features();
    if (!in.metas.empty() && in.metas.size() != d)
        throw DataError("report: metadata covers " + std::to_string(in.metas.size()) +
                        " features but the tally covers " + std::to_string(d));
    require_finite(in.tally.mean_scores, "tally mean scores");

    ojson doc;
    doc["version"] = kDocVersion;
    doc["kind"] = "report";
    doc["config"] = params_json(in.config);

    ojson sels = ojson::array();
    for (const SelectionResult& s : in.selections) {
        ojson e;
        e["method"] = to_string(s.method);
        e["k"] = s.k;
        e["seed"] = s.seed;
        e["params"] = params_json(s.params);
        e["selected"] = s.selected;
        sels.push_back(e);
    }
    doc["selections"] = sels;

    ojson tal;
    tal["n_methods"] = in.tally.n_methods;
    tal["counts"] = in.tally.counts;
    tal["sources"] = in.tally.sources;
    tal["mean_scores"] = in.tally.mean_scores;
    doc["tally"] = tal;

    ojson tiers = ojson::array();
    for (const PriorityTier& t : in.tiers) {
        ojson e;
        e["level"] = t.level;
        ojson feats = ojson::array();
        for (int idx : t.features) {
            ojson fe;
            fe["index"] = idx;
            if (!in.metas.empty()) {
                fe["name"] = in.metas[static_cast<std::size_t>(idx)].name;
                fe["category"] = to_string(in.metas[static_cast<std::size_t>(idx)].category);
            }
            fe["mean_score"] = in.tally.mean_scores[static_cast<std::size_t>(idx)];
            feats.push_back(fe);
        }
        e["features"] = feats;
        if (!in.metas.empty()) {
            ojson cats = ojson::object();
            for (const auto& [cat, count] : category_breakdown(t, in.metas))
                cats[to_string(cat)] = count;
            e["categories"] = cats;
        }
        tiers.push_back(e);
    }
    doc["tiers"] = tiers;

    doc["metrics"] = in.metrics ? eval_body_json(*in.metrics) : ojson::object();
    return doc.dump(2) + "\n";
}

ParsedReport parse_report(const std::string& text) {
    const char* what = "report document";
    const ojson doc = parse_json(text, what);
    check_version(doc, what);
    check_kind(doc, "report", what);
    ParsedReport out;
    out.version = field<int>(doc, "version", what);
    out.config = params_from(doc, "config", what);

    const ojson tal = field<ojson>(doc, "tally", what);
    out.tally.n_methods = field<std::size_t>(tal, "n_methods", what);
    out.tally.counts = field<std::vector<int>>(tal, "counts", what);
    out.tally.sources = field<std::vector<std::vector<std::string>>>(tal, "sources", what);
    out.tally.mean_scores = field<std::vector<double>>(tal, "mean_scores", what);

    bool any_names = false;
    std::vector<FeatureMeta> metas(out.tally.n_features());
    for (const ojson& e : field<ojson>(doc, "tiers", what)) {
        PriorityTier t;
        t.level = field<std::size_t>(e, "level", what);
        for (const ojson& fe : field<ojson>(e, "features", what)) {
            const int idx = field<int>(fe, "index", what);
            t.features.push_back(idx);
            if (fe.contains("name") && idx >= 0 &&
                static_cast<std::size_t>(idx) < metas.size()) {
                any_names = true;
                metas[static_cast<std::size_t>(idx)].name = fe["name"].get<std::string>();
                if (fe.contains("category")) {
                    if (const auto cat = category_from_string(fe["category"].get<std::string>()))
                        metas[static_cast<std::size_t>(idx)].category = *cat;
                }
            }
        }
        out.tiers.push_back(std::move(t));
    }
    if (any_names) out.metas = std::move(metas);
    if (doc.contains("metrics") && doc["metrics"].is_object() && !doc["metrics"].empty())
        out.metrics = eval_body_from(doc["metrics"], what);
    return out;
}

std::string render_human_report(const ReportInputs& in) {
    const std::size_t d = in.tally.n_features();
    if (!in.metas.empty() && in.metas.size() != d)
        throw DataError("report: metadata size does not match the tally");

    std::string out;
    char buf[256];
    out += "Feature consensus report\n";
    out += "========================\n";
    std::snprintf(buf, sizeof buf, "methods voting: %zu\n", in.tally.n_methods);
    out += buf;
    if (!in.selections.empty()) {
        out += "selections:";
        for (const SelectionResult& s : in.selections) out += " " + to_string(s.method);
        out += "\n";
    }
    std::snprintf(buf, sizeof buf, "features: %zu\n", d);
    out += buf;

    std::size_t never = 0;
    for (const PriorityTier& t : in.tiers) {
        if (t.level == 0) {
            never = t.features.size();
            continue;
        }
        if (t.features.empty()) continue;
        std::snprintf(buf, sizeof buf, "\n%zu. Selected (%zu feature%s)\n", t.level,
                      t.features.size(), t.features.size() == 1 ? "" : "s");
        out += buf;
        for (int idx : t.features) {
            const std::size_t f = static_cast<std::size_t>(idx);
            if (in.metas.empty()) {
                std::snprintf(buf, sizeof buf, "  #%d  mean score %.4f\n", idx,
                              in.tally.mean_scores[f]);
            } else {
                std::snprintf(buf, sizeof buf, "  %s  [%s]  mean score %.4f\n",
                              in.metas[f].name.c_str(), to_string(in.metas[f].category),
                              in.tally.mean_scores[f]);
            }
            out += buf;
        }
        if (!in.metas.empty()) {
            out += "  categories:";
            for (const auto& [cat, count] : category_breakdown(t, in.metas)) {
                std::snprintf(buf, sizeof buf, " %s %zu", to_string(cat), count);
                out += buf;
            }
            out += "\n";
        }
    }
    std::snprintf(buf, sizeof buf, "\nNever selected: %zu feature%s.\n", never,
                  never == 1 ? "" : "s");
    out += buf;

    if (in.metrics) {
        out += "\n";
        out += render_human_eval(*in.metrics);
    }
    return out;
}

std::string render_human_eval(const EvalReport& r) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "Detection metrics (%s, %zu folds, k=%zu)\n",
                  r.averaging.c_str(), r.folds, r.k_select);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-10s %9s %9s %9s %9s\n", "method", "accuracy", "precision",
                  "recall", "f1");
    out += buf;
    for (const MethodOutcome& m : r.methods) {
        std::snprintf(buf, sizeof buf, "%-10s %9.4f %9.4f %9.4f %9.4f\n", m.method.c_str(),
                      m.mean.at("accuracy"), m.mean.at("precision"), m.mean.at("recall"),
                      m.mean.at("f1"));
        out += buf;
    }
    if (const auto it = r.ranking.find("f1"); it != r.ranking.end()) {
        out += "ranking by f1:";
        for (const std::string& id : it->second) out += " " + id;
        out += "\n";
    }
    return out;
}

std::string eval_report_to_text(const EvalReport& r) {
    ojson doc;
    doc["version"] = kDocVersion;
    doc["kind"] = "evaluation";
    ojson body = eval_body_json(r);
    for (auto& [k, v] : body.items()) doc[k] = v;
    return doc.dump(2) + "\n";
}

EvalReport eval_report_from_text(const std::string& text) {
    const char* what = "evaluation document";
    const ojson doc = parse_json(text, what);
    check_version(doc, what);
    check_kind(doc, "evaluation", what);
    return eval_body_from(doc, what);
}

}  // namespace aptfs
