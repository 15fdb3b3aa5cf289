#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aptfs/consensus.hpp"
#include "aptfs/dataset.hpp"
#include "aptfs/error.hpp"
#include "aptfs/evaluate.hpp"
#include "aptfs/fs_runner.hpp"
#include "aptfs/report.hpp"
#include "aptfs/synth.hpp"

namespace fs = std::filesystem;
using namespace aptfs;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// All artifacts go to disk via temp-plus-rename so a crash never leaves a
/// partial file under the final name.
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out.good()) throw DataError("failed writing '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

struct DataArgs {
    std::string path;
    std::string label_column = "label";
    std::string sidecar;
    std::string label_mode = "multiclass_16";
};

void add_data_flags(CLI::App* cmd, DataArgs& a) {
    cmd->add_option("--data", a.path, "dataset CSV (header row, one integer label column)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--label", a.label_column, "label column name")->capture_default_str();
    cmd->add_option("--sidecar", a.sidecar, "feature metadata sidecar CSV")
        ->check(CLI::ExistingFile);
    cmd->add_option("--label-mode", a.label_mode,
                    "multiclass_16 keeps labels; binary_apt_vs_malware maps 1..15 -> 1, 16 -> 0")->capture_default_str()
        ->check(CLI::IsMember({"multiclass_16", "binary_apt_vs_malware"}));
}

Dataset load_data(const DataArgs& a) {
    Dataset ds = load_csv(a.path, a.label_column,
                          a.sidecar.empty() ? std::nullopt
                                            : std::optional<std::string>(a.sidecar));
    const auto mode = label_mode_from_string(a.label_mode);
    if (!mode) throw ConfigError("unknown label mode '" + a.label_mode + "'");
    return apply_label_mode(ds, LabelMode{*mode});
}

std::vector<FsMethod> parse_method_list(const std::string& text) {
    if (text == "all") return all_fs_methods();
    std::vector<FsMethod> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(fs_method_from_string(item));
    }
    if (out.empty()) throw ConfigError("no methods named in '" + text + "'");
    return out;
}

/// "method.key=value" -> override for one method; "key=value" is only
/// unambiguous when a single method is in play.
void apply_set(const std::vector<std::string>& sets, const std::vector<FsMethod>& methods,
               std::map<FsMethod, FsOverrides>& overrides) {
    for (const std::string& s : sets) {
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--set needs key=value or method.key=value, got '" + s + "'");
        std::string key = s.substr(0, eq);
        const std::string value = s.substr(eq + 1);
        const std::size_t dot = key.find('.');
        if (dot != std::string::npos) {
            const FsMethod m = fs_method_from_string(key.substr(0, dot));
            overrides[m][key.substr(dot + 1)] = value;
        } else if (methods.size() == 1) {
            overrides[methods.front()][key] = value;
        } else {
            throw ConfigError("--set '" + s +
                              "' must be prefixed method.key=value when several methods run");
        }
    }
}

std::string boxstats_csv(const EvalReport& r) {
    std::string out = "method,metric,min,q1,median,q3,max,mean,outliers\n";
    for (const MethodOutcome& m : r.methods) {
        for (const std::string& metric : metric_names()) {
            const BoxStats& b = m.stats.at(metric);
            out += m.method + ',' + metric + ',' + fmt_double(b.min) + ',' + fmt_double(b.q1) +
                   ',' + fmt_double(b.median) + ',' + fmt_double(b.q3) + ',' + fmt_double(b.max) +
                   ',' + fmt_double(b.mean) + ',';
            for (std::size_t i = 0; i < b.outliers.size(); ++i) {
                if (i) out += ';';
                out += fmt_double(b.outliers[i]);
            }
            out += '\n';
        }
    }
    return out;
}

void cmd_synth(CLI::App* app) {
    auto spec = std::make_shared<SynthSpec>();
    auto out_path = std::make_shared<std::string>();
    auto truth_path = std::make_shared<std::string>();
    auto sidecar_path = std::make_shared<std::string>();
    auto populations = std::make_shared<std::string>();

    app->add_option("--out", *out_path, "output dataset CSV")->required();
    app->add_option("--truth", *truth_path, "ground-truth JSON (default: <out>.truth.json)");
    app->add_option("--sidecar-out", *sidecar_path,
                    "feature metadata sidecar (default: <out>.meta.csv)");
    app->add_option("--n", spec->n_samples, "sample count")->capture_default_str();
    app->add_option("--d", spec->n_features, "feature count")->capture_default_str();
    app->add_option("--informative", spec->n_informative, "planted informative features")->capture_default_str();
    app->add_option("--redundant", spec->n_redundant, "affine copies of informative features")->capture_default_str();
    app->add_option("--binary-fraction", spec->binary_fraction,
                    "share of features that are 0/1 indicators")->capture_default_str();
    app->add_option("--noise-level", spec->noise_level, "noise on redundant copies")->capture_default_str();
    app->add_option("--seed", spec->seed, "generator seed")->capture_default_str();
    app->add_option("--populations", *populations,
                    "comma-separated class counts (default: proportional to the reference "
                    "corpus)");

    app->callback([=]() {
        if (!populations->empty()) {
            std::stringstream ss(*populations);
            std::string item;
            while (std::getline(ss, item, ','))
                spec->class_populations.push_back(std::stoull(item));
        }
        const auto [ds, truth] = generate(*spec);

        const std::string truth_out =
            truth_path->empty() ? *out_path + ".truth.json" : *truth_path;
        const std::string sidecar_out =
            sidecar_path->empty() ? *out_path + ".meta.csv" : *sidecar_path;

        const std::string tmp = *out_path + ".tmp";
        write_csv(ds, tmp);
        std::error_code ec;
        fs::rename(tmp, *out_path, ec);
        if (ec) {
            fs::remove(tmp);
            throw DataError("cannot move '" + tmp + "' to '" + *out_path + "'");
        }
        write_sidecar(ds, sidecar_out + ".tmp");
        fs::rename(sidecar_out + ".tmp", sidecar_out, ec);
        if (ec) throw DataError("cannot finalize '" + sidecar_out + "'");
        write_truth(truth, truth_out + ".tmp");
        fs::rename(truth_out + ".tmp", truth_out, ec);
        if (ec) throw DataError("cannot finalize '" + truth_out + "'");

        std::cout << "wrote " << *out_path << " (" << ds.n_samples() << " x "
                  << ds.n_features() << "), " << sidecar_out << ", " << truth_out << "\n";
    });
}

void cmd_select(CLI::App* app) {
    auto data = std::make_shared<DataArgs>();
    auto method_text = std::make_shared<std::string>("all");
    auto out_dir = std::make_shared<std::string>();
    auto sets = std::make_shared<std::vector<std::string>>();
    auto opts = std::make_shared<FsOptions>();

    add_data_flags(app, *data);
    app->add_option("--method", *method_text, "method id or 'all'")->capture_default_str();
    app->add_option("--k", opts->k_select, "features to select")->capture_default_str();
    app->add_option("--seed", opts->seed, "master seed")->capture_default_str();
    app->add_option("--threads", opts->n_threads, "worker cap (output-invariant)")->capture_default_str();
    app->add_option("--out-dir", *out_dir, "directory for selection documents")->required();
    app->add_option("--set", *sets, "method parameter override: key=value or method.key=value");

    app->callback([=]() {
        const std::vector<FsMethod> methods = parse_method_list(*method_text);
        std::map<FsMethod, FsOverrides> overrides;
        apply_set(*sets, methods, overrides);
        const Dataset ds = load_data(*data);
        fs::create_directories(*out_dir);
        for (FsMethod m : methods) {
            FsOptions run = *opts;
            if (const auto it = overrides.find(m); it != overrides.end())
                run.overrides = it->second;
            SelectionResult sel = run_selection(m, ds, run);
            sel.params["dataset"] = data->path;
            sel.params["label_mode"] = data->label_mode;
            const std::string path = *out_dir + "/" + to_string(m) + ".json";
            write_file_atomic(path, selection_to_text(sel));
            std::cout << "wrote " << path << " (" << sel.selected.size() << " features)\n";
        }
    });
}

void cmd_evaluate(CLI::App* app) {
    auto data = std::make_shared<DataArgs>();
    auto method_text = std::make_shared<std::string>("all");
    auto sets = std::make_shared<std::vector<std::string>>();
    auto cfg = std::make_shared<EvalConfig>();
    auto averaging = std::make_shared<std::string>("macro");
    auto out_path = std::make_shared<std::string>();
    auto csv_path = std::make_shared<std::string>();

    add_data_flags(app, *data);
    app->add_option("--methods", *method_text, "comma-separated method ids or 'all'")->capture_default_str();
    app->add_option("--k", cfg->k_select, "features to select per method")->capture_default_str();
    app->add_option("--folds", cfg->folds, "cross-validation folds")->capture_default_str();
    app->add_option("--seed", cfg->seed, "master seed")->capture_default_str();
    app->add_option("--threads", cfg->n_threads, "worker cap (output-invariant)")->capture_default_str();
    app->add_flag("--baseline,!--no-baseline", cfg->include_baseline,
                  "include the all-features reference column");
    app->add_option("--averaging", *averaging, "macro or micro")->capture_default_str()
        ->check(CLI::IsMember({"macro", "micro"}));
    app->add_option("--forest-trees", cfg->forest_trees, "trees in the forest classifier")->capture_default_str();
    app->add_option("--knn-k", cfg->knn_k, "neighbors in the k-NN classifier")->capture_default_str();
    app->add_option("--set", *sets, "method parameter override: method.key=value");
    app->add_option("--out", *out_path, "evaluation report JSON")->required();
    app->add_option("--csv", *csv_path, "also export box statistics as CSV");

    app->callback([=]() {
        const std::vector<FsMethod> methods = parse_method_list(*method_text);
        apply_set(*sets, methods, cfg->overrides);
        cfg->averaging = *averaging == "macro" ? Averaging::macro : Averaging::micro;
        const Dataset ds = load_data(*data);
        const EvalReport report = evaluate_pipeline(ds, methods, *cfg);
        write_file_atomic(*out_path, eval_report_to_text(report));
        std::cout << "wrote " << *out_path << "\n";
        if (!csv_path->empty()) {
            write_file_atomic(*csv_path, boxstats_csv(report));
            std::cout << "wrote " << *csv_path << "\n";
        }
        std::cout << render_human_eval(report);
    });
}

void cmd_consensus(CLI::App* app) {
    auto inputs = std::make_shared<std::vector<std::string>>();
    auto out_path = std::make_shared<std::string>();
    auto data_path = std::make_shared<std::string>();
    auto label_column = std::make_shared<std::string>("label");
    auto sidecar = std::make_shared<std::string>();
    auto eval_path = std::make_shared<std::string>();

    app->add_option("files", *inputs, "selection documents")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--out", *out_path, "consensus report JSON")->required();
    app->add_option("--data", *data_path,
                    "dataset CSV; attaches feature names and categories to tiers")
        ->check(CLI::ExistingFile);
    app->add_option("--label", *label_column, "label column name of --data")->capture_default_str();
    app->add_option("--sidecar", *sidecar, "metadata sidecar of --data")
        ->check(CLI::ExistingFile);
    app->add_option("--eval", *eval_path, "evaluation report to embed in the metrics section")
        ->check(CLI::ExistingFile);

    app->callback([=]() {
        ReportInputs in;
        for (const std::string& path : *inputs) {
            try {
                in.selections.push_back(selection_from_text(read_file(path)));
            } catch (const Error& e) {
                throw DataError("'" + path + "': " + e.what());
            }
        }
        in.tally = tally(in.selections);
        in.tiers = tier_partition(in.tally);
        if (!data_path->empty()) {
            const Dataset ds = load_csv(*data_path, *label_column,
                                        sidecar->empty()
                                            ? std::nullopt
                                            : std::optional<std::string>(*sidecar));
            if (ds.n_features() != in.tally.n_features())
                throw DataError("--data has " + std::to_string(ds.n_features()) +
                                " features but the selections cover " +
                                std::to_string(in.tally.n_features()));
            in.metas = ds.metas;
        }
        EvalReport eval;
        if (!eval_path->empty()) {
            eval = eval_report_from_text(read_file(*eval_path));
            in.metrics = &eval;
        }
        for (std::size_t i = 0; i < inputs->size(); ++i)
            in.config["input_" + std::to_string(i)] = (*inputs)[i];
        in.config["n_methods"] = std::to_string(in.tally.n_methods);
        in.config["n_features"] = std::to_string(in.tally.n_features());
        if (!data_path->empty()) in.config["dataset"] = *data_path;
        write_file_atomic(*out_path, render_structured_report(in));
        std::cout << "wrote " << *out_path << "\n";
    });
}

void cmd_report(CLI::App* app) {
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();

    app->add_option("--in", *in_path, "structured document (report or evaluation)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--out", *out_path, "output text file (default: stdout)");

    app->callback([=]() {
        const std::string text = read_file(*in_path);
        std::string kind;
        try {
            kind = nlohmann::json::parse(text).value("kind", "");
        } catch (const nlohmann::json::exception& e) {
            throw DataError("'" + *in_path + "' is not valid JSON: " + e.what());
        }
        std::string rendered;
        if (kind == "report") {
            const ParsedReport parsed = parse_report(text);
            ReportInputs in;
            in.tally = parsed.tally;
            in.tiers = parsed.tiers;
            in.metas = parsed.metas;
            in.config = parsed.config;
            if (parsed.metrics) in.metrics = &*parsed.metrics;
            rendered = render_human_report(in);
        } else if (kind == "evaluation") {
            rendered = render_human_eval(eval_report_from_text(text));
        } else {
            throw DataError("'" + *in_path + "' has kind '" + kind +
                            "'; expected a report or evaluation document");
        }
        if (out_path->empty()) {
            std::cout << rendered;
        } else {
            write_file_atomic(*out_path, rendered);
            std::cout << "wrote " << *out_path << "\n";
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-selection ensemble toolkit for APT malware triage"};
    app.require_subcommand(1);

    cmd_synth(app.add_subcommand("synth", "generate a ground-truth benchmark dataset"));
    cmd_select(app.add_subcommand("select", "run feature-selection methods on a dataset"));
    cmd_evaluate(app.add_subcommand(
        "evaluate", "cross-validated selection + classification metric study"));
    cmd_consensus(
        app.add_subcommand("consensus", "combine selection documents into a tier report"));
    cmd_report(app.add_subcommand("report", "render a structured document as plain text"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
