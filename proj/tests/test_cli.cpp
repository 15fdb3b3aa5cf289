#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>

#include "helpers.hpp"

using testutil::TempDir;
using testutil::slurp;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the installed CLI with stdout/stderr captured to files in `dir`.
RunResult run_cli(const TempDir& dir, const std::string& args) {
    static int counter = 0;
    const std::string out_path = dir.file("stdout_" + std::to_string(counter));
    const std::string err_path = dir.file("stderr_" + std::to_string(counter));
    ++counter;
    const std::string cmd =
        std::string(APTFS_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

}  // namespace

TEST_CASE("cli runs the full synth-select-consensus-report-evaluate pipeline") {
    TempDir dir("cli_pipe");
    const std::string data = dir.file("data.csv");

    auto synth = run_cli(dir, "synth --out " + data +
                                  " --n 200 --d 25 --informative 4 --redundant 4 --seed 7");
    CAPTURE(synth.err);
    REQUIRE(synth.exit_code == 0);
    CHECK(synth.out.find("wrote " + data) != std::string::npos);
    const std::string header = slurp(data).substr(0, slurp(data).find('\n'));
    CHECK(header.substr(header.size() - 6) == ",label");
    CHECK_FALSE(slurp(data + ".truth.json").empty());
    CHECK_FALSE(slurp(data + ".meta.csv").empty());

    const std::string sel_dir = dir.file("sel");
    auto select = run_cli(dir, "select --data " + data + " --sidecar " + data +
                                   ".meta.csv --method all --k 8 --seed 3 --out-dir " + sel_dir +
                                   " --set cae.epochs=6 --set cfmi.epochs=6");
    CAPTURE(select.err);
    REQUIRE(select.exit_code == 0);
    for (const char* m : {"relieff", "sfs", "rfe", "mi", "gds", "cae", "cfmi"}) {
        const std::string doc = slurp(sel_dir + "/" + std::string(m) + ".json");
        REQUIRE_FALSE(doc.empty());
        CHECK(doc.find("\"kind\": \"selection\"") != std::string::npos);
    }

    const std::string report_doc = dir.file("report.json");
    auto consensus = run_cli(dir, "consensus " + sel_dir + "/relieff.json " + sel_dir +
                                      "/mi.json " + sel_dir + "/gds.json --data " + data +
                                      " --sidecar " + data + ".meta.csv --out " + report_doc);
    CAPTURE(consensus.err);
    REQUIRE(consensus.exit_code == 0);
    CHECK(slurp(report_doc).find("\"kind\": \"report\"") != std::string::npos);

    auto report = run_cli(dir, "report --in " + report_doc);
    CAPTURE(report.err);
    REQUIRE(report.exit_code == 0);
    CHECK(report.out.find("methods voting: 3") != std::string::npos);
    CHECK(report.out.find("Never selected:") != std::string::npos);

    const std::string eval_doc = dir.file("eval.json");
    auto eval = run_cli(dir, "evaluate --data " + data +
                                 " --methods mi,relieff --k 5 --folds 3 --seed 1 "
                                 "--forest-trees 10 --out " +
                                 eval_doc);
    CAPTURE(eval.err);
    REQUIRE(eval.exit_code == 0);
    CHECK(eval.out.find("ranking by f1:") != std::string::npos);
    CHECK(slurp(eval_doc).find("\"kind\": \"evaluation\"") != std::string::npos);

    // report renders evaluation documents too
    auto eval_view = run_cli(dir, "report --in " + eval_doc);
    REQUIRE(eval_view.exit_code == 0);
    CHECK(eval_view.out.find("baseline") != std::string::npos);
}

TEST_CASE("cli select output is byte-identical across reruns and thread counts") {
    TempDir dir("cli_det");
    const std::string data = dir.file("data.csv");
    REQUIRE(run_cli(dir, "synth --out " + data + " --n 150 --d 15 --informative 3 "
                         "--redundant 3 --seed 9")
                .exit_code == 0);

    const std::string a = dir.file("a");
    const std::string b = dir.file("b");
    const std::string base = " --data " + data + " --method relieff,mi --k 5 --seed 4";
    REQUIRE(run_cli(dir, "select" + base + " --threads 1 --out-dir " + a).exit_code == 0);
    REQUIRE(run_cli(dir, "select" + base + " --threads 4 --out-dir " + b).exit_code == 0);
    for (const char* m : {"relieff", "mi"}) {
        const std::string doc_a = slurp(a + "/" + std::string(m) + ".json");
        CHECK(doc_a == slurp(b + "/" + std::string(m) + ".json"));
        CHECK_FALSE(doc_a.empty());
    }
}

TEST_CASE("cli reports usage errors and data errors distinctly") {
    TempDir dir("cli_err");

    // unknown subcommand: CLI11 usage failure, nonzero exit
    auto unknown = run_cli(dir, "frobnicate");
    CHECK(unknown.exit_code != 0);

    // missing required option
    auto missing = run_cli(dir, "synth");
    CHECK(missing.exit_code != 0);

    // nonexistent input file fails option validation
    auto nofile = run_cli(dir, "select --data " + dir.file("absent.csv") +
                                   " --method mi --k 2 --out-dir " + dir.file("x"));
    CHECK(nofile.exit_code != 0);

    // malformed data surfaces as "error:" on stderr with exit 1
    const std::string bad = dir.file("bad.csv");
    std::ofstream(bad) << "name,f0\nrow,not_a_number\n";
    auto malformed = run_cli(dir, "select --data " + bad + " --label name --method mi "
                                  "--k 1 --out-dir " + dir.file("y"));
    CHECK(malformed.exit_code == 1);
    CHECK(malformed.err.find("error:") != std::string::npos);

    // k larger than the feature count is a config error
    const std::string data = dir.file("ok.csv");
    REQUIRE(run_cli(dir, "synth --out " + data + " --n 60 --d 6 --informative 2 "
                         "--redundant 2 --seed 2")
                .exit_code == 0);
    auto wide = run_cli(dir, "select --data " + data + " --method mi --k 99 --out-dir " +
                                 dir.file("z"));
    CHECK(wide.exit_code == 1);
    CHECK(wide.err.find("error:") != std::string::npos);

    // --set on a multi-method run must name the method
    auto ambiguous = run_cli(dir, "select --data " + data +
                                      " --method mi,gds --k 2 --set bins=4 --out-dir " +
                                      dir.file("w"));
    CHECK(ambiguous.exit_code == 1);
    CHECK(ambiguous.err.find("error:") != std::string::npos);
}

TEST_CASE("cli binary label mode collapses campaigns against commodity") {
    TempDir dir("cli_bin");
    const std::string data = dir.file("data.csv");
    REQUIRE(run_cli(dir, "synth --out " + data + " --n 300 --d 12 --informative 3 "
                         "--redundant 3 --seed 5")
                .exit_code == 0);

    const std::string eval_doc = dir.file("eval.json");
    auto eval = run_cli(dir, "evaluate --data " + data +
                                 " --label-mode binary_apt_vs_malware --methods mi --k 4 "
                                 "--folds 3 --forest-trees 10 --out " +
                                 eval_doc);
    CAPTURE(eval.err);
    REQUIRE(eval.exit_code == 0);
    CHECK(slurp(eval_doc).find("\"kind\": \"evaluation\"") != std::string::npos);
}
