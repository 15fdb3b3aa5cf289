#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "aptfs/error.hpp"
#include "aptfs/mi_select.hpp"
#include "aptfs/mutual_info.hpp"
#include "aptfs/relieff.hpp"
#include "aptfs/rfe.hpp"
#include "aptfs/rng.hpp"
#include "aptfs/selection.hpp"
#include "aptfs/spectral.hpp"
#include "helpers.hpp"

using namespace aptfs;
using testutil::make_dataset;

TEST_CASE("method names round-trip") {
    for (FsMethod m : all_fs_methods()) CHECK(fs_method_from_string(to_string(m)) == m);
    CHECK(all_fs_methods().size() == kNumFsMethods);
    CHECK(to_string(FsMethod::relieff) == "relieff");
    CHECK(to_string(FsMethod::cfmi) == "cfmi");
    CHECK_THROWS_AS(fs_method_from_string("pca"), ConfigError);
}

TEST_CASE("top_k_by_score and sort_by_score break ties on the lower index") {
    const std::vector<double> scores{0.5, 0.9, 0.5, 0.1, 0.9};
    CHECK(top_k_by_score(scores, 3) == std::vector<int>{1, 4, 0});

    std::vector<int> idx{3, 2, 0, 4, 1};
    sort_by_score(idx, scores);
    CHECK(idx == std::vector<int>{1, 4, 0, 2, 3});
}

TEST_CASE("validate_selection catches each contract violation") {
    SelectionResult s;
    s.method = FsMethod::mi;
    s.k = 2;
    s.scores = {0.3, 0.9, 0.1};
    s.selected = {1, 0};
    CHECK_NOTHROW(validate_selection(s, 3));

    auto wrong_k = s;
    wrong_k.selected = {1};
    CHECK_THROWS_AS(validate_selection(wrong_k, 3), DataError);

    auto dup = s;
    dup.selected = {1, 1};
    CHECK_THROWS_AS(validate_selection(dup, 3), DataError);

    auto oob = s;
    oob.selected = {1, 3};
    CHECK_THROWS_AS(validate_selection(oob, 3), DataError);

    auto disorder = s;
    disorder.selected = {0, 1};  // ascending score order is invalid
    CHECK_THROWS_AS(validate_selection(disorder, 3), DataError);

    auto bad_scores = s;
    bad_scores.scores = {0.3, 0.9};
    CHECK_THROWS_AS(validate_selection(bad_scores, 3), DataError);
}

TEST_CASE("relieff reproduces the hand-traced four-sample weights") {
    // class 1 low on f0, class 2 high on f0; f1 varies within both classes.
    // With k=1 and all four instances: every miss contributes 0.25*|diff|,
    // every hit -0.25*|diff|, giving w = (+0.8, -0.8).
    const auto ds = make_dataset(4, 2,
                                 {0.0, 0.0,  //
                                  0.1, 0.9,  //
                                  0.9, 0.1,  //
                                  1.0, 1.0},
                                 {1, 1, 2, 2});
    RelieffConfig cfg;
    cfg.k_neighbors = 1;
    cfg.k_select = 1;
    const SelectionResult sel = relieff(ds, cfg);
    REQUIRE(sel.scores.size() == 2);
    CHECK(sel.scores[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(sel.scores[1] == doctest::Approx(-0.8).epsilon(1e-12));
    CHECK(sel.selected == std::vector<int>{0});
    CHECK(sel.params.at("n_iterations") == "4");
    CHECK(sel.params.at("sampling") == "all_instances");
    CHECK(sel.params.at("distance") == "manhattan");
}

TEST_CASE("relieff subsampling is seed-stable and counts fallbacks") {
    Rng rng(6);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        const int cls = i < 3 ? 2 : 1;  // class 2 has only 3 members
        X.push_back(std::clamp(cls == 2 ? 0.8 + 0.05 * rng.normal() : 0.2 + 0.05 * rng.normal(),
                               0.0, 1.0));
        X.push_back(rng.u01());
        y.push_back(cls);
    }
    const auto ds = make_dataset(40, 2, X, y);
    RelieffConfig cfg;
    cfg.k_neighbors = 5;  // class 2 cannot supply 5 neighbors
    cfg.k_select = 2;
    cfg.n_iterations = 10;
    cfg.seed = 3;
    const SelectionResult a = relieff(ds, cfg);
    const SelectionResult b = relieff(ds, cfg);
    CHECK(a.scores == b.scores);
    CHECK(a.params.at("sampling") == "without_replacement");
    CHECK(std::stoul(a.params.at("hit_fallbacks")) + std::stoul(a.params.at("miss_fallbacks")) >
          0);
    CHECK(a.selected.front() == 0);  // the class-coding feature wins
}

TEST_CASE("relieff rejects unscaled data and bad budgets") {
    const auto ds = make_dataset(2, 2, {0.0, 2.0, 1.0, 0.5}, {1, 2});
    RelieffConfig cfg;
    cfg.k_select = 1;
    CHECK_THROWS_AS(relieff(ds, cfg), DataError);
    const auto ok = make_dataset(2, 2, {0.0, 1.0, 1.0, 0.5}, {1, 2});
    RelieffConfig big;
    big.k_select = 3;
    CHECK_THROWS_AS(relieff(ok, big), ConfigError);
}

TEST_CASE("spectral_phi matches the hand-worked path graph") {
    // path 0-1-2-3, degrees (1,2,2,1)
    Matrix W(4, 4);
    W(0, 1) = W(1, 0) = 1.0;
    W(1, 2) = W(2, 1) = 1.0;
    W(2, 3) = W(3, 2) = 1.0;

    Matrix X(4, 3);
    // ramp: num = 40, den = 43 -> phi = 3/43
    X(0, 0) = 1; X(1, 0) = 2; X(2, 0) = 3; X(3, 0) = 4;
    // alternating sign: num = -6, den = 6 -> phi = 2
    X(0, 1) = 1; X(1, 1) = -1; X(2, 1) = 1; X(3, 1) = -1;
    // constant: flagged with the sentinel 2.0
    X(0, 2) = 5; X(1, 2) = 5; X(2, 2) = 5; X(3, 2) = 5;

    const auto phi = spectral_phi(X, W);
    REQUIRE(phi.size() == 3);
    CHECK(phi[0] == doctest::Approx(3.0 / 43.0).epsilon(1e-14));
    CHECK(phi[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(phi[2] == 2.0);
}

TEST_CASE("spectral_phi drops isolated vertices and reports them") {
    Matrix W(3, 3);
    W(0, 1) = W(1, 0) = 1.0;  // vertex 2 is isolated
    Matrix X(3, 2);
    X(0, 0) = 0.0; X(1, 0) = 1.0; X(2, 0) = 99.0;
    X(0, 1) = 1.0; X(1, 1) = 1.0; X(2, 1) = 0.0;  // constant on the kept pair

    std::vector<std::size_t> removed;
    const auto phi = spectral_phi(X, W, &removed);
    CHECK(removed == std::vector<std::size_t>{2});
    CHECK(phi[1] == 2.0);  // constancy judged on surviving vertices only

    Matrix empty(3, 3);
    CHECK_THROWS_AS(spectral_phi(X, empty), DataError);
    Matrix wrong(2, 2);
    CHECK_THROWS_AS(spectral_phi(X, wrong), DataError);
}

TEST_CASE("class-block graph scores class-constant features as smoothest") {
    // f0 constant within classes, f1 mixes them, f2 constant overall
    const auto ds = make_dataset(4, 3,
                                 {0.2, 0.2, 1.0,  //
                                  0.2, 0.9, 1.0,  //
                                  0.9, 0.2, 1.0,  //
                                  0.9, 0.9, 1.0},
                                 {1, 1, 2, 2});
    const SelectionResult sel = spectral_fs(ds, {}, 2);
    CHECK(sel.method == FsMethod::sfs);
    CHECK(sel.selected.front() == 0);
    CHECK(sel.params.at("graph") == "class_block");
    // constant feature carries the sentinel, ranked dead last
    CHECK(sel.scores[2] == -2.0);
    CHECK(sel.scores[0] > sel.scores[1]);
}

TEST_CASE("rbf-knn graph variant runs and records its bandwidth") {
    Rng rng(12);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        const int cls = i % 2;
        X.push_back(std::clamp(0.25 + 0.5 * cls + 0.03 * rng.normal(), 0.0, 1.0));
        X.push_back(rng.u01());
        y.push_back(cls + 1);
    }
    const auto ds = make_dataset(20, 2, X, y);
    GraphParams graph;
    graph.kind = GraphKind::rbf_knn;
    graph.knn = 4;
    const SelectionResult sel = spectral_fs(ds, graph, 1);
    CHECK(sel.params.at("graph") == "rbf_knn");
    CHECK(std::stod(sel.params.at("sigma")) > 0.0);
    CHECK(sel.selected == std::vector<int>{0});
}

TEST_CASE("rfe_schedule walks down to exactly k") {
    CHECK(rfe_schedule(10, 0.5, 2) == std::vector<std::size_t>{10, 5, 3, 2});
    CHECK(rfe_schedule(5, 0.3, 5) == std::vector<std::size_t>{5});
    const auto fine = rfe_schedule(500, 0.1, 110);
    CHECK(fine.front() == 500);
    CHECK(fine.back() == 110);
    for (std::size_t i = 1; i < fine.size(); ++i) {
        CHECK(fine[i] < fine[i - 1]);
        CHECK(fine[i - 1] - fine[i] <=
              std::max<std::size_t>(1, static_cast<std::size_t>(0.1 * fine[i - 1])));
    }
    CHECK_THROWS_AS(rfe_schedule(10, 0.0, 2), ConfigError);
    CHECK_THROWS_AS(rfe_schedule(10, 1.0, 2), ConfigError);
    CHECK_THROWS_AS(rfe_schedule(10, 0.5, 11), ConfigError);
    CHECK_THROWS_AS(rfe_schedule(10, 0.5, 0), ConfigError);
}

TEST_CASE("rfe with the linear eliminator drops constants first, higher id leading") {
    // f1 and f2 are constant (zero importance); f0 and f3 code the class
    Rng rng(14);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
        const int cls = i % 2;
        X.push_back(cls + rng.uniform(-0.2, 0.2));
        X.push_back(1.0);
        X.push_back(4.0);
        X.push_back(-cls + rng.uniform(-0.2, 0.2));
        y.push_back(cls + 1);
    }
    const auto ds = make_dataset(30, 4, X, y);
    RfeConfig cfg;
    cfg.step_fraction = 0.25;  // one drop per round: 4 -> 3 -> 2
    cfg.k_select = 2;
    cfg.eliminator.kind = EliminatorKind::linear;
    const SelectionResult sel = rfe(ds, cfg);
    CHECK(sel.scores[2] == 1.0);  // first round removes the higher constant id
    CHECK(sel.scores[1] == 2.0);
    CHECK(sel.scores[0] == 3.0);  // survivors score rounds+1
    CHECK(sel.scores[3] == 3.0);
    CHECK(sel.selected == std::vector<int>{0, 3});
    CHECK(sel.params.at("eliminator") == "linear");
    CHECK(sel.params.at("rounds") == "2");
}

TEST_CASE("rfe with the forest eliminator keeps informative features") {
    Rng rng(15);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 60; ++i) {
        const int cls = i % 2;
        for (int f = 0; f < 6; ++f) {
            X.push_back(f == 2 ? cls + 0.1 * rng.normal() : rng.normal());
        }
        y.push_back(cls + 1);
    }
    const auto ds = make_dataset(60, 6, X, y);
    RfeConfig cfg;
    cfg.step_fraction = 0.34;
    cfg.k_select = 2;
    cfg.eliminator.n_trees = 25;
    cfg.seed = 4;
    const SelectionResult sel = rfe(ds, cfg);
    const SelectionResult again = rfe(ds, cfg);
    CHECK(sel.scores == again.scores);
    CHECK(std::find(sel.selected.begin(), sel.selected.end(), 2) != sel.selected.end());
    CHECK(sel.params.at("eliminator") == "forest");

    auto solo = ds;
    std::fill(solo.y.begin(), solo.y.end(), 1);
    CHECK_THROWS_AS(rfe(solo, cfg), DataError);
}

TEST_CASE("mifs ranks by relevance and punishes redundant copies") {
    // four classes spanned by two independent bits: f0 codes bit 0 cleanly,
    // f1 copies f0 exactly, f2 codes bit 1 with more spread, f3 is noise
    Rng rng(16);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 400; ++i) {
        const int cls = i % 4;
        const double b0 = (cls & 1) + 0.02 * rng.normal();
        const double b1 = ((cls >> 1) & 1) + 0.10 * rng.normal();
        X.push_back(b0);
        X.push_back(b0);
        X.push_back(b1);
        X.push_back(rng.normal());
        y.push_back(cls + 1);
    }
    const auto ds = make_dataset(400, 4, X, y);
    MifsConfig cfg;
    cfg.beta = 1.0;
    cfg.bins = 6;
    cfg.k_select = 2;
    const SelectionResult sel = mifs(ds, cfg);
    // one feature per class bit; the exact copy is beta-penalized away and
    // never beats f0, which wins their relevance tie by index
    const std::set<int> got(sel.selected.begin(), sel.selected.end());
    CHECK(got == std::set<int>{0, 2});
    CHECK(sel.params.at("objective") == "relevance_minus_beta_redundancy");

    // unselected features sit strictly below every selected score
    double lowest_selected = 1e300;
    for (int f : sel.selected)
        lowest_selected = std::min(lowest_selected, sel.scores[static_cast<std::size_t>(f)]);
    for (std::size_t f = 0; f < 4; ++f) {
        if (std::find(sel.selected.begin(), sel.selected.end(), static_cast<int>(f)) ==
            sel.selected.end())
            CHECK(sel.scores[f] < lowest_selected);
    }
}

TEST_CASE("mifs with beta zero is a pure relevance ranking") {
    Rng rng(17);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 150; ++i) {
        const int cls = i % 3;
        X.push_back(cls + 0.05 * rng.normal());   // strong
        X.push_back(cls + 2.0 * rng.normal());    // weak
        X.push_back(rng.normal());                // noise
        y.push_back(cls);
    }
    const auto ds = make_dataset(150, 3, X, y);
    MifsConfig cfg;
    cfg.beta = 0.0;
    cfg.bins = 5;
    cfg.k_select = 3;
    const SelectionResult sel = mifs(ds, cfg);
    CHECK(sel.selected.front() == 0);
    // scores equal the standalone relevance when no penalty applies
    std::size_t card = 0;
    std::vector<double> col(150);
    for (int i = 0; i < 150; ++i) col[static_cast<std::size_t>(i)] = ds.X(i, 0);
    const auto codes = equal_width_bins(col, 5, card);
    std::size_t y_card = 0;
    const auto yc = dense_codes(ds.y, y_card);
    CHECK(sel.scores[0] ==
          doctest::Approx(discrete_mi_bits(codes, card, yc, y_card)).epsilon(1e-12));
}

TEST_CASE("gds skips features with no conditional gain") {
    // f1 duplicates f0 exactly: gain collapses to zero after f0 is taken,
    // while f2 carries the second class bit and keeps a full bit of gain
    Rng rng(18);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 400; ++i) {
        const int cls = i % 4;
        const double b0 = (cls & 1) + 0.02 * rng.normal();
        X.push_back(b0);
        X.push_back(b0);
        X.push_back(((cls >> 1) & 1) + 0.10 * rng.normal());
        X.push_back(rng.normal());
        y.push_back(cls + 1);
    }
    const auto ds = make_dataset(400, 4, X, y);
    GdsConfig cfg;
    cfg.bins = 6;
    cfg.k_select = 2;
    const SelectionResult sel = gds(ds, cfg);
    const std::set<int> got(sel.selected.begin(), sel.selected.end());
    CHECK(got == std::set<int>{0, 2});  // the copy's gain collapses, f0 wins by index
    CHECK(sel.params.at("objective") == "greedy_conditional_gain");
    CHECK(sel.params.count("surrogate") == 1);
}

TEST_CASE("gds probe sampling stays deterministic per seed") {
    Rng rng(19);
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 80; ++i) {
        for (int f = 0; f < 12; ++f) X.push_back(rng.u01());
        y.push_back(i % 2);
    }
    const auto ds = make_dataset(80, 12, X, y);
    GdsConfig cfg;
    cfg.probe_budget = 4;  // forces subsampling
    cfg.k_select = 5;
    cfg.seed = 9;
    const SelectionResult a = gds(ds, cfg);
    const SelectionResult b = gds(ds, cfg);
    CHECK(a.selected == b.selected);
    CHECK(a.scores == b.scores);
    CHECK(a.selected.size() == 5);
    std::set<int> uniq(a.selected.begin(), a.selected.end());
    CHECK(uniq.size() == 5);
}

TEST_CASE("mi selection validates bins and budget") {
    const auto ds = make_dataset(4, 2, {0, 1, 1, 0, 0.5, 0.5, 0.2, 0.8}, {1, 1, 2, 2});
    MifsConfig bad;
    bad.bins = 1;
    CHECK_THROWS_AS(mifs(ds, bad), ConfigError);
    MifsConfig neg;
    neg.beta = -0.5;
    CHECK_THROWS_AS(mifs(ds, neg), ConfigError);
    MifsConfig wide;
    wide.k_select = 3;
    CHECK_THROWS_AS(mifs(ds, wide), ConfigError);
    GdsConfig zero;
    zero.probe_budget = 0;
    CHECK_THROWS_AS(gds(ds, zero), ConfigError);
}
