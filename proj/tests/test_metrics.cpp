#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <doctest.h>

#include "aptfs/error.hpp"
#include "aptfs/metrics.hpp"

using namespace aptfs;

TEST_CASE("metrics match a hand-tabulated 3-class confusion") {
    // confusion (rows true, cols predicted) over labels {0,1,2}:
    //        p0 p1 p2
    //   t0 [  2  1  0 ]
    //   t1 [  0  2  1 ]
    //   t2 [  1  0  2 ]
    const std::vector<int> yt{0, 0, 0, 1, 1, 1, 2, 2, 2};
    const std::vector<int> yp{0, 0, 1, 1, 1, 2, 2, 2, 0};

    const MetricSet m = compute_metrics(yt, yp, Averaging::macro);
    CHECK(m.accuracy == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
    // per class: precision 2/3 each, recall 2/3 each, f1 2/3 each
    CHECK(m.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    const MetricSet mi = compute_metrics(yt, yp, Averaging::micro);
    CHECK(mi.accuracy == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
    CHECK(mi.precision == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
    CHECK(mi.recall == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
    CHECK(mi.f1 == doctest::Approx(6.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("metrics on an asymmetric confusion") {
    // t0 -> p0 x3, t0 -> p1 x1; t1 -> p1 x1, t1 -> p0 x1
    const std::vector<int> yt{0, 0, 0, 0, 1, 1};
    const std::vector<int> yp{0, 0, 0, 1, 1, 0};
    const MetricSet m = compute_metrics(yt, yp, Averaging::macro);
    CHECK(m.accuracy == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
    // class0: p=3/4, r=3/4, f1=3/4; class1: p=1/2, r=1/2, f1=1/2
    CHECK(m.precision == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(m.recall == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(m.f1 == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("zero-denominator rules pin degenerate classes to 0") {
    // class 2 present in truth but never predicted: precision 0, recall 0, f1 0
    const std::vector<int> yt{0, 0, 2};
    const std::vector<int> yp{0, 0, 0};
    const MetricSet m = compute_metrics(yt, yp, Averaging::macro);
    CHECK(m.accuracy == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // class0: p=2/3, r=1, f1=4/5; class2: all 0
    CHECK(m.precision == doctest::Approx((2.0 / 3.0) / 2.0).epsilon(1e-15));
    CHECK(m.recall == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.f1 == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("labels only in predictions do not add macro terms") {
    const std::vector<int> yt{0, 0};
    const std::vector<int> yp{0, 7};
    const MetricSet m = compute_metrics(yt, yp, Averaging::macro);
    // only class 0 is averaged: p=1 (one predicted-0, correct), r=1/2
    CHECK(m.precision == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.recall == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("compute_metrics validates its inputs") {
    CHECK_THROWS_AS(compute_metrics({1, 2}, {1}), DataError);
    CHECK_THROWS_AS(compute_metrics({}, {}), DataError);
}

TEST_CASE("majority vote on the reference corpus shape gives the exact ratio") {
    // binary mode collapses the 16-label histogram to 2086 APT vs 9021 commodity
    std::vector<int> y;
    const std::size_t pops[16] = {68,  205, 101, 105, 45, 315, 58,  54,
                                  559, 44,  31,  267, 23, 35,  176, 9021};
    for (int c = 0; c < 16; ++c)
        for (std::size_t i = 0; i < pops[c]; ++i) y.push_back(c == 15 ? 0 : 1);
    REQUIRE(y.size() == 11107);

    const std::vector<int> pred(y.size(), 0);  // always the majority class
    const MetricSet m = compute_metrics(y, pred, Averaging::macro);
    CHECK(m.accuracy == 9021.0 / 11107.0);  // bit-exact
}

TEST_CASE("boxplot quartiles interpolate order statistics") {
    // sorted values 1..8; ranks q1 = 0.25*7 = 1.75, med = 3.5, q3 = 5.25
    const std::vector<double> v{5, 1, 8, 3, 2, 7, 4, 6};
    const BoxStats b = boxplot_stats(v);
    CHECK(b.q1 == doctest::Approx(2.75).epsilon(1e-15));
    CHECK(b.median == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(b.q3 == doctest::Approx(6.25).epsilon(1e-15));
    CHECK(b.min == 1.0);
    CHECK(b.max == 8.0);
    CHECK(b.mean == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(b.outliers.empty());
}

TEST_CASE("tukey rule flags the planted outlier exactly") {
    const BoxStats b = boxplot_stats({1, 1, 1, 1, 100});
    CHECK(b.q1 == 1.0);
    CHECK(b.median == 1.0);
    CHECK(b.q3 == 1.0);
    CHECK(b.min == 1.0);   // whiskers cover non-outliers only
    CHECK(b.max == 1.0);
    CHECK(b.mean == doctest::Approx(20.8).epsilon(1e-15));
    REQUIRE(b.outliers.size() == 1);
    CHECK(b.outliers[0] == 100.0);
}

TEST_CASE("single- and two-value boxes degenerate cleanly") {
    const BoxStats one = boxplot_stats({3.5});
    CHECK(one.min == 3.5);
    CHECK(one.q1 == 3.5);
    CHECK(one.median == 3.5);
    CHECK(one.q3 == 3.5);
    CHECK(one.max == 3.5);
    CHECK(one.outliers.empty());

    const BoxStats two = boxplot_stats({1.0, 2.0});
    CHECK(two.q1 == 1.25);
    CHECK(two.median == 1.5);
    CHECK(two.q3 == 1.75);
    CHECK(two.min == 1.0);
    CHECK(two.max == 2.0);

    CHECK_THROWS_AS(boxplot_stats({}), DataError);
}

TEST_CASE("boxplot matches an order-statistic oracle on random draws") {
    // independent oracle under the same pinned convention
    auto oracle = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const auto quart = [&](double p) {
            const double rank = p * static_cast<double>(v.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(rank));
            const double frac = rank - static_cast<double>(lo);
            return frac == 0.0 ? v[lo] : v[lo] + frac * (v[lo + 1] - v[lo]);
        };
        BoxStats b;
        b.q1 = quart(0.25);
        b.median = quart(0.5);
        b.q3 = quart(0.75);
        const double iqr = b.q3 - b.q1;
        const double lo_fence = b.q1 - 1.5 * iqr;
        const double hi_fence = b.q3 + 1.5 * iqr;
        double sum = 0.0;
        b.min = std::numeric_limits<double>::infinity();
        b.max = -std::numeric_limits<double>::infinity();
        for (double x : v) {
            sum += x;
            if (x < lo_fence || x > hi_fence) {
                b.outliers.push_back(x);
            } else {
                b.min = std::min(b.min, x);
                b.max = std::max(b.max, x);
            }
        }
        b.mean = sum / static_cast<double>(v.size());
        return b;
    };

    std::uint64_t state = 12345;
    auto next = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t m = 1 + static_cast<std::size_t>(next() * 40);
        std::vector<double> v(m);
        for (double& x : v) x = std::floor(next() * 20.0) - (rep % 3 == 0 ? 0.0 : next());
        const BoxStats got = boxplot_stats(v);
        const BoxStats want = oracle(v);
        CHECK(got.q1 == doctest::Approx(want.q1).epsilon(1e-12));
        CHECK(got.median == doctest::Approx(want.median).epsilon(1e-12));
        CHECK(got.q3 == doctest::Approx(want.q3).epsilon(1e-12));
        CHECK(got.min == doctest::Approx(want.min).epsilon(1e-12));
        CHECK(got.max == doctest::Approx(want.max).epsilon(1e-12));
        CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-12));
        REQUIRE(got.outliers.size() == want.outliers.size());
        auto go = got.outliers, wo = want.outliers;
        std::sort(go.begin(), go.end());
        std::sort(wo.begin(), wo.end());
        for (std::size_t i = 0; i < go.size(); ++i)
            CHECK(go[i] == doctest::Approx(wo[i]).epsilon(1e-12));
    }
}
