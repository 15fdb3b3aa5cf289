#include <vector>

#include <doctest.h>

#include "aptfs/error.hpp"
#include "aptfs/preprocess.hpp"
#include "helpers.hpp"

using namespace aptfs;
using testutil::make_dataset;

TEST_CASE("scaler maps training data onto [0,1] and drops constants") {
    const auto train = make_dataset(3, 3,
                                    {0.0, 5.0, 2.0,  //
                                     10.0, 5.0, 4.0,  //
                                     5.0, 5.0, 3.0},
                                    {1, 2, 1});
    const Scaler sc = fit_scaler(train);
    CHECK(sc.original_dim() == 3);
    CHECK(sc.kept_dim() == 2);  // middle feature is constant
    CHECK(sc.kept_features == std::vector<std::size_t>{0, 2});
    CHECK(sc.to_original(0) == 0);
    CHECK(sc.to_original(1) == 2);

    const Dataset scaled = apply_scaler(sc, train);
    CHECK(scaled.n_features() == 2);
    CHECK(scaled.X(0, 0) == 0.0);
    CHECK(scaled.X(1, 0) == 1.0);
    CHECK(scaled.X(2, 0) == 0.5);
    CHECK(scaled.X(0, 1) == 0.0);
    CHECK(scaled.X(1, 1) == 1.0);
    CHECK(scaled.X(2, 1) == 0.5);
    CHECK(scaled.metas[0].name == "f_000");
    CHECK(scaled.metas[1].name == "f_002");
    CHECK(scaled.y == train.y);
}

TEST_CASE("unseen values clamp to the pinned guard band") {
    const auto train = make_dataset(2, 2, {0.0, 1.0, 10.0, 2.0}, {1, 2});
    const Scaler sc = fit_scaler(train);

    const auto test = make_dataset(2, 2, {-100.0, 0.8, 100.0, 3.0}, {1, 2});
    const Dataset scaled = apply_scaler(sc, test);
    CHECK(scaled.X(0, 0) == Scaler::kClampLo);   // (-100-0)/10 = -10, clamped
    CHECK(scaled.X(1, 0) == Scaler::kClampHi);   // 100 -> 10, clamped
    CHECK(scaled.X(0, 1) == doctest::Approx(-0.2).epsilon(1e-12));  // inside the band
    CHECK(scaled.X(1, 1) == Scaler::kClampHi);   // (3-1)/1 = 2, clamped
}

TEST_CASE("apply_scaler rejects dimension mismatches") {
    const auto train = make_dataset(2, 2, {0, 1, 2, 3}, {1, 2});
    const Scaler sc = fit_scaler(train);
    const auto other = make_dataset(1, 3, {1, 2, 3}, {1});
    CHECK_THROWS_AS(apply_scaler(sc, other), DataError);
}
