#include <doctest.h>

#include <cmath>

#include "gdtw/baselines.hpp"
#include "gdtw/linalg.hpp"
#include "gdtw/rng.hpp"
#include "gdtw/series.hpp"

using namespace gdtw;

namespace {

Mat rotation2(double a) {
    Mat r(2, 2);
    r(0, 0) = std::cos(a);
    r(0, 1) = -std::sin(a);
    r(1, 0) = std::sin(a);
    r(1, 1) = std::cos(a);
    return r;
}

}  // namespace

TEST_CASE("dtw_gi recovers pure rotations in rotation mode") {
    SplitMix64 rng(81);
    TimeSeries x = gen_fixture(FixtureKind::Folium, 20, 0);
    for (int rep = 0; rep < 5; ++rep) {
        auto y = apply_isometry(x, rotation2(rng.uniform(0.0, 2 * M_PI)), {0.0, 0.0});
        auto r = dtw_gi(x, y, GiInvariance::Rotation);
        CHECK(r.value <= 1e-8);
        CHECK(linalg::is_orthogonal(r.rotation, 1e-8));
        CHECK(r.translation == std::vector<double>{0.0, 0.0});
    }
}

TEST_CASE("dtw_gi rotation mode cannot absorb translations") {
    TimeSeries x = gen_fixture(FixtureKind::Folium, 20, 0);
    auto y = apply_isometry(x, rotation2(0.0), {1.0, 0.0});  // unit translation
    auto rot_only = dtw_gi(x, y, GiInvariance::Rotation);
    CHECK(rot_only.value >= 0.1);

    auto both = dtw_gi(x, y, GiInvariance::RotationTranslation);
    CHECK(both.value <= 1e-6);
}

TEST_CASE("dtw_gi rotation+translation recovers random isometries") {
    SplitMix64 rng(82);
    TimeSeries x = gen_fixture(FixtureKind::Folium, 18, 0);
    for (int rep = 0; rep < 5; ++rep) {
        auto y = apply_isometry(x, rotation2(rng.uniform(0.0, 2 * M_PI)),
                                {rng.normal(), rng.normal()});
        auto r = dtw_gi(x, y, GiInvariance::RotationTranslation);
        CHECK(r.value <= 1e-6);
        CHECK(linalg::is_orthogonal(r.rotation, 1e-8));
        CHECK(r.path.valid());
    }
}

TEST_CASE("dtw_gi trace is nonincreasing") {
    SplitMix64 rng(83);
    TimeSeries x, y;
    for (int i = 0; i < 12; ++i) x.points.push_back({rng.normal(), rng.normal()});
    for (int i = 0; i < 15; ++i) y.points.push_back({rng.normal(), rng.normal()});
    for (auto inv : {GiInvariance::Rotation, GiInvariance::RotationTranslation}) {
        auto r = dtw_gi(x, y, inv);
        REQUIRE(!r.trace.empty());
        for (size_t i = 1; i < r.trace.size(); ++i)
            CHECK(r.trace[i] <= r.trace[i - 1] + 1e-9);
        CHECK(r.value == doctest::Approx(r.trace.back()));
        CHECK(r.value >= 0.0);
    }
}

TEST_CASE("dtw_gi input validation") {
    TimeSeries x = gen_fixture(FixtureKind::Circle, 5, 0);
    TimeSeries y4;
    y4.points = {{1, 2, 3, 4}, {2, 3, 4, 5}};
    TimeSeries x4;
    x4.points = {{0, 0, 0, 0}, {1, 1, 1, 1}};
    CHECK_THROWS_AS(dtw_gi(x4, y4, GiInvariance::Rotation), std::invalid_argument);

    TimeSeries mismatched;
    mismatched.points = {{1.0}, {2.0}};
    CHECK_THROWS_AS(dtw_gi(x, mismatched, GiInvariance::Rotation), std::invalid_argument);

    auto grid = render_grid_video(x, 8, 8, 1.0);
    CHECK_THROWS_WITH_AS(dtw_gi(x, grid, GiInvariance::Rotation),
                         doctest::Contains("GDTW"), std::invalid_argument);
}

TEST_CASE("polar_orthogonal recovers rotations from scaled inputs") {
    SplitMix64 rng(84);
    for (int rep = 0; rep < 5; ++rep) {
        Mat r = rotation2(rng.uniform(0.0, 2 * M_PI));
        Mat scaled = r;
        for (double& v : scaled.data) v *= 2.5;  // positive scalar factor
        Mat rec = linalg::polar_orthogonal(scaled);
        for (size_t i = 0; i < r.data.size(); ++i)
            CHECK(rec.data[i] == doctest::Approx(r.data[i]).epsilon(1e-8));
        CHECK(linalg::is_orthogonal(rec, 1e-10));
    }
}
