#include <doctest.h>

#include <cmath>

#include "gdtw/barycenter.hpp"
#include "gdtw/rng.hpp"
#include "gdtw/series.hpp"

using namespace gdtw;

namespace {

Mat random_distance_matrix(SplitMix64& rng, int t) {
    Mat d(t, t);
    for (int i = 0; i < t; ++i)
        for (int k = i + 1; k < t; ++k) d(i, k) = d(k, i) = rng.uniform(0.1, 1.0);
    return d;
}

AlignmentPath identity_path(int t) {
    AlignmentPath p;
    p.rows = p.cols = t;
    for (int i = 0; i < t; ++i) p.steps.emplace_back(i, i);
    return p;
}

Mat rotation2(double a) {
    Mat r(2, 2);
    r(0, 0) = std::cos(a);
    r(0, 1) = -std::sin(a);
    r(1, 0) = std::sin(a);
    r(1, 1) = std::cos(a);
    return r;
}

// independent slow objective: sum_j alpha_j sum_{ik,jl} (D_ik - Dj_kl')^2 ...
double slow_objective(const Mat& d, const std::vector<Mat>& d_list,
                      const std::vector<AlignmentPath>& a_list,
                      const std::vector<double>& alpha) {
    double total = 0.0;
    for (size_t j = 0; j < d_list.size(); ++j) {
        Mat a = a_list[j].indicator();
        double s = 0.0;
        for (int i = 0; i < a.rows; ++i)
            for (int jj = 0; jj < a.cols; ++jj) {
                if (a(i, jj) == 0.0) continue;
                for (int k = 0; k < a.rows; ++k)
                    for (int l = 0; l < a.cols; ++l) {
                        double t = d(i, k) - d_list[j](jj, l);
                        s += t * t * a(k, l);
                    }
            }
        total += alpha[j] * s;
    }
    return total;
}

// projected gradient descent over symmetric zero-diagonal D, numeric gradient
Mat numeric_minimizer(const std::vector<Mat>& d_list,
                      const std::vector<AlignmentPath>& a_list,
                      const std::vector<double>& alpha, int t) {
    Mat d(t, t, 0.5);
    for (int i = 0; i < t; ++i) d(i, i) = 0.0;
    double lr = 0.05;
    for (int step = 0; step < 4000; ++step) {
        double base = slow_objective(d, d_list, a_list, alpha);
        Mat grad(t, t);
        const double h = 1e-6;
        double gmax = 0.0;
        for (int p = 0; p < t; ++p)
            for (int q = p + 1; q < t; ++q) {
                Mat dp = d;
                dp(p, q) += h;
                dp(q, p) += h;
                double g = (slow_objective(dp, d_list, a_list, alpha) - base) / h;
                grad(p, q) = g;
                gmax = std::max(gmax, std::abs(g));
            }
        if (gmax < 1e-10) break;
        for (int p = 0; p < t; ++p)
            for (int q = p + 1; q < t; ++q) {
                d(p, q) -= lr * grad(p, q);
                d(q, p) = d(p, q);
            }
    }
    return d;
}

}  // namespace

TEST_CASE("barycenter_update trivial cases") {
    SplitMix64 rng(61);
    Mat d = random_distance_matrix(rng, 4);
    auto out = barycenter_update({d}, {identity_path(4)}, {1.0});
    for (size_t i = 0; i < d.data.size(); ++i)
        CHECK(out.data[i] == doctest::Approx(d.data[i]).epsilon(1e-14));

    Mat d2 = random_distance_matrix(rng, 4);
    auto avg = barycenter_update({d, d2}, {identity_path(4), identity_path(4)}, {0.5, 0.5});
    for (size_t i = 0; i < d.data.size(); ++i)
        CHECK(avg.data[i] == doctest::Approx(0.5 * (d.data[i] + d2.data[i])).epsilon(1e-14));

    CHECK_THROWS_AS(barycenter_update({d}, {identity_path(4)}, {0.7}),
                    std::invalid_argument);
    CHECK_THROWS_AS(barycenter_update({d}, {identity_path(3)}, {1.0}),
                    std::invalid_argument);
}

TEST_CASE("barycenter_update output shape properties") {
    SplitMix64 rng(62);
    std::vector<Mat> ds{random_distance_matrix(rng, 5), random_distance_matrix(rng, 3)};
    std::vector<AlignmentPath> as{diagonal_band_path(4, 5), diagonal_band_path(4, 3)};
    auto out = barycenter_update(ds, as, {0.3, 0.7});
    for (int p = 0; p < 4; ++p) {
        CHECK(out(p, p) == 0.0);
        for (int q = 0; q < 4; ++q) {
            CHECK(out(p, q) == out(q, p));
            CHECK(out(p, q) >= 0.0);
        }
    }
    // stationarity: re-running on its own output with the same alignments
    // yields the same matrix (closed form is independent of the current D)
    auto again = barycenter_update(ds, as, {0.3, 0.7});
    for (size_t i = 0; i < out.data.size(); ++i)
        CHECK(again.data[i] == doctest::Approx(out.data[i]).epsilon(1e-12));
}

TEST_CASE("barycenter_update equals numerical minimizer of the objective") {
    SplitMix64 rng(63);
    for (int rep = 0; rep < 3; ++rep) {
        const int t = 3;
        std::vector<Mat> ds{random_distance_matrix(rng, 3), random_distance_matrix(rng, 4)};
        std::vector<AlignmentPath> as{random_monotone_path(t, 3, rng.next()),
                                      random_monotone_path(t, 4, rng.next())};
        std::vector<double> alpha{0.4, 0.6};

        Mat closed = barycenter_update(ds, as, alpha);
        Mat numeric = numeric_minimizer(ds, as, alpha, t);
        for (int p = 0; p < t; ++p)
            for (int q = 0; q < t; ++q)
                CHECK(std::abs(closed(p, q) - numeric(p, q)) <= 1e-6);

        // exact minimizer never beats the closed form
        CHECK(slow_objective(closed, ds, as, alpha) <=
              slow_objective(numeric, ds, as, alpha) + 1e-9);
    }
}

TEST_CASE("barycenter_update permutation equivariance in j") {
    SplitMix64 rng(64);
    std::vector<Mat> ds{random_distance_matrix(rng, 3), random_distance_matrix(rng, 5),
                        random_distance_matrix(rng, 4)};
    std::vector<AlignmentPath> as{diagonal_band_path(4, 3), diagonal_band_path(4, 5),
                                  diagonal_band_path(4, 4)};
    std::vector<double> alpha{0.2, 0.5, 0.3};
    auto a1 = barycenter_update(ds, as, alpha);
    auto a2 = barycenter_update({ds[2], ds[0], ds[1]}, {as[2], as[0], as[1]},
                                {alpha[2], alpha[0], alpha[1]});
    for (size_t i = 0; i < a1.data.size(); ++i)
        CHECK(a1.data[i] == doctest::Approx(a2.data[i]).epsilon(1e-14));
}

TEST_CASE("gdtw_barycenter self-barycenter and nonincreasing trace") {
    TimeSeries x = gen_fixture(FixtureKind::Spiral, 8, 0);
    BarycenterOptions opts;
    opts.fw.restarts = 1;
    auto r = gdtw_barycenter({x}, {1.0}, 8, opts);
    REQUIRE(!r.objective_trace.empty());
    CHECK(r.objective_trace.back() <= 1e-10);

    // trace is nonincreasing across D-updates
    TimeSeries y = gen_fixture(FixtureKind::Circle, 10, 1);
    TimeSeries z = gen_fixture(FixtureKind::Folium, 7, 2);
    auto r2 = gdtw_barycenter({y, z}, {0.5, 0.5}, 9, opts);
    for (size_t i = 1; i < r2.objective_trace.size(); ++i)
        CHECK(r2.objective_trace[i] <= r2.objective_trace[i - 1] + 1e-9);
    CHECK(r2.distance_matrix.m.rows == 9);
    for (const auto& a : r2.alignments) {
        CHECK(a.rows == 9);
        CHECK(a.valid());
    }
}

TEST_CASE("gdtw_barycenter of isometric copies recovers the source shape") {
    SplitMix64 rng(65);
    TimeSeries base = gen_fixture(FixtureKind::Spiral, 12, 3);
    std::vector<TimeSeries> copies;
    for (int j = 0; j < 4; ++j)
        copies.push_back(apply_isometry(base, rotation2(rng.uniform(0.0, 2 * M_PI)),
                                        {rng.normal(), rng.normal()}));
    BarycenterOptions opts;
    opts.fw.restarts = 2;
    std::vector<double> alpha(4, 0.25);
    auto r = gdtw_barycenter(copies, alpha, 12, opts);
    CHECK(r.objective_trace.back() <= 1e-6);

    // the barycenter matrix matches the source's normalized matrix after
    // re-aligning (non-uniqueness: compare through the solver, not pointwise)
    FwOptions fw;
    auto match = gdtw::gdtw(r.distance_matrix, pairwise_distances(base), fw);
    CHECK(match.value <= 1e-3);
}

TEST_CASE("mds_embed basics") {
    DistanceMatrix zeros{Mat(4, 4), false};
    auto origin = mds_embed(zeros, 2);
    for (const auto& p : origin.points)
        for (double v : p) CHECK(v == doctest::Approx(0.0));

    // 3-4-5 triangle
    DistanceMatrix tri{Mat(3, 3), false};
    tri.m(0, 1) = tri.m(1, 0) = 3.0;
    tri.m(0, 2) = tri.m(2, 0) = 4.0;
    tri.m(1, 2) = tri.m(2, 1) = 5.0;
    auto emb = mds_embed(tri, 2);
    auto back = pairwise_distances(emb);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(back.m(i, j) - tri.m(i, j)) <= 1e-6);

    // collinear points embed on a line
    TimeSeries line;
    line.points = {{0.0}, {1.0}, {3.0}, {6.0}};
    auto dl = pairwise_distances(line);
    auto el = mds_embed(dl, 2);
    double second = 0.0, first = 0.0;
    for (const auto& p : el.points) {
        first = std::max(first, std::abs(p[0]));
        second = std::max(second, std::abs(p[1]));
    }
    // second eigenvalue <= 1e-9 x first; coordinates carry sqrt(eigenvalue)
    CHECK(second * second <= 1e-9 * std::max(first * first, 1.0));
    auto dback = pairwise_distances(el);
    for (size_t i = 0; i < dl.m.data.size(); ++i)
        CHECK(std::abs(dback.m.data[i] - dl.m.data[i]) <= 1e-6);

    CHECK_THROWS_AS(mds_embed(tri, 0), std::invalid_argument);
    CHECK_THROWS_AS(mds_embed(tri, 4), std::invalid_argument);
}

TEST_CASE("mds round trip on a random planar configuration") {
    SplitMix64 rng(66);
    TimeSeries pts;
    for (int i = 0; i < 7; ++i) pts.points.push_back({rng.normal(), rng.normal()});
    auto d = pairwise_distances(pts);
    auto emb = mds_embed(d, 2);
    auto back = pairwise_distances(emb);
    for (size_t i = 0; i < d.m.data.size(); ++i)
        CHECK(std::abs(back.m.data[i] - d.m.data[i]) <= 1e-6);
}
