#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdtw/matrix.hpp"

namespace gdtw {

/// Ground metric attached to a time series.
struct Metric {
    enum class Kind { Euclidean, SquaredEuclidean, WassersteinGrid };
    Kind kind = Kind::Euclidean;
    double epsilon = 0.0;  ///< WassersteinGrid blur; 0 means 0.01 * squared grid diagonal
    int iters = 200;       ///< WassersteinGrid scaling iterations
};

/// A time series: ordered points in one space, plus the metric on that space.
/// Points are either fixed-dimension real vectors or h x w density grids
/// (elementwise >= 0, summing to 1).
struct TimeSeries {
    std::vector<std::vector<double>> points;
    Metric metric;
    int grid_h = 0;
    int grid_w = 0;

    bool is_grid() const { return grid_h > 0; }
    int length() const { return static_cast<int>(points.size()); }
    int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }

    /// Throws std::invalid_argument on any broken invariant.
    void validate() const;
};

DistanceMatrix pairwise_distances(const TimeSeries& ts);
CostMatrix cross_distances(const TimeSeries& x, const TimeSeries& y);

/// Divide by the max entry; the all-zero matrix passes through unchanged.
DistanceMatrix normalize(const DistanceMatrix& d);

/// x -> R x + t. R must be orthogonal within 1e-10.
TimeSeries apply_isometry(const TimeSeries& ts, const Mat& rotation,
                          const std::vector<double>& translation);

enum class SeriesFormat { Csv, Json };

std::vector<TimeSeries> load_series(const std::string& path, SeriesFormat format,
                                    bool csv_header = false);
void save_series(const std::string& path, const std::vector<TimeSeries>& series,
                 SeriesFormat format);

enum class FixtureKind { Spiral, Circle, Folium, NoisyCopy };
FixtureKind parse_fixture_kind(const std::string& name);

/// Deterministic 2-D synthetic curve; same (kind, T, seed) gives identical output.
TimeSeries gen_fixture(FixtureKind kind, int t, uint64_t seed);

/// Render a 2-D curve as a sequence of h x w density grids (one Gaussian blob
/// per time step, normalized to sum 1). Stand-in for video experts.
TimeSeries render_grid_video(const TimeSeries& curve, int h, int w, double sigma);

}  // namespace gdtw
