#pragma once

#include <vector>

#include "gdtw/dtw.hpp"
#include "gdtw/matrix.hpp"
#include "gdtw/series.hpp"

namespace gdtw {

enum class GiInvariance { Rotation, RotationTranslation };

struct GiResult {
    double value = 0.0;
    AlignmentPath path;
    Mat rotation;                      ///< d x d orthogonal (reflections allowed)
    std::vector<double> translation;   ///< zero vector in Rotation mode
    std::vector<double> trace;         ///< per-iteration objective, nonincreasing
};

/// DTW made invariant to a transform family by alternating DTW with
/// closed-form orthogonal Procrustes on the aligned pairs. Squared-Euclidean
/// ground cost, so both alternation blocks are exact minimizers. d <= 3.
GiResult dtw_gi(const TimeSeries& x, const TimeSeries& y, GiInvariance invariance,
                int iters = 30);

}  // namespace gdtw
