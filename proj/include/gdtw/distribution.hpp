#pragma once

#include <string>
#include <vector>

#include "gdtw/gdtw.hpp"
#include "gdtw/series.hpp"
#include "gdtw/sinkhorn.hpp"

namespace gdtw {

enum class GroundCost { Dtw, SoftDtw, Gdtw, SoftGdtw };
GroundCost parse_ground_cost(const std::string& name);

/// Entry (a, b) = chosen distance between setA[a] and setB[b].
Mat pairwise_ground_costs(const std::vector<TimeSeries>& set_a,
                          const std::vector<TimeSeries>& set_b, GroundCost ground,
                          double gamma, const FwOptions& opts);

struct DatasetDistanceResult {
    double value = 0.0;      ///< Sinkhorn value (debiased if requested)
    double transport = 0.0;  ///< <C, pi> of the A-vs-B problem
    SinkhornResult sinkhorn;
};

/// Entropic OT between the two empirical measures with uniform weights and the
/// chosen (G)DTW ground cost. epsilon <= 0 selects 0.1 * mean(C).
DatasetDistanceResult dataset_distance(const std::vector<TimeSeries>& set_a,
                                       const std::vector<TimeSeries>& set_b,
                                       double epsilon, GroundCost ground, double gamma,
                                       const FwOptions& opts, bool debiased = false,
                                       int max_iters = 1000, double tol = 1e-6);

}  // namespace gdtw
