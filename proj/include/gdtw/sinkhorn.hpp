#pragma once

#include <vector>

#include "gdtw/matrix.hpp"

namespace gdtw {

/// Transport plan between two discrete measures, with the marginals it was
/// solved against.
struct Coupling {
    Mat matrix;
    std::vector<double> p;
    std::vector<double> q;
};

struct SinkhornResult {
    Coupling coupling;
    double value = 0.0;      ///< <C, pi> - eps * H(pi), H(pi) = -sum pi (log pi - 1)
    double transport = 0.0;  ///< <C, pi>
    bool converged = false;
    int iterations = 0;
};

/// Entropic OT by log-domain alternating scaling. Stops when the worst
/// marginal violation drops below tol or after max_iters.
SinkhornResult sinkhorn(const Mat& cost, const std::vector<double>& p,
                        const std::vector<double>& q, double epsilon,
                        int max_iters = 1000, double tol = 1e-6);

/// Entropic 2-Wasserstein distance between two densities on an h x w pixel
/// grid, squared-Euclidean ground cost between cell centers. Uses the
/// separable-kernel scaling iteration, so it stays cheap for image metrics.
/// Returns sqrt(<C, pi>).
double grid_wasserstein2(const std::vector<double>& a, const std::vector<double>& b,
                         int h, int w, double epsilon, int max_iters);

}  // namespace gdtw
