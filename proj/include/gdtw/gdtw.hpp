#pragma once

#include <cstdint>
#include <vector>

#include "gdtw/dtw.hpp"
#include "gdtw/matrix.hpp"
#include "gdtw/series.hpp"

namespace gdtw {

enum class FwInit { DiagonalBand, RandomMonotone, Given };
enum class SolveStatus { Converged, LimitCycle, MaxIter };

struct FwOptions {
    double gamma = 0.0;  ///< 0 = hard alignments
    int max_iter = 25;
    FwInit init = FwInit::DiagonalBand;
    uint64_t seed = 0;           ///< RandomMonotone and restart streams
    AlignmentPath given_init;    ///< used when init == Given
    int restarts = 5;            ///< extra random initializations beyond the base one
    double tol = 1e-6;
    bool normalize_inputs = true;

    void validate() const;
};

struct GdtwResult {
    double value = 0.0;
    AlignmentPath alignment;       ///< hard solve
    SoftAlignment soft_alignment;  ///< gamma > 0
    bool is_soft = false;
    std::vector<double> objective_trace;
    SolveStatus status = SolveStatus::MaxIter;
    int cycle_period = 0;
    int restart_index = 0;
};

/// (L (x) A)_ij = sum_kl (Dx_ik - Dy_jl)^2 A_kl via the three-product
/// decomposition; works for hard indicators and soft matrices alike.
Mat tensor_apply(const Mat& dx, const Mat& dy, const Mat& a);

double gdtw_objective(const Mat& dx, const Mat& dy, const Mat& a);
double gdtw_objective(const Mat& dx, const Mat& dy, const AlignmentPath& a);
double gdtw_objective(const Mat& dx, const Mat& dy, const SoftAlignment& a);

/// The staircase in A(m,n) closest to the straight diagonal.
AlignmentPath diagonal_band_path(int m, int n);
AlignmentPath random_monotone_path(int m, int n, uint64_t seed);

/// Hard Frank-Wolfe solve (opts.gamma must be 0). Terminates on a revisited
/// alignment (period 1 = Converged, else LimitCycle) or max_iter; best final
/// objective over restarts wins, ties to the lowest restart index.
GdtwResult gdtw(const DistanceMatrix& dx, const DistanceMatrix& dy, const FwOptions& opts = {});
GdtwResult gdtw(const TimeSeries& x, const TimeSeries& y, const FwOptions& opts = {});

/// Soft variant (opts.gamma > 0): inner step is soft_argmin on the tensor
/// product; converged when successive soft matrices differ by < tol in max norm.
GdtwResult soft_gdtw(const DistanceMatrix& dx, const DistanceMatrix& dy,
                     const FwOptions& opts);
GdtwResult soft_gdtw(const TimeSeries& x, const TimeSeries& y, const FwOptions& opts);

/// Gradient of <L(x,y) (x) A, A> with respect to x's coordinates at fixed A.
/// x must be Euclidean or SquaredEuclidean. If normalize is true the
/// normalization constants are frozen during differentiation.
std::vector<std::vector<double>> gdtw_grad(const TimeSeries& x, const TimeSeries& y,
                                           const Mat& a, bool normalize = false);
std::vector<std::vector<double>> gdtw_grad(const TimeSeries& x, const TimeSeries& y,
                                           const AlignmentPath& a, bool normalize = false);
std::vector<std::vector<double>> gdtw_grad(const TimeSeries& x, const TimeSeries& y,
                                           const SoftAlignment& a, bool normalize = false);

/// Gradient of the objective with respect to x points when y is given only as
/// a distance matrix (imitation against non-Euclidean experts).
std::vector<std::vector<double>> gdtw_grad_dy(const TimeSeries& x, const Mat& dy_raw,
                                              const Mat& a, bool normalize);

}  // namespace gdtw
