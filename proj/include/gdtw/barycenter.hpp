#pragma once

#include <vector>

#include "gdtw/gdtw.hpp"
#include "gdtw/matrix.hpp"
#include "gdtw/series.hpp"

namespace gdtw {

struct BarycenterResult {
    DistanceMatrix distance_matrix;        ///< D*, T x T
    std::vector<AlignmentPath> alignments; ///< alignments[j] has shape (T, T_j)
    TimeSeries embedded;                   ///< MDS reconstruction (when requested)
    bool has_embedding = false;
    std::vector<double> objective_trace;   ///< value after each D-update
    int outer_iterations = 0;
};

struct BarycenterOptions {
    FwOptions fw;          ///< inner alignment solves (gamma 0 = hard)
    int outer_iters = 30;
    double tol = 1e-6;
    int embed_dim = 0;     ///< > 0: run mds_embed on the result
};

/// Closed-form D-update at fixed alignments: the weighted alignment average of
/// the input matrices, elementwise-divided by the alignment mass outer
/// products. Output symmetrized, diagonal forced to zero.
Mat barycenter_update(const std::vector<Mat>& d_list,
                      const std::vector<AlignmentPath>& a_list,
                      const std::vector<double>& alpha);

double barycenter_objective(const Mat& d, const std::vector<Mat>& d_list,
                            const std::vector<AlignmentPath>& a_list,
                            const std::vector<double>& alpha);

/// Alternating minimization: per-series alignment solves, then the
/// closed-form D-update. Input matrices are normalized once up front when
/// opts.fw.normalize_inputs is set; the evolving barycenter matrix is not
/// re-normalized between iterations.
BarycenterResult gdtw_barycenter(const std::vector<TimeSeries>& series,
                                 const std::vector<double>& alpha, int t,
                                 const BarycenterOptions& opts = {});

BarycenterResult gdtw_barycenter_matrices(const std::vector<Mat>& d_list,
                                          const std::vector<double>& alpha, int t,
                                          const Mat& d_init,
                                          const BarycenterOptions& opts = {});

/// Classical MDS: double-center -1/2 J (D o D) J, eigendecompose, keep the top
/// dim nonnegative eigenvalues. Row order of D is preserved as time order.
TimeSeries mds_embed(const DistanceMatrix& d, int dim);

}  // namespace gdtw
