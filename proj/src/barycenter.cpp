#include <cmath>
#include <stdexcept>

#include "gdtw/barycenter.hpp"
#include "gdtw/kernels.hpp"
#include "gdtw/linalg.hpp"

namespace gdtw {

namespace {

void check_weights(const std::vector<double>& alpha) {
    double s = 0.0;
    for (double a : alpha) {
        if (a < -1e-9) throw std::invalid_argument("barycenter: negative weight");
        s += a;
    }
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("barycenter: weights must lie on the simplex");
}

}  // namespace

Mat barycenter_update(const std::vector<Mat>& d_list,
                      const std::vector<AlignmentPath>& a_list,
                      const std::vector<double>& alpha) {
    const size_t j_count = d_list.size();
    if (j_count == 0 || a_list.size() != j_count || alpha.size() != j_count)
        throw std::invalid_argument("barycenter_update: list sizes differ");
    check_weights(alpha);

    const int t = a_list[0].rows;
    Mat num(t, t), den(t, t);
    for (size_t j = 0; j < j_count; ++j) {
        const AlignmentPath& a = a_list[j];
        const Mat& d = d_list[j];
        if (a.rows != t || a.cols != d.rows || d.rows != d.cols)
            throw std::invalid_argument("barycenter_update: shape mismatch");
        Mat ind = a.indicator();
        // A D A^T and the mass outer product (A 1)(A 1)^T
        Mat ada = kernels::matmul_nt(kernels::matmul(ind, d), ind);
        std::vector<double> rm = a.row_mass();
        for (int p = 0; p < t; ++p)
            for (int q = 0; q < t; ++q) {
                num(p, q) += alpha[j] * ada(p, q);
                den(p, q) += alpha[j] * rm[p] * rm[q];
            }
    }

    Mat out(t, t);
    for (int p = 0; p < t; ++p)
        for (int q = 0; q < t; ++q) out(p, q) = num(p, q) / den(p, q);
    // absorb round-off and pin the diagonal
    for (int p = 0; p < t; ++p) {
        out(p, p) = 0.0;
        for (int q = p + 1; q < t; ++q) {
            double v = 0.5 * (out(p, q) + out(q, p));
            out(p, q) = v;
            out(q, p) = v;
        }
    }
    return out;
}

double barycenter_objective(const Mat& d, const std::vector<Mat>& d_list,
                            const std::vector<AlignmentPath>& a_list,
                            const std::vector<double>& alpha) {
    double s = 0.0;
    for (size_t j = 0; j < d_list.size(); ++j)
        s += alpha[j] * gdtw_objective(d, d_list[j], a_list[j]);
    return s;
}

BarycenterResult gdtw_barycenter_matrices(const std::vector<Mat>& d_list,
                                          const std::vector<double>& alpha, int t,
                                          const Mat& d_init,
                                          const BarycenterOptions& opts) {
    const size_t j_count = d_list.size();
    if (j_count == 0) throw std::invalid_argument("gdtw_barycenter: need at least one series");
    check_weights(alpha);
    if (t < 2) throw std::invalid_argument("gdtw_barycenter: barycenter length must be >= 2");

    FwOptions inner = opts.fw;
    inner.normalize_inputs = false;  // inputs are prepared once by the caller

    BarycenterResult res;
    Mat d = d_init;
    for (int outer = 0; outer < opts.outer_iters; ++outer) {
        std::vector<AlignmentPath> aligns;
        aligns.reserve(j_count);
        for (size_t j = 0; j < j_count; ++j) {
            DistanceMatrix db{d, false}, dj{d_list[j], false};
            GdtwResult r = inner.gamma > 0.0 ? soft_gdtw(db, dj, inner) : gdtw(db, dj, inner);
            aligns.push_back(inner.gamma > 0.0 ? round_to_path(r.soft_alignment)
                                               : r.alignment);
        }
        Mat d_next = barycenter_update(d_list, aligns, alpha);
        res.objective_trace.push_back(barycenter_objective(d_next, d_list, aligns, alpha));
        res.alignments = std::move(aligns);
        res.outer_iterations = outer + 1;

        double delta = 0.0;
        for (size_t k = 0; k < d.data.size(); ++k)
            delta = std::max(delta, std::abs(d_next.data[k] - d.data[k]));
        d = std::move(d_next);
        if (delta < opts.tol) break;
    }
    res.distance_matrix = DistanceMatrix{std::move(d), false};
    if (opts.embed_dim > 0) {
        res.embedded = mds_embed(res.distance_matrix, opts.embed_dim);
        res.has_embedding = true;
    }
    return res;
}

BarycenterResult gdtw_barycenter(const std::vector<TimeSeries>& series,
                                 const std::vector<double>& alpha, int t,
                                 const BarycenterOptions& opts) {
    if (series.empty()) throw std::invalid_argument("gdtw_barycenter: no input series");
    std::vector<Mat> d_list;
    d_list.reserve(series.size());
    for (const auto& s : series) {
        DistanceMatrix d = pairwise_distances(s);
        d_list.push_back(opts.fw.normalize_inputs ? normalize(d).m : d.m);
    }

    // init: distance matrix of the first series uniformly resampled to length t
    const TimeSeries& first = series[0];
    TimeSeries resampled = first;
    resampled.points.clear();
    for (int i = 0; i < t; ++i) {
        double pos = first.length() == 1
                         ? 0.0
                         : static_cast<double>(i) * (first.length() - 1) / (t - 1);
        resampled.points.push_back(first.points[static_cast<int>(std::lround(pos))]);
    }
    DistanceMatrix d0 = pairwise_distances(resampled);
    Mat d_init = opts.fw.normalize_inputs ? normalize(d0).m : d0.m;

    return gdtw_barycenter_matrices(d_list, alpha, t, d_init, opts);
}

TimeSeries mds_embed(const DistanceMatrix& d, int dim) {
    const int t = d.size();
    if (t < 1 || d.m.cols != t) throw std::invalid_argument("mds_embed: invalid matrix");
    if (dim < 1 || dim > t) throw std::invalid_argument("mds_embed: dim out of range");

    // B = -1/2 J (D o D) J with J = I - 11^T/T
    Mat sq(t, t);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) sq(i, j) = d.m(i, j) * d.m(i, j);
    std::vector<double> rmean(t, 0.0);
    double total = 0.0;
    for (int i = 0; i < t; ++i) {
        for (int j = 0; j < t; ++j) rmean[i] += sq(i, j);
        rmean[i] /= t;
        total += rmean[i];
    }
    total /= t;
    Mat b(t, t);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j)
            b(i, j) = -0.5 * (sq(i, j) - rmean[i] - rmean[j] + total);

    linalg::EigResult eig = linalg::jacobi_eigh(b);
    TimeSeries out;
    for (int i = 0; i < t; ++i) {
        std::vector<double> p(dim, 0.0);
        for (int c = 0; c < dim; ++c) {
            double lam = std::max(eig.values[c], 0.0);
            p[c] = eig.vectors(i, c) * std::sqrt(lam);
        }
        out.points.push_back(std::move(p));
    }
    return out;
}

}  // namespace gdtw
