#include <cmath>
#include <stdexcept>

#include "gdtw/baselines.hpp"
#include "gdtw/kernels.hpp"
#include "gdtw/linalg.hpp"

namespace gdtw {

namespace {

/// Squared-Euclidean cost between x and R y + t.
Mat transformed_cost(const TimeSeries& x, const TimeSeries& y, const Mat& r,
                     const std::vector<double>& t) {
    const int d = x.dim();
    Mat c(x.length(), y.length());
    std::vector<double> fy(d);
    for (int j = 0; j < y.length(); ++j) {
        for (int a = 0; a < d; ++a) {
            double s = t[a];
            for (int b = 0; b < d; ++b) s += r(a, b) * y.points[j][b];
            fy[a] = s;
        }
        for (int i = 0; i < x.length(); ++i)
            c(i, j) = kernels::sum_sq_diff(x.points[i].data(), fy.data(), d);
    }
    return c;
}

}  // namespace

GiResult dtw_gi(const TimeSeries& x, const TimeSeries& y, GiInvariance invariance,
                int iters) {
    x.validate();
    y.validate();
    if (x.is_grid() || y.is_grid())
        throw std::invalid_argument("dtw_gi: Euclidean series required; spaces are "
                                    "incomparable otherwise (use GDTW)");
    const int d = x.dim();
    if (y.dim() != d) throw std::invalid_argument("dtw_gi: dimension mismatch");
    if (d > 3) throw std::invalid_argument("dtw_gi: only d <= 3 is supported");
    if (iters < 1) throw std::invalid_argument("dtw_gi: iters must be >= 1");
    const bool with_translation = invariance == GiInvariance::RotationTranslation;

    GiResult res;
    res.rotation = Mat(d, d);
    for (int i = 0; i < d; ++i) res.rotation(i, i) = 1.0;
    res.translation.assign(d, 0.0);
    if (with_translation) {
        // start from matched centroids; the identity start strands the
        // alternation in poor local minima when the offset is large
        for (int a = 0; a < d; ++a) {
            double sx = 0.0, sy = 0.0;
            for (const auto& p : x.points) sx += p[a];
            for (const auto& p : y.points) sy += p[a];
            res.translation[a] = sx / x.length() - sy / y.length();
        }
    }

    double prev = -1.0;
    for (int it = 0; it < iters; ++it) {
        DtwResult aligned = dtw(transformed_cost(x, y, res.rotation, res.translation));
        res.path = aligned.path;
        res.value = aligned.value;
        res.trace.push_back(aligned.value);
        if (prev >= 0.0 && prev - aligned.value < 1e-12) break;  // stalled
        prev = aligned.value;

        // Procrustes on the aligned pairs: R maximizing tr(R^T M), then t
        double wsum = static_cast<double>(res.path.steps.size());
        std::vector<double> mx(d, 0.0), my(d, 0.0);
        if (with_translation) {
            for (auto [i, j] : res.path.steps)
                for (int a = 0; a < d; ++a) {
                    mx[a] += x.points[i][a];
                    my[a] += y.points[j][a];
                }
            for (int a = 0; a < d; ++a) {
                mx[a] /= wsum;
                my[a] /= wsum;
            }
        }
        Mat cov(d, d);
        for (auto [i, j] : res.path.steps)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    cov(a, b) += (x.points[i][a] - mx[a]) * (y.points[j][b] - my[b]);
        res.rotation = linalg::polar_orthogonal(cov);
        if (with_translation) {
            for (int a = 0; a < d; ++a) {
                double s = mx[a];
                for (int b = 0; b < d; ++b) s -= res.rotation(a, b) * my[b];
                res.translation[a] = s;
            }
        }
    }

    // report the objective under the final transform
    DtwResult final_aligned = dtw(transformed_cost(x, y, res.rotation, res.translation));
    if (final_aligned.value <= res.value) {
        res.value = final_aligned.value;
        res.path = std::move(final_aligned.path);
        if (res.trace.empty() || res.trace.back() > res.value) res.trace.push_back(res.value);
    }
    return res;
}

}  // namespace gdtw
