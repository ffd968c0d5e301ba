#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace gdtw {

/// Dense row-major matrix of doubles. The only container the solvers use.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

    Mat transposed() const {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Cross-series cost matrix D_ij (nonnegative, finite).
using CostMatrix = Mat;

/// Symmetric nonnegative intra-series distance matrix.
struct DistanceMatrix {
    Mat m;
    bool normalized = false;

    int size() const { return m.rows; }
};

}  // namespace gdtw
