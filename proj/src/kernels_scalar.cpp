#include <cstring>
#include <stdexcept>

#include "gdtw/kernels.hpp"

namespace gdtw::kernels::scalar {

double dot(const double* a, const double* b, size_t n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_diff(const double* a, const double* b, size_t n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// ikj loop order so the inner loop streams rows of B and C.
void matmul(const Mat& a, const Mat& b, Mat& c) {
    const int m = a.rows, k = a.cols, n = b.cols;
    c = Mat(m, n);
    for (int i = 0; i < m; ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (int p = 0; p < k; ++p) {
            const double av = ai[p];
            if (av == 0.0) continue;
            const double* bp = b.row(p);
            for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
        }
    }
}

void matmul_nt(const Mat& a, const Mat& b, Mat& c) {
    const int m = a.rows, k = a.cols, n = b.rows;
    c = Mat(m, n);
    for (int i = 0; i < m; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (int j = 0; j < n; ++j) ci[j] = dot(ai, b.row(j), static_cast<size_t>(k));
    }
}

}  // namespace gdtw::kernels::scalar
