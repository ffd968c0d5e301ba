#include "gdtw/kernels.hpp"

#if defined(GDTW_HAVE_AVX2_BUILD)

#include <immintrin.h>

namespace gdtw::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot(const double* a, const double* b, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_diff(const double* a, const double* b, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, size_t n) {
    const __m256d av = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matmul(const Mat& a, const Mat& b, Mat& c) {
    const int m = a.rows, k = a.cols, n = b.cols;
    c = Mat(m, n);
    for (int i = 0; i < m; ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (int p = 0; p < k; ++p) {
            if (ai[p] == 0.0) continue;
            axpy(ai[p], b.row(p), ci, static_cast<size_t>(n));
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

}  // namespace gdtw::kernels::avx2

#endif  // GDTW_HAVE_AVX2_BUILD
