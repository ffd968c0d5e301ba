#pragma once

#include <cstddef>
#include <string>

#include "gdtw/matrix.hpp"

namespace gdtw::kernels {

enum class Isa { Scalar, Avx2 };

/// ISA selected at startup (AVX2+FMA when the CPU has it, else scalar).
/// GDTW_SIMD=scalar|avx2|auto overrides.
Isa active_isa();
const char* isa_name(Isa isa);

/// Force a specific ISA (tests use this to cross-check implementations).
/// Throws std::runtime_error if the CPU cannot run it.
void set_isa(Isa isa);

double dot(const double* a, const double* b, size_t n);
double sum_sq_diff(const double* a, const double* b, size_t n);
void axpy(double alpha, const double* x, double* y, size_t n);

/// C = A * B, row-major, C must be pre-sized (m x n) and is overwritten.
void matmul(const Mat& a, const Mat& b, Mat& c);
/// C = A * B^T.
void matmul_nt(const Mat& a, const Mat& b, Mat& c);

Mat matmul(const Mat& a, const Mat& b);
Mat matmul_nt(const Mat& a, const Mat& b);

// Scalar reference kernels, always available; the dispatched versions above
// must agree with these to round-off.
namespace scalar {
double dot(const double* a, const double* b, size_t n);
double sum_sq_diff(const double* a, const double* b, size_t n);
void axpy(double alpha, const double* x, double* y, size_t n);
void matmul(const Mat& a, const Mat& b, Mat& c);
void matmul_nt(const Mat& a, const Mat& b, Mat& c);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define GDTW_HAVE_AVX2_BUILD 1
namespace avx2 {
double dot(const double* a, const double* b, size_t n);
double sum_sq_diff(const double* a, const double* b, size_t n);
void axpy(double alpha, const double* x, double* y, size_t n);
void matmul(const Mat& a, const Mat& b, Mat& c);
void matmul_nt(const Mat& a, const Mat& b, Mat& c);
}  // namespace avx2
#endif

bool cpu_has_avx2();

}  // namespace gdtw::kernels
