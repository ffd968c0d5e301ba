#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gdtw/kernels.hpp"

namespace gdtw::kernels {

bool cpu_has_avx2() {
#if defined(GDTW_HAVE_AVX2_BUILD) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Isa pick_default() {
    if (const char* env = std::getenv("GDTW_SIMD")) {
        std::string v(env);
        if (v == "scalar") return Isa::Scalar;
        if (v == "avx2") {
            if (!cpu_has_avx2()) throw std::runtime_error("GDTW_SIMD=avx2 but CPU lacks AVX2/FMA");
            return Isa::Avx2;
        }
        // anything else, including "auto", falls through
    }
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

Isa& current() {
    static Isa isa = pick_default();
    return isa;
}

}  // namespace

Isa active_isa() { return current(); }

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void set_isa(Isa isa) {
    if (isa == Isa::Avx2 && !cpu_has_avx2())
        throw std::runtime_error("CPU does not support AVX2/FMA");
    current() = isa;
}

double dot(const double* a, const double* b, size_t n) {
#if defined(GDTW_HAVE_AVX2_BUILD)
    if (current() == Isa::Avx2) return avx2::dot(a, b, n);
#endif
    return scalar::dot(a, b, n);
}

double sum_sq_diff(const double* a, const double* b, size_t n) {
#if defined(GDTW_HAVE_AVX2_BUILD)
    if (current() == Isa::Avx2) return avx2::sum_sq_diff(a, b, n);
#endif
    return scalar::sum_sq_diff(a, b, n);
}

void axpy(double alpha, const double* x, double* y, size_t n) {
#if defined(GDTW_HAVE_AVX2_BUILD)
    if (current() == Isa::Avx2) return avx2::axpy(alpha, x, y, n);
#endif
    scalar::axpy(alpha, x, y, n);
}

void matmul(const Mat& a, const Mat& b, Mat& c) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
#if defined(GDTW_HAVE_AVX2_BUILD)
    if (current() == Isa::Avx2) return avx2::matmul(a, b, c);
#endif
    scalar::matmul(a, b, c);
}

void matmul_nt(const Mat& a, const Mat& b, Mat& c) {
    if (a.cols != b.cols) throw std::invalid_argument("matmul_nt: inner dimensions differ");
#if defined(GDTW_HAVE_AVX2_BUILD)
    if (current() == Isa::Avx2) return avx2::matmul_nt(a, b, c);
#endif
    scalar::matmul_nt(a, b, c);
}

Mat matmul(const Mat& a, const Mat& b) {
    Mat c;
    matmul(a, b, c);
    return c;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
    Mat c;
    matmul_nt(a, b, c);
    return c;
}

}  // namespace gdtw::kernels
