#pragma once

#include <vector>

#include "gdtw/matrix.hpp"

namespace gdtw::linalg {

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues sorted descending; eigenvectors are the columns of `vectors`,
/// each with a deterministic sign (largest-magnitude component positive).
struct EigResult {
    std::vector<double> values;
    Mat vectors;
};

EigResult jacobi_eigh(const Mat& sym, double tol = 1e-12, int max_sweeps = 100);

/// Orthogonal polar factor of a small (d <= 3) matrix: the orthogonal R
/// maximizing trace(R^T M). Reflections are allowed. Falls back to the
/// identity on rank-deficient input directions.
Mat polar_orthogonal(const Mat& m);

bool is_orthogonal(const Mat& r, double tol);

}  // namespace gdtw::linalg
