#pragma once

#include <utility>
#include <vector>

#include "gdtw/matrix.hpp"

namespace gdtw {

/// Monotone step path from (0,0) to (m-1,n-1); the indicator form is a member
/// of the alignment-matrix set A(m,n).
struct AlignmentPath {
    std::vector<std::pair<int, int>> steps;
    int rows = 0;
    int cols = 0;

    Mat indicator() const;
    /// Number of aligned y-steps per x-step (A 1).
    std::vector<double> row_mass() const;
    std::vector<double> col_mass() const;
    AlignmentPath transposed() const;

    bool valid() const;
    bool operator==(const AlignmentPath& o) const { return steps == o.steps; }
};

/// The gamma-smoothed expected alignment, entries in [0,1], corners 1.
struct SoftAlignment {
    Mat weights;
    double gamma = 0.0;
};

struct DtwResult {
    double value = 0.0;
    AlignmentPath path;
};

/// Classical DP with backtracking; ties broken diagonal, then up, then left.
DtwResult dtw(const CostMatrix& d);

/// Value-only entry point (two rolling rows).
double dtw_value(const CostMatrix& d);

/// -gamma log sum_A exp(-<D,A>/gamma), soft-min recursion with max shift.
double soft_dtw(const CostMatrix& d, double gamma);

/// Gradient of soft_dtw in D = expected alignment under P(A) ~ exp(-<D,A>/gamma).
SoftAlignment soft_argmin(const CostMatrix& d, double gamma);

/// All members of A(m,n), for test oracles. Guard: m + n <= 14.
std::vector<AlignmentPath> enumerate_alignments(int m, int n);

/// Highest-weight monotone path through a soft alignment.
AlignmentPath round_to_path(const SoftAlignment& soft);

}  // namespace gdtw
