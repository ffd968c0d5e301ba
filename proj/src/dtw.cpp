#include <cmath>
#include <limits>
#include <stdexcept>

#include "gdtw/dtw.hpp"

namespace gdtw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cost(const CostMatrix& d) {
    if (d.rows < 1 || d.cols < 1) throw std::invalid_argument("dtw: empty cost matrix");
    for (double v : d.data)
        if (!std::isfinite(v)) throw std::invalid_argument("dtw: non-finite cost entry");
}

/// -gamma * log(e^{-a/g} + e^{-b/g} + e^{-c/g}), max-shifted.
double softmin3(double a, double b, double c, double gamma) {
    double na = -a / gamma, nb = -b / gamma, nc = -c / gamma;
    double mx = std::max(na, std::max(nb, nc));
    if (mx == -kInf) return kInf;
    double s = std::exp(na - mx) + std::exp(nb - mx) + std::exp(nc - mx);
    return -gamma * (std::log(s) + mx);
}

}  // namespace

Mat AlignmentPath::indicator() const {
    Mat a(rows, cols);
    for (auto [i, j] : steps) a(i, j) = 1.0;
    return a;
}

std::vector<double> AlignmentPath::row_mass() const {
    std::vector<double> m(rows, 0.0);
    for (auto [i, j] : steps) m[i] += 1.0;
    return m;
}

std::vector<double> AlignmentPath::col_mass() const {
    std::vector<double> m(cols, 0.0);
    for (auto [i, j] : steps) m[j] += 1.0;
    return m;
}

AlignmentPath AlignmentPath::transposed() const {
    AlignmentPath t;
    t.rows = cols;
    t.cols = rows;
    t.steps.reserve(steps.size());
    for (auto [i, j] : steps) t.steps.emplace_back(j, i);
    return t;
}

bool AlignmentPath::valid() const {
    if (steps.empty() || rows < 1 || cols < 1) return false;
    if (steps.front() != std::pair{0, 0}) return false;
    if (steps.back() != std::pair{rows - 1, cols - 1}) return false;
    for (size_t k = 1; k < steps.size(); ++k) {
        int di = steps[k].first - steps[k - 1].first;
        int dj = steps[k].second - steps[k - 1].second;
        if (di < 0 || dj < 0 || di > 1 || dj > 1 || (di == 0 && dj == 0)) return false;
    }
    return true;
}

DtwResult dtw(const CostMatrix& d) {
    check_cost(d);
    const int m = d.rows, n = d.cols;
    Mat r(m, n);
    r(0, 0) = d(0, 0);
    for (int j = 1; j < n; ++j) r(0, j) = r(0, j - 1) + d(0, j);
    for (int i = 1; i < m; ++i) {
        r(i, 0) = r(i - 1, 0) + d(i, 0);
        for (int j = 1; j < n; ++j)
            r(i, j) = d(i, j) + std::min(r(i - 1, j - 1), std::min(r(i - 1, j), r(i, j - 1)));
    }

    AlignmentPath path;
    path.rows = m;
    path.cols = n;
    int i = m - 1, j = n - 1;
    std::vector<std::pair<int, int>> rev{{i, j}};
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            double diag = r(i - 1, j - 1), up = r(i - 1, j), left = r(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        rev.emplace_back(i, j);
    }
    path.steps.assign(rev.rbegin(), rev.rend());
    return DtwResult{r(m - 1, n - 1), std::move(path)};
}

double dtw_value(const CostMatrix& d) {
    check_cost(d);
    const int m = d.rows, n = d.cols;
    std::vector<double> prev(n), cur(n);
    prev[0] = d(0, 0);
    for (int j = 1; j < n; ++j) prev[j] = prev[j - 1] + d(0, j);
    for (int i = 1; i < m; ++i) {
        cur[0] = prev[0] + d(i, 0);
        for (int j = 1; j < n; ++j)
            cur[j] = d(i, j) + std::min(prev[j - 1], std::min(prev[j], cur[j - 1]));
        std::swap(prev, cur);
    }
    return prev[n - 1];
}

double soft_dtw(const CostMatrix& d, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("soft_dtw: gamma must be positive (use dtw)");
    check_cost(d);
    const int m = d.rows, n = d.cols;
    std::vector<double> prev(n), cur(n);
    prev[0] = d(0, 0);
    for (int j = 1; j < n; ++j) prev[j] = prev[j - 1] + d(0, j);
    for (int i = 1; i < m; ++i) {
        cur[0] = prev[0] + d(i, 0);
        for (int j = 1; j < n; ++j)
            cur[j] = d(i, j) + softmin3(prev[j - 1], prev[j], cur[j - 1], gamma);
        std::swap(prev, cur);
    }
    return prev[n - 1];
}

SoftAlignment soft_argmin(const CostMatrix& d, double gamma) {
    if (gamma <= 0.0) throw std::invalid_argument("soft_argmin: gamma must be positive");
    check_cost(d);
    const int m = d.rows, n = d.cols;

    Mat r(m, n);
    r(0, 0) = d(0, 0);
    for (int j = 1; j < n; ++j) r(0, j) = r(0, j - 1) + d(0, j);
    for (int i = 1; i < m; ++i) {
        r(i, 0) = r(i - 1, 0) + d(i, 0);
        for (int j = 1; j < n; ++j)
            r(i, j) = d(i, j) + softmin3(r(i - 1, j - 1), r(i - 1, j), r(i, j - 1), gamma);
    }

    // backward pass: E_ij = dDTW_gamma/dr_ij propagated through the soft-min DAG
    Mat e(m, n);
    e(m - 1, n - 1) = 1.0;
    auto edge = [&](int i, int j, int pi, int pj) {
        // weight of the DP edge (pi,pj) -> (i,j)
        return std::exp((r(i, j) - r(pi, pj) - d(i, j)) / gamma) * e(i, j);
    };
    for (int i = m - 1; i >= 0; --i) {
        for (int j = n - 1; j >= 0; --j) {
            if (i == m - 1 && j == n - 1) continue;
            double acc = 0.0;
            if (i + 1 < m) acc += edge(i + 1, j, i, j);
            if (j + 1 < n) acc += edge(i, j + 1, i, j);
            if (i + 1 < m && j + 1 < n) acc += edge(i + 1, j + 1, i, j);
            e(i, j) = acc;
        }
    }
    return SoftAlignment{std::move(e), gamma};
}

std::vector<AlignmentPath> enumerate_alignments(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("enumerate_alignments: empty shape");
    if (m + n > 14) throw std::invalid_argument("enumerate_alignments: m + n must be <= 14");
    std::vector<AlignmentPath> out;
    AlignmentPath cur;
    cur.rows = m;
    cur.cols = n;
    cur.steps.emplace_back(0, 0);
    // depth-first over right/down/diagonal moves
    auto rec = [&](auto&& self, int i, int j) -> void {
        if (i == m - 1 && j == n - 1) {
            out.push_back(cur);
            return;
        }
        const int moves[3][2] = {{1, 1}, {1, 0}, {0, 1}};
        for (const auto& [di, dj] : moves) {
            int ni = i + di, nj = j + dj;
            if (ni >= m || nj >= n) continue;
            cur.steps.emplace_back(ni, nj);
            self(self, ni, nj);
            cur.steps.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

AlignmentPath round_to_path(const SoftAlignment& soft) {
    CostMatrix neg = soft.weights;
    for (double& v : neg.data) v = -v;
    return dtw(neg).path;
}

}  // namespace gdtw
