#include <cmath>
#include <map>
#include <stdexcept>

#include "gdtw/gdtw.hpp"
#include "gdtw/kernels.hpp"
#include "gdtw/rng.hpp"

namespace gdtw {

void FwOptions::validate() const {
    if (gamma < 0.0) throw std::invalid_argument("FwOptions: gamma must be >= 0");
    if (max_iter < 1) throw std::invalid_argument("FwOptions: max_iter must be >= 1");
    if (restarts < 0) throw std::invalid_argument("FwOptions: restarts must be >= 0");
    if (tol <= 0.0) throw std::invalid_argument("FwOptions: tol must be positive");
    if (init == FwInit::Given && !given_init.valid())
        throw std::invalid_argument("FwOptions: Given init path is invalid");
}

Mat tensor_apply(const Mat& dx, const Mat& dy, const Mat& a) {
    if (dx.rows != dx.cols || dy.rows != dy.cols)
        throw std::invalid_argument("tensor_apply: distance matrices must be square");
    const int m = dx.rows, n = dy.rows;
    if (a.rows != m || a.cols != n) throw std::invalid_argument("tensor_apply: shape mismatch");

    std::vector<double> rm(m, 0.0), cm(n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            rm[i] += a(i, j);
            cm[j] += a(i, j);
        }

    // t1_i = sum_k Dx_ik^2 (A 1)_k ; t2_j = sum_l Dy_jl^2 (1^T A)_l
    std::vector<double> t1(m, 0.0), t2(n, 0.0);
    for (int i = 0; i < m; ++i) {
        const double* di = dx.row(i);
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += di[k] * di[k] * rm[k];
        t1[i] = s;
    }
    for (int j = 0; j < n; ++j) {
        const double* dj = dy.row(j);
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += dj[l] * dj[l] * cm[l];
        t2[j] = s;
    }

    Mat cross = kernels::matmul(dx, kernels::matmul_nt(a, dy));
    Mat out(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = t1[i] + t2[j] - 2.0 * cross(i, j);
    return out;
}

double gdtw_objective(const Mat& dx, const Mat& dy, const Mat& a) {
    Mat la = tensor_apply(dx, dy, a);
    return kernels::dot(la.data.data(), a.data.data(), a.data.size());
}

double gdtw_objective(const Mat& dx, const Mat& dy, const AlignmentPath& a) {
    Mat la = tensor_apply(dx, dy, a.indicator());
    double s = 0.0;
    for (auto [i, j] : a.steps) s += la(i, j);
    return s;
}

double gdtw_objective(const Mat& dx, const Mat& dy, const SoftAlignment& a) {
    return gdtw_objective(dx, dy, a.weights);
}

AlignmentPath diagonal_band_path(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("diagonal_band_path: empty shape");
    AlignmentPath p;
    p.rows = m;
    p.cols = n;
    int i = 0, j = 0;
    p.steps.emplace_back(0, 0);
    while (i < m - 1 || j < n - 1) {
        int bi = i, bj = j;
        double best = -1.0;
        const int moves[3][2] = {{1, 1}, {1, 0}, {0, 1}};
        for (const auto& [di, dj] : moves) {
            int ni = i + di, nj = j + dj;
            if (ni > m - 1 || nj > n - 1) continue;
            // deviation of (ni, nj) from the straight diagonal
            double dev = std::abs(static_cast<double>(ni) * (n - 1) -
                                  static_cast<double>(nj) * (m - 1));
            if (best < 0.0 || dev < best) {
                best = dev;
                bi = ni;
                bj = nj;
            }
        }
        i = bi;
        j = bj;
        p.steps.emplace_back(i, j);
    }
    return p;
}

AlignmentPath random_monotone_path(int m, int n, uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("random_monotone_path: empty shape");
    SplitMix64 rng(seed);
    AlignmentPath p;
    p.rows = m;
    p.cols = n;
    int i = 0, j = 0;
    p.steps.emplace_back(0, 0);
    while (i < m - 1 || j < n - 1) {
        int choices[3][2];
        int nc = 0;
        if (i < m - 1 && j < n - 1) {
            choices[nc][0] = 1;
            choices[nc][1] = 1;
            ++nc;
        }
        if (i < m - 1) {
            choices[nc][0] = 1;
            choices[nc][1] = 0;
            ++nc;
        }
        if (j < n - 1) {
            choices[nc][0] = 0;
            choices[nc][1] = 1;
            ++nc;
        }
        int pick = static_cast<int>(rng.next() % static_cast<uint64_t>(nc));
        i += choices[pick][0];
        j += choices[pick][1];
        p.steps.emplace_back(i, j);
    }
    return p;
}

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    SplitMix64 s(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
    return s.next();
}

AlignmentPath initial_path(const FwOptions& opts, int m, int n, int restart) {
    if (restart > 0) return random_monotone_path(m, n, mix_seed(opts.seed, restart));
    switch (opts.init) {
        case FwInit::DiagonalBand: return diagonal_band_path(m, n);
        case FwInit::RandomMonotone: return random_monotone_path(m, n, opts.seed);
        case FwInit::Given:
            if (opts.given_init.rows != m || opts.given_init.cols != n)
                throw std::invalid_argument("gdtw: Given init has wrong shape");
            return opts.given_init;
    }
    throw std::logic_error("unreachable init kind");
}

GdtwResult run_hard(const Mat& dx, const Mat& dy, const FwOptions& opts,
                    const AlignmentPath& init) {
    GdtwResult res;
    AlignmentPath a = init;

    double best = gdtw_objective(dx, dy, a);
    AlignmentPath best_path = a;
    res.objective_trace.push_back(best);

    std::map<std::vector<std::pair<int, int>>, int> visited;
    visited[a.steps] = 0;
    res.status = SolveStatus::MaxIter;

    for (int t = 1; t <= opts.max_iter; ++t) {
        Mat la = tensor_apply(dx, dy, a.indicator());
        AlignmentPath next = dtw(la).path;
        double obj = gdtw_objective(dx, dy, next);
        res.objective_trace.push_back(obj);
        if (obj < best) {
            best = obj;
            best_path = next;
        }
        auto [it, fresh] = visited.emplace(next.steps, t);
        if (!fresh) {
            int period = t - it->second;
            res.status = period == 1 ? SolveStatus::Converged : SolveStatus::LimitCycle;
            res.cycle_period = period;
            break;
        }
        a = std::move(next);
    }

    res.value = best;
    res.alignment = std::move(best_path);
    if (res.objective_trace.back() != best) res.objective_trace.push_back(best);
    return res;
}

GdtwResult run_soft(const Mat& dx, const Mat& dy, const FwOptions& opts,
                    const AlignmentPath& init) {
    GdtwResult res;
    res.is_soft = true;
    Mat a = init.indicator();
    res.objective_trace.push_back(gdtw_objective(dx, dy, a));
    res.status = SolveStatus::MaxIter;

    SoftAlignment soft{a, opts.gamma};
    for (int t = 1; t <= opts.max_iter; ++t) {
        Mat la = tensor_apply(dx, dy, a);
        soft = soft_argmin(la, opts.gamma);
        res.objective_trace.push_back(gdtw_objective(dx, dy, soft.weights));
        double delta = 0.0;
        for (size_t k = 0; k < a.data.size(); ++k)
            delta = std::max(delta, std::abs(soft.weights.data[k] - a.data[k]));
        a = soft.weights;
        if (delta < opts.tol) {
            res.status = SolveStatus::Converged;
            break;
        }
    }
    res.soft_alignment = std::move(soft);
    res.value = res.objective_trace.back();
    return res;
}

GdtwResult solve(const Mat& dx, const Mat& dy, const FwOptions& opts, bool soft) {
    opts.validate();
    if (dx.rows < 1 || dy.rows < 1) throw std::invalid_argument("gdtw: empty input");
    const int m = dx.rows, n = dy.rows;

    GdtwResult best;
    bool have = false;
    for (int r = 0; r <= opts.restarts; ++r) {
        AlignmentPath init = initial_path(opts, m, n, r);
        GdtwResult cur = soft ? run_soft(dx, dy, opts, init) : run_hard(dx, dy, opts, init);
        cur.restart_index = r;
        if (!have || cur.value < best.value) {
            best = std::move(cur);
            have = true;
        }
    }
    return best;
}

Mat prepared(const DistanceMatrix& d, bool norm) {
    return norm && !d.normalized ? normalize(d).m : d.m;
}

}  // namespace

GdtwResult gdtw(const DistanceMatrix& dx, const DistanceMatrix& dy, const FwOptions& opts) {
    if (opts.gamma != 0.0) throw std::invalid_argument("gdtw: gamma must be 0 (use soft_gdtw)");
    return solve(prepared(dx, opts.normalize_inputs), prepared(dy, opts.normalize_inputs),
                 opts, /*soft=*/false);
}

GdtwResult gdtw(const TimeSeries& x, const TimeSeries& y, const FwOptions& opts) {
    return gdtw(pairwise_distances(x), pairwise_distances(y), opts);
}

GdtwResult soft_gdtw(const DistanceMatrix& dx, const DistanceMatrix& dy,
                     const FwOptions& opts) {
    if (opts.gamma <= 0.0) throw std::invalid_argument("soft_gdtw: gamma must be positive");
    return solve(prepared(dx, opts.normalize_inputs), prepared(dy, opts.normalize_inputs),
                 opts, /*soft=*/true);
}

GdtwResult soft_gdtw(const TimeSeries& x, const TimeSeries& y, const FwOptions& opts) {
    return soft_gdtw(pairwise_distances(x), pairwise_distances(y), opts);
}

// ---------------------------------------------------------------------------
// Envelope-theorem gradients

std::vector<std::vector<double>> gdtw_grad_dy(const TimeSeries& x, const Mat& dy_raw,
                                              const Mat& a, bool normalize) {
    x.validate();
    if (x.is_grid()) throw std::invalid_argument("gdtw_grad: x must be Euclidean");
    const int m = x.length(), n = dy_raw.rows, d = x.dim();
    if (a.rows != m || a.cols != n) throw std::invalid_argument("gdtw_grad: shape mismatch");
    const bool squared = x.metric.kind == Metric::Kind::SquaredEuclidean;

    Mat dx_raw = pairwise_distances(x).m;
    double cx = 1.0, cy = 1.0;
    if (normalize) {
        cx = std::max(dx_raw.max_abs(), 1e-300);
        cy = std::max(dy_raw.max_abs(), 1e-300);
    }

    std::vector<double> rm(m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) rm[i] += a(i, j);

    // sens_ab = dG/dDxn_ab = 2 (Dxn_ab rm_a rm_b - (A Dyn A^T)_ab)
    Mat dyn = dy_raw;
    if (normalize)
        for (double& v : dyn.data) v /= cy;
    Mat adyat = kernels::matmul_nt(kernels::matmul(a, dyn), a);
    Mat sens(m, m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            sens(p, q) = 2.0 * (dx_raw(p, q) / cx * rm[p] * rm[q] - adyat(p, q));

    std::vector<std::vector<double>> grad(m, std::vector<double>(d, 0.0));
    for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) {
            if (p == q) continue;
            // both (p,q) and (q,p) entries of Dx move with x_p
            double coeff = (sens(p, q) + sens(q, p)) / cx;
            if (coeff == 0.0) continue;
            double raw = dx_raw(p, q);
            for (int c = 0; c < d; ++c) {
                double diff = x.points[p][c] - x.points[q][c];
                double ddist;
                if (squared) {
                    ddist = 2.0 * diff;
                } else {
                    if (raw <= 1e-300) continue;  // coincident points: subgradient 0
                    ddist = diff / raw;
                }
                grad[p][c] += coeff * ddist;
            }
        }
    }
    return grad;
}

std::vector<std::vector<double>> gdtw_grad(const TimeSeries& x, const TimeSeries& y,
                                           const Mat& a, bool normalize) {
    return gdtw_grad_dy(x, pairwise_distances(y).m, a, normalize);
}

std::vector<std::vector<double>> gdtw_grad(const TimeSeries& x, const TimeSeries& y,
                                           const AlignmentPath& a, bool normalize) {
    return gdtw_grad(x, y, a.indicator(), normalize);
}

std::vector<std::vector<double>> gdtw_grad(const TimeSeries& x, const TimeSeries& y,
                                           const SoftAlignment& a, bool normalize) {
    return gdtw_grad(x, y, a.weights, normalize);
}

}  // namespace gdtw
