#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gdtw/sinkhorn.hpp"

namespace gdtw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_simplex(const std::vector<double>& w, const char* name) {
    double s = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw std::invalid_argument(std::string(name) + ": negative weight");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(name) + ": weights do not sum to 1");
}

}  // namespace

SinkhornResult sinkhorn(const Mat& cost, const std::vector<double>& p,
                        const std::vector<double>& q, double epsilon,
                        int max_iters, double tol) {
    if (epsilon <= 0.0) throw std::invalid_argument("sinkhorn: epsilon must be positive");
    const int m = cost.rows, n = cost.cols;
    if (static_cast<int>(p.size()) != m || static_cast<int>(q.size()) != n)
        throw std::invalid_argument("sinkhorn: marginal sizes do not match cost matrix");
    check_simplex(p, "sinkhorn p");
    check_simplex(q, "sinkhorn q");

    std::vector<double> logp(m), logq(n);
    for (int i = 0; i < m; ++i) logp[i] = p[i] > 0.0 ? std::log(p[i]) : kNegInf;
    for (int j = 0; j < n; ++j) logq[j] = q[j] > 0.0 ? std::log(q[j]) : kNegInf;

    // log pi_ij = f_i + g_j - C_ij/eps (dual potentials folded with log marginals)
    std::vector<double> f(logp), g(logq);
    Mat logpi(m, n);

    auto fill_logpi = [&]() {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                logpi(i, j) = f[i] + g[j] - cost(i, j) / epsilon;
    };
    auto lse_rows = [&](std::vector<double>& out) {
        out.assign(m, kNegInf);
        for (int i = 0; i < m; ++i) {
            double mx = kNegInf;
            for (int j = 0; j < n; ++j) mx = std::max(mx, logpi(i, j));
            if (mx == kNegInf) continue;
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += std::exp(logpi(i, j) - mx);
            out[i] = mx + std::log(s);
        }
    };
    auto lse_cols = [&](std::vector<double>& out) {
        out.assign(n, kNegInf);
        for (int j = 0; j < n; ++j) {
            double mx = kNegInf;
            for (int i = 0; i < m; ++i) mx = std::max(mx, logpi(i, j));
            if (mx == kNegInf) continue;
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += std::exp(logpi(i, j) - mx);
            out[j] = mx + std::log(s);
        }
    };

    SinkhornResult res;
    std::vector<double> lse(m > n ? m : n);
    int it = 0;
    for (; it < max_iters; ++it) {
        fill_logpi();
        lse_rows(lse);
        for (int i = 0; i < m; ++i)
            if (logp[i] != kNegInf) f[i] += logp[i] - lse[i];

        fill_logpi();
        lse_cols(lse);
        double col_violation = 0.0;
        for (int j = 0; j < n; ++j) {
            double cs = lse[j] == kNegInf ? 0.0 : std::exp(lse[j]);
            col_violation = std::max(col_violation, std::abs(cs - q[j]));
            if (logq[j] != kNegInf) g[j] += logq[j] - lse[j];
        }

        // after the g-update columns are exact; check the rows it perturbed
        fill_logpi();
        lse_rows(lse);
        double row_violation = 0.0;
        for (int i = 0; i < m; ++i) {
            double rs = lse[i] == kNegInf ? 0.0 : std::exp(lse[i]);
            row_violation = std::max(row_violation, std::abs(rs - p[i]));
        }
        if (std::max(row_violation, col_violation) < tol) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.iterations = it;

    fill_logpi();
    Mat pi(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            pi(i, j) = logpi(i, j) == kNegInf ? 0.0 : std::exp(logpi(i, j));

    // round onto the transport polytope so the marginals hold exactly even
    // when the iteration cap fired: scale down over-full rows and columns,
    // then spread the leftover mass as a rank-one correction
    std::vector<double> rowsum(m, 0.0), colsum(n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) rowsum[i] += pi(i, j);
    for (int i = 0; i < m; ++i) {
        double s = rowsum[i] > p[i] ? p[i] / rowsum[i] : 1.0;
        for (int j = 0; j < n; ++j) pi(i, j) *= s;
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) colsum[j] += pi(i, j);
    for (int j = 0; j < n; ++j) {
        double s = colsum[j] > q[j] ? q[j] / colsum[j] : 1.0;
        for (int i = 0; i < m; ++i) pi(i, j) *= s;
    }
    std::vector<double> row_err(m, 0.0), col_err(n, 0.0);
    double missing = 0.0;
    rowsum.assign(m, 0.0);
    colsum.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            rowsum[i] += pi(i, j);
            colsum[j] += pi(i, j);
        }
    for (int i = 0; i < m; ++i) {
        row_err[i] = p[i] - rowsum[i];
        missing += row_err[i];
    }
    for (int j = 0; j < n; ++j) col_err[j] = q[j] - colsum[j];
    if (missing > 0.0)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) pi(i, j) += row_err[i] * col_err[j] / missing;

    double transport = 0.0, entropy = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double v = pi(i, j);
            transport += cost(i, j) * v;
            if (v > 0.0) entropy -= v * (std::log(v) - 1.0);
        }
    res.transport = transport;
    res.value = transport - epsilon * entropy;
    res.coupling = Coupling{std::move(pi), p, q};
    return res;
}

double grid_wasserstein2(const std::vector<double>& a, const std::vector<double>& b,
                         int h, int w, double epsilon, int max_iters) {
    if (epsilon <= 0.0) throw std::invalid_argument("grid_wasserstein2: epsilon must be positive");
    const size_t cells = static_cast<size_t>(h) * w;
    if (a.size() != cells || b.size() != cells)
        throw std::invalid_argument("grid_wasserstein2: grid size mismatch");

    // separable Gibbs kernel K = Kr (x) Kc, cost (r-r')^2 + (c-c')^2
    Mat kr(h, h), krc(h, h), kc(w, w), kcc(w, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            double d2 = static_cast<double>(i - j) * (i - j);
            kr(i, j) = std::exp(-d2 / epsilon);
            krc(i, j) = kr(i, j) * d2;
        }
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) {
            double d2 = static_cast<double>(i - j) * (i - j);
            kc(i, j) = std::exp(-d2 / epsilon);
            kcc(i, j) = kc(i, j) * d2;
        }

    // applies (R (x) C) to an h x w field: R * X * C^T
    auto apply_sep = [&](const Mat& r, const Mat& c, const std::vector<double>& x,
                         std::vector<double>& out) {
        std::vector<double> tmp(cells, 0.0);
        for (int i = 0; i < h; ++i)
            for (int k = 0; k < h; ++k) {
                double rv = r(i, k);
                if (rv == 0.0) continue;
                const double* xk = x.data() + static_cast<size_t>(k) * w;
                double* ti = tmp.data() + static_cast<size_t>(i) * w;
                for (int j = 0; j < w; ++j) ti[j] += rv * xk[j];
            }
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) {
                double s = 0.0;
                const double* ti = tmp.data() + static_cast<size_t>(i) * w;
                for (int l = 0; l < w; ++l) s += ti[l] * c(j, l);
                out[static_cast<size_t>(i) * w + j] = s;
            }
    };

    std::vector<double> u(cells, 1.0), v(cells, 1.0), ku(cells), kv(cells);
    for (size_t i = 0; i < cells; ++i) {
        if (a[i] == 0.0) u[i] = 0.0;
        if (b[i] == 0.0) v[i] = 0.0;
    }
    for (int it = 0; it < max_iters; ++it) {
        apply_sep(kr, kc, v, kv);
        for (size_t i = 0; i < cells; ++i) u[i] = kv[i] > 0.0 ? a[i] / kv[i] : 0.0;
        apply_sep(kr, kc, u, ku);
        for (size_t i = 0; i < cells; ++i) v[i] = ku[i] > 0.0 ? b[i] / ku[i] : 0.0;
    }

    // <C, pi> with pi = diag(u) K diag(v), split along the two axes
    std::vector<double> t1(cells), t2(cells);
    apply_sep(krc, kc, v, t1);
    apply_sep(kr, kcc, v, t2);
    double transport = 0.0;
    for (size_t i = 0; i < cells; ++i) transport += u[i] * (t1[i] + t2[i]);
    return std::sqrt(std::max(transport, 0.0));
}

}  // namespace gdtw
