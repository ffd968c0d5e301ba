#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gdtw/linalg.hpp"

namespace gdtw::linalg {

EigResult jacobi_eigh(const Mat& sym, double tol, int max_sweeps) {
    if (sym.rows != sym.cols) throw std::invalid_argument("jacobi_eigh: matrix not square");
    const int n = sym.rows;
    Mat a = sym;
    Mat v(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;

    double scale = a.max_abs();
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= tol * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return diag[x] > diag[y]; });

    EigResult res;
    res.values.resize(n);
    res.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        int src = order[j];
        res.values[j] = diag[src];
        // sign convention: largest-magnitude component positive
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(v(i, src)) > std::abs(v(imax, src))) imax = i;
        double sgn = v(imax, src) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) res.vectors(i, j) = sgn * v(i, src);
    }
    return res;
}

Mat polar_orthogonal(const Mat& m) {
    if (m.rows != m.cols || m.rows > 3)
        throw std::invalid_argument("polar_orthogonal: expects square d x d with d <= 3");
    const int d = m.rows;

    Mat mtm(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += m(k, i) * m(k, j);
            mtm(i, j) = s;
        }
    EigResult eig = jacobi_eigh(mtm);

    double smax = std::sqrt(std::max(eig.values[0], 0.0));
    double cutoff = std::max(smax * 1e-12, 1e-300);

    // U columns: M v_i / sigma_i where well-defined, orthonormal completion elsewhere.
    Mat u(d, d);
    std::vector<bool> filled(d, false);
    for (int j = 0; j < d; ++j) {
        double sigma = std::sqrt(std::max(eig.values[j], 0.0));
        if (sigma <= cutoff) continue;
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += m(i, k) * eig.vectors(k, j);
            u(i, j) = s / sigma;
        }
        filled[j] = true;
    }
    for (int j = 0; j < d; ++j) {
        if (filled[j]) continue;
        // pick the basis vector least represented, Gram-Schmidt against filled columns
        for (int cand = 0; cand < d; ++cand) {
            std::vector<double> w(d, 0.0);
            w[cand] = 1.0;
            for (int jj = 0; jj < d; ++jj) {
                if (!filled[jj]) continue;
                double proj = 0.0;
                for (int i = 0; i < d; ++i) proj += w[i] * u(i, jj);
                for (int i = 0; i < d; ++i) w[i] -= proj * u(i, jj);
            }
            double nrm = 0.0;
            for (double x : w) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (nrm > 1e-6) {
                for (int i = 0; i < d; ++i) u(i, j) = w[i] / nrm;
                filled[j] = true;
                break;
            }
        }
        if (!filled[j]) throw std::runtime_error("polar_orthogonal: completion failed");
    }

    Mat r(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += u(i, k) * eig.vectors(j, k);
            r(i, j) = s;
        }
    return r;
}

bool is_orthogonal(const Mat& r, double tol) {
    if (r.rows != r.cols) return false;
    const int d = r.rows;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += r(k, i) * r(k, j);
            double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(s - want) > tol) return false;
        }
    return true;
}

}  // namespace gdtw::linalg
