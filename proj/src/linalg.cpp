#include "aeelm/linalg.hpp"

#include "aeelm/core/errors.hpp"
#include "aeelm/core/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aeelm {

namespace {

// One-sided Jacobi on the rows of W (each row is a column of the original
// matrix, so rotations touch contiguous memory). V accumulates the rotations.
void jacobi_orthogonalize(Matrix& w, Matrix& v) {
    const std::size_t n = w.rows();
    const std::size_t m = w.cols();
    const double tol = 1e-14;
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* wp = w.row(p);
                double* wq = w.row(q);
                const double alpha = kern::sum_sq(wp, m);
                const double beta = kern::sum_sq(wq, m);
                const double gamma = kern::dot(wp, wq, m);
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double a = wp[i];
                    const double b = wq[i];
                    wp[i] = c * a - s * b;
                    wq[i] = s * a + c * b;
                }
                double* vp = v.row(p);
                double* vq = v.row(q);
                for (std::size_t i = 0; i < v.cols(); ++i) {
                    const double a = vp[i];
                    const double b = vq[i];
                    vp[i] = c * a - s * b;
                    vq[i] = s * a + c * b;
                }
            }
        }
        if (!rotated) break;
    }
}

// SVD of an a with rows >= cols via Jacobi; returns {ut, sigma, vt}.
SvdResult svd_tall(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    Matrix w = transpose(a); // w.row(j) == column j of a, contiguous
    Matrix v(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    jacobi_orthogonalize(w, v);

    Vec sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(kern::sum_sq(w.row(j), m));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SvdResult r;
    r.ut = Matrix(n, m, 0.0);
    r.vt = Matrix(n, n, 0.0);
    r.sigma.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        r.sigma[k] = sigma[j];
        if (sigma[j] > 0.0) {
            const double inv = 1.0 / sigma[j];
            for (std::size_t i = 0; i < m; ++i) r.ut(k, i) = w(j, i) * inv;
        }
        for (std::size_t i = 0; i < n; ++i) r.vt(k, i) = v(j, i);
    }
    return r;
}

Vec solve_filtered(const Matrix& a, const Vec& b, const Vec& filter, const SvdResult& svd) {
    Vec x(a.cols(), 0.0);
    for (std::size_t i = 0; i < svd.sigma.size(); ++i) {
        if (filter[i] == 0.0) continue;
        const double coeff = filter[i] * kern::dot(svd.ut.row(i), b.data(), b.size());
        kern::axpy(coeff, svd.vt.row(i), x.data(), x.size());
    }
    return x;
}

} // namespace

SvdResult svd_thin(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd_thin: empty matrix");
    if (a.rows() >= a.cols()) return svd_tall(a);
    SvdResult t = svd_tall(transpose(a));
    return {std::move(t.vt), std::move(t.sigma), std::move(t.ut)};
}

Vec lstsq_min_norm(const Matrix& a, const Vec& b, double rel_cutoff) {
    if (b.size() != a.rows()) throw std::invalid_argument("lstsq: rhs length mismatch");
    const SvdResult svd = svd_thin(a);
    const double cutoff = rel_cutoff * (svd.sigma.empty() ? 0.0 : svd.sigma[0]);
    Vec filter(svd.sigma.size(), 0.0);
    for (std::size_t i = 0; i < svd.sigma.size(); ++i)
        if (svd.sigma[i] > cutoff && svd.sigma[i] > 0.0) filter[i] = 1.0 / svd.sigma[i];
    return solve_filtered(a, b, filter, svd);
}

Vec lstsq_ridge(const Matrix& a, const Vec& b, double lambda) {
    if (b.size() != a.rows()) throw std::invalid_argument("lstsq: rhs length mismatch");
    if (lambda <= 0.0) return lstsq_min_norm(a, b);
    const SvdResult svd = svd_thin(a);
    Vec filter(svd.sigma.size(), 0.0);
    for (std::size_t i = 0; i < svd.sigma.size(); ++i)
        filter[i] = svd.sigma[i] / (svd.sigma[i] * svd.sigma[i] + lambda);
    return solve_filtered(a, b, filter, svd);
}

} // namespace aeelm
