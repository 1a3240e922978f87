#pragma once

#include "aeelm/core/matrix.hpp"

namespace aeelm {

// Thin SVD, A = sum_i sigma[i] * u_i v_i^T with k = min(rows, cols) terms.
// ut.row(i) is u_i (length rows), vt.row(i) is v_i (length cols); sigma is
// sorted descending. Computed by one-sided Jacobi, which is slow but robust
// and more than adequate at the few-hundred-row scale this project runs at.
struct SvdResult {
    Matrix ut;
    Vec sigma;
    Matrix vt;
};

SvdResult svd_thin(const Matrix& a);

// Minimum-norm least-squares solution of A x ~= b. Singular values below
// rel_cutoff * sigma_max are treated as exact zeros, which makes the
// underdetermined case well-defined and reproducible.
Vec lstsq_min_norm(const Matrix& a, const Vec& b, double rel_cutoff = 1e-10);

// Tikhonov-regularized solution via the same factorization:
// x = sum_i sigma_i/(sigma_i^2 + lambda) (u_i.b) v_i.
Vec lstsq_ridge(const Matrix& a, const Vec& b, double lambda);

} // namespace aeelm
