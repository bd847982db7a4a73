#pragma once

// Shared fixtures: the 3x2 reference instance used across the suites
// (rows (1,0), (0,1), (1,1) with b = (1,2,3), unique solution (1,2),
// squared row norms (1,1,2), ||A||_F^2 = 4, lambda_min(A^T A) = 1) and an
// SVD-based pseudoinverse oracle kept independent of the library's
// factorization path.

#include <Eigen/Dense>

#include <vector>

#include "kaczmarz/problems.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/row_matrix.hpp"

namespace kaczmarz::testing {

inline RowMatrix reference_matrix() {
    return RowMatrix::dense(3, 2, {1.0, 0.0, 0.0, 1.0, 1.0, 1.0});
}

inline Vector reference_rhs() { return {1.0, 2.0, 3.0}; }

inline Vector reference_solution() { return {1.0, 2.0}; }

inline Eigen::MatrixXd to_eigen(const RowMatrix& A) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i) {
        if (A.is_sparse()) {
            const auto cols = A.row_cols(i);
            const auto vals = A.row_vals(i);
            for (std::size_t p = 0; p < cols.size(); ++p) M(i, cols[p]) = vals[p];
        } else {
            const auto vals = A.row_vals(i);
            for (int j = 0; j < A.cols(); ++j) M(i, j) = vals[static_cast<std::size_t>(j)];
        }
    }
    return M;
}

/// Brute-force pseudoinverse application via full SVD; singular values
/// below 1e-12 of the largest are treated as zero.
inline Eigen::VectorXd svd_pinv_apply(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-12 * sv(0) : 0.0;
    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) inv_sv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose() * rhs;
}

inline RowMatrix random_dense(int m, int n, Rng& rng) {
    Vector vals(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    for (double& v : vals) v = rng.next_normal();
    return RowMatrix::dense(m, n, std::move(vals));
}

inline Vector random_vector(int n, Rng& rng) {
    Vector v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.next_normal();
    return v;
}

} // namespace kaczmarz::testing
