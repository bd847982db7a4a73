#include "kaczmarz/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace kaczmarz {

namespace {

Eigen::MatrixXd to_eigen_dense(const RowMatrix& A) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(A.rows(), A.cols());
    if (A.is_sparse()) {
        for (int i = 0; i < A.rows(); ++i) {
            const auto cols = A.row_cols(i);
            const auto vals = A.row_vals(i);
            for (std::size_t p = 0; p < cols.size(); ++p) M(i, cols[p]) = vals[p];
        }
    } else {
        for (int i = 0; i < A.rows(); ++i) {
            const auto vals = A.row_vals(i);
            for (int j = 0; j < A.cols(); ++j) M(i, j) = vals[static_cast<std::size_t>(j)];
        }
    }
    return M;
}

} // namespace

double lambda_min_pos(const RowMatrix& A) {
    const Eigen::MatrixXd M = to_eigen_dense(A);
    // A^T A and A A^T share their nonzero spectrum; diagonalize the smaller.
    Eigen::MatrixXd gram;
    if (A.cols() <= A.rows()) {
        gram = M.transpose() * M;
    } else {
        gram = M * M.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("lambda_min_pos: eigendecomposition failed");
    }
    const Eigen::VectorXd& ev = eig.eigenvalues(); // ascending
    const double lambda_max = ev(ev.size() - 1);
    const double cutoff = 1e-10 * lambda_max;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cutoff) return ev(i);
    }
    throw std::runtime_error("lambda_min_pos: no positive eigenvalue found");
}

double lambda_max_block(const RowMatrix& A, std::span<const int> indices) {
    if (indices.empty()) throw std::invalid_argument("lambda_max_block: empty index set");
    const Vector rows = A.gather_rows(indices);
    const auto k = static_cast<Eigen::Index>(indices.size());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        R(rows.data(), k, A.cols());
    const Eigen::MatrixXd gram = R * R.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("lambda_max_block: eigendecomposition failed");
    }
    return eig.eigenvalues()(eig.eigenvalues().size() - 1);
}

Vector min_norm_solution(const RowMatrix& A, const Vector& b) {
    if (b.size() != static_cast<std::size_t>(A.rows())) {
        throw std::invalid_argument("min_norm_solution: rhs length != m");
    }
    const Eigen::MatrixXd M = to_eigen_dense(A);
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    cod.setThreshold(1e-12);
    const Eigen::VectorXd x = cod.solve(bv);

    const double resid = (M * x - bv).norm();
    if (resid > 1e-10 * bv.norm()) {
        throw std::runtime_error("system inconsistent");
    }
    return Vector(x.data(), x.data() + x.size());
}

Vector block_ls_apply(const RowMatrix& A, const IndexSet& idx, const Vector& rhs) {
    if (idx.empty()) throw std::invalid_argument("block_ls_apply: empty index set");
    if (rhs.size() != static_cast<std::size_t>(idx.size())) {
        throw std::invalid_argument("block_ls_apply: rhs length != |idx|");
    }
    const Vector rows = A.gather_rows(idx.indices);
    const auto k = static_cast<Eigen::Index>(idx.indices.size());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        R(rows.data(), k, A.cols());
    Eigen::Map<const Eigen::VectorXd> rv(rhs.data(), k);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(R);
    cod.setThreshold(1e-12);
    const Eigen::VectorXd z = cod.solve(rv);
    return Vector(z.data(), z.data() + z.size());
}

} // namespace kaczmarz
