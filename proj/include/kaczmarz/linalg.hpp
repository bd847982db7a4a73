#pragma once

#include "kaczmarz/index_set.hpp"
#include "kaczmarz/row_matrix.hpp"

namespace kaczmarz {

/// Smallest positive eigenvalue of A^T A, computed by a dense symmetric
/// eigendecomposition of the smaller Gram matrix (A^T A or A A^T have the
/// same nonzero spectrum). Eigenvalues below 1e-10 * lambda_max count as
/// zero. Desk-scale only: min(m, n) up to a few thousand.
double lambda_min_pos(const RowMatrix& A);

/// Largest eigenvalue of A_idx^T A_idx via the |idx| x |idx| Gram matrix.
double lambda_max_block(const RowMatrix& A, std::span<const int> indices);

/// Least-Euclidean-norm solution of a consistent system A x = b, via a
/// dense complete orthogonal decomposition. Throws std::runtime_error
/// ("system inconsistent") when the least-squares residual exceeds
/// 1e-10 * ||b||_2. Test oracle and analysis helper, not a solver kernel.
Vector min_norm_solution(const RowMatrix& A, const Vector& b);

/// Minimum-norm least-squares solution z of A_idx z = rhs, i.e. the action
/// of the Moore-Penrose pseudoinverse of the row block without forming it.
/// Singular directions below 1e-12 of the largest are treated as zero.
Vector block_ls_apply(const RowMatrix& A, const IndexSet& idx, const Vector& rhs);

} // namespace kaczmarz
