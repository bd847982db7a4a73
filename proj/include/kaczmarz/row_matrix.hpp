#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kaczmarz {

using Vector = std::vector<double>;

/// Throws std::invalid_argument if v contains NaN or Inf.
void require_finite(std::span<const double> v, const std::string& what);

double dot(std::span<const double> a, std::span<const double> b);
double sq_norm(std::span<const double> v);
double inf_norm(std::span<const double> v);
/// Squared Euclidean distance between two equally sized vectors.
double sq_dist(std::span<const double> a, std::span<const double> b);

/// Row-oriented matrix, dense (row-major) or sparse (CSR), with cached
/// squared row norms and squared Frobenius norm. Immutable after
/// construction; rows with no nonzero entry are rejected because every
/// solver update divides by the squared row norm.
///
/// Sparse matrices also keep transpose (CSC-like) storage so that the
/// incremental residual update r -= beta * A * (A^(i))^T only touches the
/// columns in row i's support.
class RowMatrix {
public:
    struct Triplet {
        int row;
        int col;
        double value;
    };

    static RowMatrix dense(int m, int n, Vector values);
    static RowMatrix csr(int m, int n, std::vector<int> row_offsets,
                         std::vector<int> col_indices, Vector values);
    /// Builds CSR storage from unordered (row, col, value) entries.
    /// Duplicate coordinates are an error; explicit zeros are dropped.
    static RowMatrix from_triplets(int m, int n, std::vector<Triplet> entries);

    int rows() const { return m_; }
    int cols() const { return n_; }
    bool is_sparse() const { return sparse_; }
    std::size_t nnz() const { return sparse_ ? vals_.size() : dense_.size(); }

    double row_sq_norm(int i) const { return row_sq_norms_[static_cast<std::size_t>(i)]; }
    std::span<const double> row_sq_norms() const { return row_sq_norms_; }
    double frob_sq() const { return frob_sq_; }

    double min_row_sq_norm() const { return min_norm_; }
    double max_row_sq_norm() const { return max_norm_; }
    /// min over rows != skip; pass -1 for the unrestricted minimum.
    double min_row_sq_norm_excluding(int skip) const;
    /// min over rows outside a sorted index set; NaN when the set covers all rows.
    double min_row_sq_norm_outside(std::span<const int> sorted_indices) const;
    double max_row_sq_norm_over(std::span<const int> indices) const;
    double sum_row_sq_norm_over(std::span<const int> indices) const;

    /// Sum_j A_ij x_j; CSR rows touch stored entries only.
    double row_dot(int i, std::span<const double> x) const;
    /// x += alpha * (A^(i))^T; CSR rows touch stored coordinates only.
    void add_scaled_row(std::span<double> x, double alpha, int i) const;
    /// y = A x.
    void apply(std::span<const double> x, std::span<double> y) const;
    Vector apply(const Vector& x) const;
    /// A^T y.
    Vector transpose_apply(const Vector& y) const;
    /// r -= beta * A * (A^(i))^T in one sparse-aware pass.
    void sub_scaled_col_gram(std::span<double> r, double beta, int i) const;

    /// Densifies row i into out (length n).
    void copy_row(int i, std::span<double> out) const;
    /// Row-major |indices| x n dense copy of the selected rows.
    Vector gather_rows(std::span<const int> indices) const;

    const Vector& dense_values() const { return dense_; }
    std::span<const int> row_cols(int i) const;
    std::span<const double> row_vals(int i) const;

private:
    RowMatrix() = default;
    void finalize();

    int m_ = 0;
    int n_ = 0;
    bool sparse_ = false;

    Vector dense_; // m*n row-major when dense

    std::vector<int> offsets_; // CSR
    std::vector<int> cols_;
    Vector vals_;
    std::vector<int> t_offsets_; // transpose storage (per column)
    std::vector<int> t_rows_;
    Vector t_vals_;

    Vector row_sq_norms_;
    double frob_sq_ = 0.0;
    double min_norm_ = 0.0;
    double max_norm_ = 0.0;
    std::vector<int> norm_order_; // row indices, ascending squared norm
};

} // namespace kaczmarz
