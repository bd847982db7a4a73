#include "kaczmarz/row_matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kaczmarz {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMatrix = Eigen::Map<const EigenRowMajor>;
using MapVec = Eigen::Map<Eigen::VectorXd>;
using MapConstVec = Eigen::Map<const Eigen::VectorXd>;

} // namespace

void require_finite(std::span<const double> v, const std::string& what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(what + " contains a non-finite entry");
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sq_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double inf_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

RowMatrix RowMatrix::dense(int m, int n, Vector values) {
    if (m < 1 || n < 1) throw std::invalid_argument("RowMatrix: m and n must be >= 1");
    if (values.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n)) {
        throw std::invalid_argument("RowMatrix::dense: values size != m*n");
    }
    require_finite(values, "RowMatrix::dense values");

    RowMatrix A;
    A.m_ = m;
    A.n_ = n;
    A.sparse_ = false;
    A.dense_ = std::move(values);
    A.finalize();
    return A;
}

RowMatrix RowMatrix::csr(int m, int n, std::vector<int> row_offsets,
                         std::vector<int> col_indices, Vector values) {
    if (m < 1 || n < 1) throw std::invalid_argument("RowMatrix: m and n must be >= 1");
    if (row_offsets.size() != static_cast<std::size_t>(m) + 1 || row_offsets.front() != 0 ||
        row_offsets.back() != static_cast<int>(values.size()) ||
        col_indices.size() != values.size()) {
        throw std::invalid_argument("RowMatrix::csr: inconsistent structure arrays");
    }
    require_finite(values, "RowMatrix::csr values");
    for (int i = 0; i < m; ++i) {
        const int begin = row_offsets[static_cast<std::size_t>(i)];
        const int end = row_offsets[static_cast<std::size_t>(i) + 1];
        if (begin > end) throw std::invalid_argument("RowMatrix::csr: offsets not nondecreasing");
        for (int p = begin; p < end; ++p) {
            const int c = col_indices[static_cast<std::size_t>(p)];
            if (c < 0 || c >= n) throw std::invalid_argument("RowMatrix::csr: column index out of range");
            if (p > begin && c <= col_indices[static_cast<std::size_t>(p) - 1]) {
                throw std::invalid_argument("RowMatrix::csr: column indices not strictly increasing in row");
            }
        }
    }

    RowMatrix A;
    A.m_ = m;
    A.n_ = n;
    A.sparse_ = true;
    A.offsets_ = std::move(row_offsets);
    A.cols_ = std::move(col_indices);
    A.vals_ = std::move(values);
    A.finalize();
    return A;
}

RowMatrix RowMatrix::from_triplets(int m, int n, std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n) {
            throw std::invalid_argument("RowMatrix::from_triplets: coordinate out of range");
        }
    }
    std::erase_if(entries, [](const Triplet& t) { return t.value == 0.0; });
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
            throw std::invalid_argument("RowMatrix::from_triplets: duplicate coordinate");
        }
    }

    std::vector<int> offsets(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> cols(entries.size());
    Vector vals(entries.size());
    for (const Triplet& t : entries) offsets[static_cast<std::size_t>(t.row) + 1]++;
    for (int i = 0; i < m; ++i) {
        offsets[static_cast<std::size_t>(i) + 1] += offsets[static_cast<std::size_t>(i)];
    }
    for (std::size_t p = 0; p < entries.size(); ++p) {
        cols[p] = entries[p].col;
        vals[p] = entries[p].value;
    }
    return csr(m, n, std::move(offsets), std::move(cols), std::move(vals));
}

void RowMatrix::finalize() {
    row_sq_norms_.assign(static_cast<std::size_t>(m_), 0.0);
    if (sparse_) {
        for (int i = 0; i < m_; ++i) {
            double s = 0.0;
            for (int p = offsets_[static_cast<std::size_t>(i)];
                 p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
                s += vals_[static_cast<std::size_t>(p)] * vals_[static_cast<std::size_t>(p)];
            }
            row_sq_norms_[static_cast<std::size_t>(i)] = s;
        }
    } else {
        for (int i = 0; i < m_; ++i) {
            const double* row = dense_.data() + static_cast<std::size_t>(i) * n_;
            double s = 0.0;
            for (int j = 0; j < n_; ++j) s += row[j] * row[j];
            row_sq_norms_[static_cast<std::size_t>(i)] = s;
        }
    }

    frob_sq_ = 0.0;
    for (double s : row_sq_norms_) {
        if (s == 0.0) throw std::invalid_argument("RowMatrix: zero row rejected");
        frob_sq_ += s;
    }

    norm_order_.resize(static_cast<std::size_t>(m_));
    std::iota(norm_order_.begin(), norm_order_.end(), 0);
    std::sort(norm_order_.begin(), norm_order_.end(), [this](int a, int b) {
        const double na = row_sq_norms_[static_cast<std::size_t>(a)];
        const double nb = row_sq_norms_[static_cast<std::size_t>(b)];
        return na != nb ? na < nb : a < b;
    });
    min_norm_ = row_sq_norms_[static_cast<std::size_t>(norm_order_.front())];
    max_norm_ = row_sq_norms_[static_cast<std::size_t>(norm_order_.back())];

    if (sparse_) {
        // transpose storage for the column-touching residual update
        t_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (int c : cols_) t_offsets_[static_cast<std::size_t>(c) + 1]++;
        for (int j = 0; j < n_; ++j) {
            t_offsets_[static_cast<std::size_t>(j) + 1] += t_offsets_[static_cast<std::size_t>(j)];
        }
        t_rows_.resize(vals_.size());
        t_vals_.resize(vals_.size());
        std::vector<int> cursor(t_offsets_.begin(), t_offsets_.end() - 1);
        for (int i = 0; i < m_; ++i) {
            for (int p = offsets_[static_cast<std::size_t>(i)];
                 p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
                const int c = cols_[static_cast<std::size_t>(p)];
                const int q = cursor[static_cast<std::size_t>(c)]++;
                t_rows_[static_cast<std::size_t>(q)] = i;
                t_vals_[static_cast<std::size_t>(q)] = vals_[static_cast<std::size_t>(p)];
            }
        }
    }
}

double RowMatrix::min_row_sq_norm_excluding(int skip) const {
    if (skip < 0 || norm_order_.front() != skip) return min_norm_;
    if (m_ == 1) return min_norm_;
    return row_sq_norms_[static_cast<std::size_t>(norm_order_[1])];
}

double RowMatrix::min_row_sq_norm_outside(std::span<const int> sorted_indices) const {
    for (int i : norm_order_) {
        if (!std::binary_search(sorted_indices.begin(), sorted_indices.end(), i)) {
            return row_sq_norms_[static_cast<std::size_t>(i)];
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double RowMatrix::max_row_sq_norm_over(std::span<const int> indices) const {
    double s = 0.0;
    for (int i : indices) s = std::max(s, row_sq_norms_[static_cast<std::size_t>(i)]);
    return s;
}

double RowMatrix::sum_row_sq_norm_over(std::span<const int> indices) const {
    double s = 0.0;
    for (int i : indices) s += row_sq_norms_[static_cast<std::size_t>(i)];
    return s;
}

double RowMatrix::row_dot(int i, std::span<const double> x) const {
    if (i < 0 || i >= m_) throw std::out_of_range("RowMatrix::row_dot: row index out of range");
    if (x.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("RowMatrix::row_dot: vector length != n");
    }
    if (sparse_) {
        double s = 0.0;
        for (int p = offsets_[static_cast<std::size_t>(i)];
             p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
            s += vals_[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(cols_[static_cast<std::size_t>(p)])];
        }
        return s;
    }
    const double* row = dense_.data() + static_cast<std::size_t>(i) * n_;
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += row[j] * x[static_cast<std::size_t>(j)];
    return s;
}

void RowMatrix::add_scaled_row(std::span<double> x, double alpha, int i) const {
    if (i < 0 || i >= m_) throw std::out_of_range("RowMatrix::add_scaled_row: row index out of range");
    if (x.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("RowMatrix::add_scaled_row: vector length != n");
    }
    if (alpha == 0.0) return;
    if (sparse_) {
        for (int p = offsets_[static_cast<std::size_t>(i)];
             p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
            x[static_cast<std::size_t>(cols_[static_cast<std::size_t>(p)])] +=
                alpha * vals_[static_cast<std::size_t>(p)];
        }
        return;
    }
    const double* row = dense_.data() + static_cast<std::size_t>(i) * n_;
    for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] += alpha * row[j];
}

void RowMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(m_)) {
        throw std::invalid_argument("RowMatrix::apply: dimension mismatch");
    }
    if (sparse_) {
        for (int i = 0; i < m_; ++i) {
            double s = 0.0;
            for (int p = offsets_[static_cast<std::size_t>(i)];
                 p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
                s += vals_[static_cast<std::size_t>(p)] *
                     x[static_cast<std::size_t>(cols_[static_cast<std::size_t>(p)])];
            }
            y[static_cast<std::size_t>(i)] = s;
        }
        return;
    }
    MapMatrix A(dense_.data(), m_, n_);
    MapVec(y.data(), m_).noalias() = A * MapConstVec(x.data(), n_);
}

Vector RowMatrix::apply(const Vector& x) const {
    Vector y(static_cast<std::size_t>(m_));
    apply(x, y);
    return y;
}

Vector RowMatrix::transpose_apply(const Vector& y) const {
    if (y.size() != static_cast<std::size_t>(m_)) {
        throw std::invalid_argument("RowMatrix::transpose_apply: dimension mismatch");
    }
    Vector x(static_cast<std::size_t>(n_), 0.0);
    if (sparse_) {
        for (int i = 0; i < m_; ++i) {
            const double yi = y[static_cast<std::size_t>(i)];
            if (yi == 0.0) continue;
            for (int p = offsets_[static_cast<std::size_t>(i)];
                 p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
                x[static_cast<std::size_t>(cols_[static_cast<std::size_t>(p)])] +=
                    yi * vals_[static_cast<std::size_t>(p)];
            }
        }
        return x;
    }
    MapMatrix A(dense_.data(), m_, n_);
    MapVec(x.data(), n_).noalias() = A.transpose() * MapConstVec(y.data(), m_);
    return x;
}

void RowMatrix::sub_scaled_col_gram(std::span<double> r, double beta, int i) const {
    if (i < 0 || i >= m_) throw std::out_of_range("RowMatrix::sub_scaled_col_gram: row index out of range");
    if (r.size() != static_cast<std::size_t>(m_)) {
        throw std::invalid_argument("RowMatrix::sub_scaled_col_gram: residual length != m");
    }
    if (beta == 0.0) return;
    if (sparse_) {
        for (int p = offsets_[static_cast<std::size_t>(i)];
             p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
            const int c = cols_[static_cast<std::size_t>(p)];
            const double bv = beta * vals_[static_cast<std::size_t>(p)];
            for (int q = t_offsets_[static_cast<std::size_t>(c)];
                 q < t_offsets_[static_cast<std::size_t>(c) + 1]; ++q) {
                r[static_cast<std::size_t>(t_rows_[static_cast<std::size_t>(q)])] -=
                    bv * t_vals_[static_cast<std::size_t>(q)];
            }
        }
        return;
    }
    MapMatrix A(dense_.data(), m_, n_);
    MapVec(r.data(), m_).noalias() -= beta * (A * A.row(i).transpose());
}

void RowMatrix::copy_row(int i, std::span<double> out) const {
    if (i < 0 || i >= m_) throw std::out_of_range("RowMatrix::copy_row: row index out of range");
    std::fill(out.begin(), out.end(), 0.0);
    if (sparse_) {
        for (int p = offsets_[static_cast<std::size_t>(i)];
             p < offsets_[static_cast<std::size_t>(i) + 1]; ++p) {
            out[static_cast<std::size_t>(cols_[static_cast<std::size_t>(p)])] =
                vals_[static_cast<std::size_t>(p)];
        }
        return;
    }
    const double* row = dense_.data() + static_cast<std::size_t>(i) * n_;
    std::copy(row, row + n_, out.begin());
}

Vector RowMatrix::gather_rows(std::span<const int> indices) const {
    Vector out(indices.size() * static_cast<std::size_t>(n_), 0.0);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        copy_row(indices[k], std::span<double>(out.data() + k * static_cast<std::size_t>(n_),
                                               static_cast<std::size_t>(n_)));
    }
    return out;
}

std::span<const int> RowMatrix::row_cols(int i) const {
    if (!sparse_) return {};
    const int begin = offsets_[static_cast<std::size_t>(i)];
    const int end = offsets_[static_cast<std::size_t>(i) + 1];
    return {cols_.data() + begin, static_cast<std::size_t>(end - begin)};
}

std::span<const double> RowMatrix::row_vals(int i) const {
    if (!sparse_) {
        return {dense_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }
    const int begin = offsets_[static_cast<std::size_t>(i)];
    const int end = offsets_[static_cast<std::size_t>(i) + 1];
    return {vals_.data() + begin, static_cast<std::size_t>(end - begin)};
}

} // namespace kaczmarz
