#pragma once

#include <cstdint>
#include <string>

#include "kaczmarz/row_matrix.hpp"

namespace kaczmarz {

/// Problem recipe: matrix source, optional density, and how the reference
/// solution is chosen. b is always built as A * x_star, so generated
/// systems are consistent by construction.
struct ProblemSpec {
    enum class Source {
        GaussianDense,   // i.i.d. N(0,1) entries
        UniformDense,    // i.i.d. U(0,1) entries
        SparseNormal,    // N(0,1) values on a Bernoulli(density) pattern
        SparseUniform,   // U(0,1) values on a Bernoulli(density) pattern
        MatrixMarketFile,
    };
    enum class SolutionKind { RandomNormal, Provided };

    Source source = Source::GaussianDense;
    int m = 0;
    int n = 0;
    double density = 0.2; // sparse sources only, in (0, 1]
    std::string path;     // MatrixMarketFile only
    SolutionKind solution = SolutionKind::RandomNormal;
    Vector provided_solution;

    static ProblemSpec gaussian_dense(int m, int n);
    static ProblemSpec uniform_dense(int m, int n);
    static ProblemSpec sparse_normal(int m, int n, double density);
    static ProblemSpec sparse_uniform(int m, int n, double density);
    static ProblemSpec matrix_market(std::string path);

    ProblemSpec& with_solution(Vector x_star);
};

struct Problem {
    RowMatrix A;
    Vector b;
    Vector x_star;
};

/// Deterministic for a given (spec, seed); empty rows of sparse patterns
/// are resampled so every row carries at least one nonzero.
Problem generate(const ProblemSpec& spec, std::uint64_t seed);

/// Reads a Matrix Market file (coordinate real/integer/pattern or array
/// real/integer; general or symmetric). Pattern entries become 1.0,
/// explicit zeros are dropped, duplicate coordinates are an error, and
/// zero rows are filtered out with the count reported through
/// dropped_zero_rows when non-null.
RowMatrix read_matrix_market(const std::string& path, int* dropped_zero_rows = nullptr);

/// Writes coordinate real general format.
void write_matrix_market(const RowMatrix& A, const std::string& path);

} // namespace kaczmarz
