#include "kaczmarz/problems.hpp"

#include "kaczmarz/random.hpp"

#include <stdexcept>
#include <utility>

namespace kaczmarz {

ProblemSpec ProblemSpec::gaussian_dense(int m, int n) {
    ProblemSpec s;
    s.source = Source::GaussianDense;
    s.m = m;
    s.n = n;
    return s;
}

ProblemSpec ProblemSpec::uniform_dense(int m, int n) {
    ProblemSpec s;
    s.source = Source::UniformDense;
    s.m = m;
    s.n = n;
    return s;
}

ProblemSpec ProblemSpec::sparse_normal(int m, int n, double density) {
    ProblemSpec s;
    s.source = Source::SparseNormal;
    s.m = m;
    s.n = n;
    s.density = density;
    return s;
}

ProblemSpec ProblemSpec::sparse_uniform(int m, int n, double density) {
    ProblemSpec s;
    s.source = Source::SparseUniform;
    s.m = m;
    s.n = n;
    s.density = density;
    return s;
}

ProblemSpec ProblemSpec::matrix_market(std::string path) {
    ProblemSpec s;
    s.source = Source::MatrixMarketFile;
    s.path = std::move(path);
    return s;
}

ProblemSpec& ProblemSpec::with_solution(Vector x_star) {
    solution = SolutionKind::Provided;
    provided_solution = std::move(x_star);
    return *this;
}

namespace {

void validate(const ProblemSpec& spec) {
    if (spec.source == ProblemSpec::Source::MatrixMarketFile) {
        if (spec.path.empty()) throw std::invalid_argument("ProblemSpec: missing file path");
        return;
    }
    if (spec.m < 1 || spec.n < 1) throw std::invalid_argument("ProblemSpec: m, n must be >= 1");
    if (spec.source == ProblemSpec::Source::SparseNormal ||
        spec.source == ProblemSpec::Source::SparseUniform) {
        if (!(spec.density > 0.0 && spec.density <= 1.0)) {
            throw std::invalid_argument("ProblemSpec: density must lie in (0, 1]");
        }
    }
}

RowMatrix dense_random(int m, int n, bool gaussian, Rng& rng) {
    Vector values(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    while (true) {
        bool ok = true;
        for (int i = 0; i < m; ++i) {
            double* row = values.data() + static_cast<std::size_t>(i) * n;
            double row_sq = 0.0;
            for (int j = 0; j < n; ++j) {
                row[j] = gaussian ? rng.next_normal() : rng.next_uniform();
                row_sq += row[j] * row[j];
            }
            if (row_sq == 0.0) ok = false;
        }
        if (ok) return RowMatrix::dense(m, n, std::move(values));
        // vanishingly unlikely; regenerate rather than patch rows
    }
}

RowMatrix sparse_random(int m, int n, double density, bool gaussian, Rng& rng) {
    std::vector<int> offsets(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> cols;
    Vector vals;
    cols.reserve(static_cast<std::size_t>(density * m * n * 1.1) + 16);
    vals.reserve(cols.capacity());

    for (int i = 0; i < m; ++i) {
        const auto row_begin = cols.size();
        // resample empty rows so every row keeps at least one nonzero
        do {
            cols.resize(row_begin);
            vals.resize(row_begin);
            for (int j = 0; j < n; ++j) {
                if (rng.next_uniform() < density) {
                    double v = gaussian ? rng.next_normal() : rng.next_uniform();
                    if (v == 0.0) v = gaussian ? 1e-300 : 0.5;
                    cols.push_back(j);
                    vals.push_back(v);
                }
            }
        } while (cols.size() == row_begin);
        offsets[static_cast<std::size_t>(i) + 1] = static_cast<int>(cols.size());
    }
    return RowMatrix::csr(m, n, std::move(offsets), std::move(cols), std::move(vals));
}

} // namespace

Problem generate(const ProblemSpec& spec, std::uint64_t seed) {
    validate(spec);
    Rng rng(Rng::mix(seed, 0x6d617472ull)); // matrix stream

    RowMatrix A = [&]() -> RowMatrix {
        switch (spec.source) {
            case ProblemSpec::Source::GaussianDense:
                return dense_random(spec.m, spec.n, true, rng);
            case ProblemSpec::Source::UniformDense:
                return dense_random(spec.m, spec.n, false, rng);
            case ProblemSpec::Source::SparseNormal:
                return sparse_random(spec.m, spec.n, spec.density, true, rng);
            case ProblemSpec::Source::SparseUniform:
                return sparse_random(spec.m, spec.n, spec.density, false, rng);
            case ProblemSpec::Source::MatrixMarketFile:
                return read_matrix_market(spec.path);
        }
        throw std::logic_error("unreachable");
    }();

    Vector x_star;
    if (spec.solution == ProblemSpec::SolutionKind::Provided) {
        if (spec.provided_solution.size() != static_cast<std::size_t>(A.cols())) {
            throw std::invalid_argument("ProblemSpec: provided solution length != n");
        }
        require_finite(spec.provided_solution, "ProblemSpec provided solution");
        x_star = spec.provided_solution;
    } else {
        Rng xrng(Rng::mix(seed, 0x736f6c76ull)); // solution stream
        x_star.resize(static_cast<std::size_t>(A.cols()));
        for (double& v : x_star) v = xrng.next_normal();
    }

    Vector b = A.apply(x_star);
    return Problem{std::move(A), std::move(b), std::move(x_star)};
}

} // namespace kaczmarz
