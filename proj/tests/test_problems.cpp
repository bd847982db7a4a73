#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "kaczmarz/problems.hpp"
#include "kaczmarz/solvers.hpp"
#include "matching_complex.hpp"
#include "support/reference.hpp"

using namespace kaczmarz;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }

    void write(const std::string& contents) const {
        std::ofstream out(path);
        out << contents;
    }
};

} // namespace

TEST_CASE("generation is deterministic and exactly consistent") {
    for (auto spec : {ProblemSpec::gaussian_dense(20, 8),
                      ProblemSpec::uniform_dense(20, 8),
                      ProblemSpec::sparse_normal(20, 8, 0.3),
                      ProblemSpec::sparse_uniform(20, 8, 0.3)}) {
        const Problem a = generate(spec, 99);
        const Problem b = generate(spec, 99);
        const Problem c = generate(spec, 100);

        CHECK(a.b == b.b);           // bitwise identical
        CHECK(a.x_star == b.x_star);
        CHECK(a.b != c.b);

        // b is defined by multiplication, not perturbed
        const Vector ax = a.A.apply(a.x_star);
        for (std::size_t i = 0; i < ax.size(); ++i) {
            CHECK(ax[i] == a.b[i]);
        }
    }
}

TEST_CASE("provided zero solution gives b = 0 and instant convergence") {
    ProblemSpec spec = ProblemSpec::gaussian_dense(10, 4);
    spec.with_solution(Vector(4, 0.0));
    const Problem prob = generate(spec, 5);
    CHECK(sq_norm(prob.b) == 0.0);

    StopCriteria stop;
    Rng rng(1);
    const SolveReport rep =
        solve(SelectionRule::grmk(), prob.A, prob.b, Vector(4, 0.0), stop, rng);
    CHECK(rep.converged());
    CHECK(rep.iterations == 0);
}

TEST_CASE("gaussian entries have the right moments") {
    const Problem prob = generate(ProblemSpec::gaussian_dense(1000, 1000), 1234);
    double mean = 0.0;
    double sq = 0.0;
    const auto& A = prob.A;
    for (int i = 0; i < A.rows(); ++i) {
        for (double v : A.row_vals(i)) {
            mean += v;
            sq += v * v;
        }
    }
    const double count = 1e6;
    mean /= count;
    const double var = sq / count - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("uniform entries stay in [0, 1)") {
    const Problem prob = generate(ProblemSpec::uniform_dense(50, 40), 8);
    for (int i = 0; i < prob.A.rows(); ++i) {
        for (double v : prob.A.row_vals(i)) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("sparse density lands near the target") {
    const Problem prob = generate(ProblemSpec::sparse_uniform(200, 100, 0.2), 45);
    const double expected = 0.2 * 200 * 100;
    CHECK(std::abs(static_cast<double>(prob.A.nnz()) - expected) <= 0.05 * expected);
    CHECK(prob.A.is_sparse());
    for (int i = 0; i < prob.A.rows(); ++i) CHECK(prob.A.row_sq_norm(i) > 0.0);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(generate(ProblemSpec::gaussian_dense(0, 4), 1), std::invalid_argument);
    CHECK_THROWS_AS(generate(ProblemSpec::sparse_normal(5, 5, 0.0), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate(ProblemSpec::sparse_normal(5, 5, 1.5), 1),
                    std::invalid_argument);
    ProblemSpec bad = ProblemSpec::gaussian_dense(5, 5);
    bad.with_solution(Vector(3, 1.0));
    CHECK_THROWS_AS(generate(bad, 1), std::invalid_argument);
}

TEST_CASE("matrix market: single entry file") {
    TempFile f("kz_single.mtx");
    f.write("%%MatrixMarket matrix coordinate real general\n% comment\n1 1 1\n1 1 2.5\n");
    const RowMatrix A = read_matrix_market(f.path);
    CHECK(A.rows() == 1);
    CHECK(A.cols() == 1);
    CHECK(A.nnz() == 1);
    CHECK(A.row_vals(0)[0] == 2.5);
}

TEST_CASE("matrix market: explicit zeros are dropped") {
    TempFile f("kz_zero.mtx");
    f.write("%%MatrixMarket matrix coordinate real general\n"
            "2 2 3\n1 1 1.0\n1 2 0.0\n2 2 4.0\n");
    const RowMatrix A = read_matrix_market(f.path);
    CHECK(A.nnz() == 2); // one fewer than the header count
    CHECK(A.rows() == 2);
}

TEST_CASE("matrix market: duplicates are rejected") {
    TempFile f("kz_dup.mtx");
    f.write("%%MatrixMarket matrix coordinate real general\n"
            "2 2 3\n1 1 1.0\n1 1 2.0\n2 2 4.0\n");
    CHECK_THROWS_AS(read_matrix_market(f.path), std::runtime_error);
}

TEST_CASE("matrix market: pattern entries become ones") {
    TempFile f("kz_pat.mtx");
    f.write("%%MatrixMarket matrix coordinate pattern general\n"
            "2 3 3\n1 1\n1 3\n2 2\n");
    const RowMatrix A = read_matrix_market(f.path);
    CHECK(A.nnz() == 3);
    CHECK(A.row_vals(0)[0] == 1.0);
    CHECK(A.row_sq_norm(0) == 2.0);
}

TEST_CASE("matrix market: symmetric storage expands") {
    TempFile f("kz_sym.mtx");
    f.write("%%MatrixMarket matrix coordinate real symmetric\n"
            "3 3 4\n1 1 2.0\n2 2 3.0\n3 1 5.0\n3 3 1.0\n");
    const RowMatrix A = read_matrix_market(f.path);
    CHECK(A.rows() == 3);
    CHECK(A.nnz() == 5); // diagonal entries stay single, (3,1) mirrors to (1,3)
    CHECK(A.row_dot(0, Vector{0.0, 0.0, 1.0}) == 5.0);
    CHECK(A.row_dot(2, Vector{1.0, 0.0, 0.0}) == 5.0);
}

TEST_CASE("matrix market: integer field and array format") {
    TempFile f("kz_int.mtx");
    f.write("%%MatrixMarket matrix coordinate integer general\n"
            "2 2 2\n1 1 3\n2 2 -4\n");
    const RowMatrix A = read_matrix_market(f.path);
    CHECK(A.row_vals(0)[0] == 3.0);
    CHECK(A.row_vals(1)[0] == -4.0);

    TempFile g("kz_arr.mtx");
    g.write("%%MatrixMarket matrix array real general\n"
            "2 2\n1.0\n3.0\n2.0\n4.0\n"); // column-major
    const RowMatrix B = read_matrix_market(g.path);
    CHECK(B.row_dot(0, Vector{1.0, 0.0}) == 1.0);
    CHECK(B.row_dot(0, Vector{0.0, 1.0}) == 2.0);
    CHECK(B.row_dot(1, Vector{1.0, 0.0}) == 3.0);
}

TEST_CASE("matrix market: malformed inputs") {
    TempFile f("kz_bad.mtx");
    f.write("%%NotMatrixMarket nope\n1 1 1\n1 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(f.path), std::runtime_error);

    TempFile g("kz_range.mtx");
    g.write("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(g.path), std::runtime_error);

    TempFile h("kz_trunc.mtx");
    h.write("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(h.path), std::runtime_error);

    TempFile skew("kz_skew.mtx");
    skew.write("%%MatrixMarket matrix coordinate real skew-symmetric\n"
               "2 2 1\n2 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(skew.path), std::runtime_error);

    CHECK_THROWS_AS(read_matrix_market("/nonexistent/file.mtx"), std::runtime_error);
}

TEST_CASE("matrix market: zero rows are filtered and counted") {
    TempFile f("kz_zrow.mtx");
    f.write("%%MatrixMarket matrix coordinate real general\n"
            "3 2 2\n1 1 1.0\n3 2 2.0\n"); // row 2 has no entry
    int dropped = -1;
    const RowMatrix A = read_matrix_market(f.path, &dropped);
    CHECK(dropped == 1);
    CHECK(A.rows() == 2);
    CHECK(A.cols() == 2);
}

TEST_CASE("matrix market write/read round trip") {
    Rng rng(3);
    std::vector<RowMatrix::Triplet> trips;
    for (int i = 0; i < 8; ++i) {
        trips.push_back({i, i % 5, rng.next_normal()});
        trips.push_back({i, (i + 3) % 5, rng.next_normal()});
    }
    const RowMatrix A = RowMatrix::from_triplets(8, 5, trips);

    TempFile f("kz_round.mtx");
    write_matrix_market(A, f.path);
    const RowMatrix B = read_matrix_market(f.path);
    REQUIRE(B.rows() == A.rows());
    REQUIRE(B.cols() == A.cols());
    REQUIRE(B.nnz() == A.nnz());
    for (int i = 0; i < A.rows(); ++i) {
        const auto av = A.row_vals(i);
        const auto bv = B.row_vals(i);
        for (std::size_t p = 0; p < av.size(); ++p) CHECK(av[p] == bv[p]);
    }
}

TEST_CASE("matching complex boundary: dimensions and the d o d = 0 identity") {
    const auto B4 = kaczmarz::tools::boundary_matrix(9, 4); // mk9-b3
    CHECK(B4.rows == 945);
    CHECK(B4.cols == 1260);
    CHECK(B4.entries.size() == 3780);

    const auto B3 = kaczmarz::tools::boundary_matrix(9, 3); // mk9-b2
    CHECK(B3.rows == 1260);
    CHECK(B3.cols == 378);

    // compose: every 4-matching's boundary of boundary cancels
    std::vector<std::vector<std::pair<int, int>>> b3_rows(
        static_cast<std::size_t>(B3.rows));
    for (const auto& e : B3.entries) {
        b3_rows[static_cast<std::size_t>(e[0])].emplace_back(e[1], e[2]);
    }
    std::vector<int> acc(static_cast<std::size_t>(B3.cols), 0);
    int row = 0;
    std::vector<std::array<int, 3>> row_entries;
    auto flush = [&]() {
        for (const auto& re : row_entries) {
            for (const auto& [c2, v2] : b3_rows[static_cast<std::size_t>(re[1])]) {
                acc[static_cast<std::size_t>(c2)] += re[2] * v2;
            }
        }
        for (const auto& re : row_entries) {
            for (const auto& [c2, v2] : b3_rows[static_cast<std::size_t>(re[1])]) {
                CHECK(acc[static_cast<std::size_t>(c2)] == 0);
                acc[static_cast<std::size_t>(c2)] = 0;
            }
        }
        row_entries.clear();
    };
    for (const auto& e : B4.entries) {
        if (e[0] != row) {
            flush();
            row = e[0];
        }
        row_entries.push_back(e);
    }
    flush();
}

TEST_CASE("generated mk9-b3 file parses back with matching structure") {
    const auto B4 = kaczmarz::tools::boundary_matrix(9, 4);
    TempFile f("kz_mk9b3.mtx");
    {
        std::ofstream out(f.path);
        out << "%%MatrixMarket matrix coordinate integer general\n";
        out << B4.rows << " " << B4.cols << " " << B4.entries.size() << "\n";
        for (const auto& e : B4.entries) {
            out << e[0] + 1 << " " << e[1] + 1 << " " << e[2] << "\n";
        }
    }
    const RowMatrix A = read_matrix_market(f.path);
    CHECK(A.rows() == 945);
    CHECK(A.cols() == 1260);
    CHECK(A.nnz() == 3780);
    // every row is a 4-term signed incidence: squared norm 4
    for (int i = 0; i < A.rows(); ++i) CHECK(A.row_sq_norm(i) == 4.0);
}
