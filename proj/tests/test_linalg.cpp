#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "kaczmarz/linalg.hpp"
#include "support/reference.hpp"

using namespace kaczmarz;
namespace kt = kaczmarz::testing;

TEST_CASE("lambda_min_pos") {
    // reference instance: A^T A = [[2,1],[1,2]], eigenvalues {1, 3}
    CHECK(lambda_min_pos(kt::reference_matrix()) == doctest::Approx(1.0).epsilon(1e-12));

    Vector id(25, 0.0);
    for (int i = 0; i < 5; ++i) id[static_cast<std::size_t>(i) * 5 + i] = 1.0;
    CHECK(lambda_min_pos(RowMatrix::dense(5, 5, id)) == doctest::Approx(1.0).epsilon(1e-12));

    // rank-1: A^T A eigenvalues {5, 0}; the zero eigenvalue is skipped
    const RowMatrix R = RowMatrix::dense(2, 2, {1.0, 0.0, 2.0, 0.0});
    CHECK(lambda_min_pos(R) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("lambda_min_pos agrees with a full Gram eigendecomposition") {
    Rng rng(41);
    for (int rep = 0; rep < 5; ++rep) {
        const int m = 8 + rep * 3;
        const int n = 6;
        const RowMatrix A = kt::random_dense(m, n, rng);
        const Eigen::MatrixXd M = kt::to_eigen(A);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.transpose() * M,
                                                           Eigen::EigenvaluesOnly);
        double expect = 0.0;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            if (eig.eigenvalues()(i) > 1e-10 * eig.eigenvalues()(eig.eigenvalues().size() - 1)) {
                expect = eig.eigenvalues()(i);
                break;
            }
        }
        CHECK(lambda_min_pos(A) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("min_norm_solution") {
    const RowMatrix I2 = RowMatrix::dense(2, 2, {1.0, 0.0, 0.0, 1.0});
    const Vector x1 = min_norm_solution(I2, {1.0, 2.0});
    CHECK(x1[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x1[1] == doctest::Approx(2.0).epsilon(1e-12));

    // one equation x1 + x2 = 2: the KKT min-norm point is (1, 1)
    const RowMatrix single = RowMatrix::dense(1, 2, {1.0, 1.0});
    const Vector x2 = min_norm_solution(single, {2.0});
    CHECK(x2[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x2[1] == doctest::Approx(1.0).epsilon(1e-12));

    const Vector x3 = min_norm_solution(kt::reference_matrix(), kt::reference_rhs());
    CHECK(x3[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(x3[1] == doctest::Approx(2.0).epsilon(1e-10));

    const RowMatrix incons = RowMatrix::dense(2, 2, {1.0, 0.0, 1.0, 0.0});
    CHECK_THROWS_WITH_AS(min_norm_solution(incons, {1.0, 2.0}), "system inconsistent",
                         std::runtime_error);
}

TEST_CASE("min_norm_solution lands in the row space") {
    Rng rng(43);
    const RowMatrix A = kt::random_dense(6, 15, rng); // underdetermined
    Vector xs = kt::random_vector(15, rng);
    const Vector b = A.apply(xs);
    const Vector x = min_norm_solution(A, b);

    // residual small and x orthogonal to null(A) = x in R(A^T):
    // project x onto the row space and compare
    const Eigen::MatrixXd M = kt::to_eigen(A);
    const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), 15);
    const Eigen::VectorXd proj =
        M.transpose() * kt::svd_pinv_apply(M * M.transpose(), M * xv);
    CHECK((xv - proj).norm() <= 1e-9 * (1.0 + xv.norm()));

    const Vector ax = A.apply(x);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
}

TEST_CASE("block_ls_apply") {
    const RowMatrix A = kt::reference_matrix();

    IndexSet single;
    single.indices = {2};
    const Vector z1 = block_ls_apply(A, single, {3.0});
    CHECK(z1[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(z1[1] == doctest::Approx(1.5).epsilon(1e-12));

    const RowMatrix I3 = RowMatrix::dense(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    IndexSet two;
    two.indices = {0, 2};
    const Vector z2 = block_ls_apply(I3, two, {5.0, 7.0});
    CHECK(z2[0] == doctest::Approx(5.0));
    CHECK(z2[1] == 0.0);
    CHECK(z2[2] == doctest::Approx(7.0));

    // proportional rows: consistent rank-deficient subsystem, min-norm answer
    const RowMatrix P = RowMatrix::dense(2, 2, {1.0, 0.0, 2.0, 0.0});
    IndexSet both;
    both.indices = {0, 1};
    const Vector z3 = block_ls_apply(P, both, {1.0, 2.0});
    CHECK(z3[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z3[1] == doctest::Approx(0.0));

    IndexSet empty;
    CHECK_THROWS_AS(block_ls_apply(A, empty, {}), std::invalid_argument);
    CHECK_THROWS_AS(block_ls_apply(A, single, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("block_ls_apply matches the SVD pseudoinverse oracle") {
    Rng rng(47);
    for (int rep = 0; rep < 20; ++rep) {
        const RowMatrix A = kt::random_dense(30, 10, rng);
        IndexSet idx;
        for (int i = 0; i < 30; ++i) {
            if (rng.next_uniform() < 0.25) idx.indices.push_back(i);
        }
        if (idx.empty()) idx.indices.push_back(rng.next_index(30));

        Vector rhs = kt::random_vector(idx.size(), rng);
        const Vector z = block_ls_apply(A, idx, rhs);

        const Eigen::MatrixXd M = kt::to_eigen(A);
        Eigen::MatrixXd sub(idx.size(), 10);
        for (int r = 0; r < idx.size(); ++r) {
            sub.row(r) = M.row(idx.indices[static_cast<std::size_t>(r)]);
        }
        const Eigen::VectorXd expect = kt::svd_pinv_apply(
            sub, Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size())));

        double diff = 0.0;
        for (int j = 0; j < 10; ++j) {
            diff = std::max(diff, std::abs(z[static_cast<std::size_t>(j)] - expect(j)));
        }
        CHECK(diff <= 1e-9 * (1.0 + expect.norm()));
    }
}

TEST_CASE("row-space vectors satisfy the Gram lower bound") {
    // for any x in R(A^T): ||A x||^2 >= lambda_min(A^T A) ||x||^2
    Rng rng(53);
    const RowMatrix A = kt::random_dense(30, 10, rng);
    const double lambda = lambda_min_pos(A);
    for (int rep = 0; rep < 100; ++rep) {
        const Vector y = kt::random_vector(30, rng);
        const Vector x = A.transpose_apply(y);
        const Vector ax = A.apply(x);
        CHECK(sq_norm(ax) >= lambda * sq_norm(x) * (1.0 - 1e-8));
    }
}

TEST_CASE("lambda_max_block matches a dense eigendecomposition") {
    Rng rng(59);
    const RowMatrix A = kt::random_dense(12, 5, rng);
    const std::vector<int> idx{1, 4, 7, 9};
    const Eigen::MatrixXd M = kt::to_eigen(A);
    Eigen::MatrixXd sub(4, 5);
    for (int r = 0; r < 4; ++r) sub.row(r) = M.row(idx[static_cast<std::size_t>(r)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub.transpose() * sub,
                                                       Eigen::EigenvaluesOnly);
    const double expect = eig.eigenvalues()(eig.eigenvalues().size() - 1);
    CHECK(lambda_max_block(A, idx) == doctest::Approx(expect).epsilon(1e-10));
}
