// pybind11 bindings exposing the solver library's main operations.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "kaczmarz/analysis.hpp"
#include "kaczmarz/bench.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/problems.hpp"
#include "kaczmarz/solvers.hpp"

namespace py = pybind11;
using namespace kaczmarz;

namespace {

Vector to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    const auto* data = arr.data();
    return Vector(data, data + arr.shape(0));
}

py::array_t<double> to_numpy(const Vector& v) {
    py::array_t<double> out(py::array::ShapeContainer{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), static_cast<double*>(out.request().ptr));
    return out;
}

RowMatrix matrix_from_dense(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
    const int m = static_cast<int>(arr.shape(0));
    const int n = static_cast<int>(arr.shape(1));
    const auto* data = arr.data();
    return RowMatrix::dense(m, n, Vector(data, data + static_cast<std::size_t>(m) * n));
}

py::array_t<double> matrix_to_dense(const RowMatrix& A) {
    py::array_t<double> out({A.rows(), A.cols()});
    auto view = out.mutable_unchecked<2>();
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) view(i, j) = 0.0;
        if (A.is_sparse()) {
            const auto cols = A.row_cols(i);
            const auto vals = A.row_vals(i);
            for (std::size_t p = 0; p < cols.size(); ++p) view(i, cols[p]) = vals[p];
        } else {
            const auto vals = A.row_vals(i);
            for (int j = 0; j < A.cols(); ++j) view(i, j) = vals[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

SolveReport run_solve(const RowMatrix& A,
                      const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
                      const std::string& method, double tol, const std::string& metric,
                      long max_iters, std::uint64_t seed,
                      std::optional<py::array_t<double, py::array::c_style |
                                                            py::array::forcecast>> x0,
                      std::optional<py::array_t<double, py::array::c_style |
                                                            py::array::forcecast>> x_star) {
    StopCriteria stop;
    stop.tol = tol;
    stop.max_iters = max_iters;
    if (metric == "res") {
        stop.metric = Metric::RES;
    } else if (metric == "rr") {
        stop.metric = Metric::RR;
    } else {
        throw std::invalid_argument("metric must be 'res' or 'rr'");
    }

    Vector x0v = x0 ? to_vector(*x0) : Vector(static_cast<std::size_t>(A.cols()), 0.0);
    Vector xsv;
    const Vector* xs = nullptr;
    if (x_star) {
        xsv = to_vector(*x_star);
        xs = &xsv;
    }
    Rng rng(seed);
    return solve(SelectionRule::parse(method), A, to_vector(b), x0v, stop, rng, xs);
}

} // namespace

PYBIND11_MODULE(_kaczmarz, m) {
    m.doc() = "greedy Kaczmarz / Motzkin-Kaczmarz solvers and analysis";

    py::class_<RowMatrix>(m, "RowMatrix")
        .def_static("dense", &matrix_from_dense, py::arg("array"))
        .def_static(
            "csr",
            [](int m_, int n_, std::vector<int> offsets, std::vector<int> cols,
               std::vector<double> vals) {
                return RowMatrix::csr(m_, n_, std::move(offsets), std::move(cols),
                                      std::move(vals));
            },
            py::arg("m"), py::arg("n"), py::arg("row_offsets"), py::arg("col_indices"),
            py::arg("values"))
        .def_property_readonly("shape",
                               [](const RowMatrix& A) {
                                   return py::make_tuple(A.rows(), A.cols());
                               })
        .def_property_readonly("nnz", &RowMatrix::nnz)
        .def_property_readonly("is_sparse", &RowMatrix::is_sparse)
        .def_property_readonly("frob_sq", &RowMatrix::frob_sq)
        .def("row_sq_norm", &RowMatrix::row_sq_norm, py::arg("i"))
        .def("to_dense", &matrix_to_dense);

    py::class_<HistoryRecord>(m, "HistoryRecord")
        .def_readonly("k", &HistoryRecord::k)
        .def_readonly("res", &HistoryRecord::res)
        .def_readonly("rr", &HistoryRecord::rr)
        .def_readonly("elapsed_ns", &HistoryRecord::elapsed_ns)
        .def_readonly("set_size", &HistoryRecord::set_size);

    py::class_<SolveReport>(m, "SolveReport")
        .def_property_readonly("converged", &SolveReport::converged)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_property_readonly("final_x",
                               [](const SolveReport& r) { return to_numpy(r.final_x); })
        .def_readonly("history", &SolveReport::history)
        .def_property_readonly("res_history",
                               [](const SolveReport& r) {
                                   Vector v;
                                   for (const auto& rec : r.history) v.push_back(rec.res);
                                   return to_numpy(v);
                               })
        .def_property_readonly("rr_history",
                               [](const SolveReport& r) {
                                   Vector v;
                                   for (const auto& rec : r.history) v.push_back(rec.rr);
                                   return to_numpy(v);
                               })
        .def_property_readonly("set_sizes", [](const SolveReport& r) {
            std::vector<int> v;
            for (const auto& rec : r.history) v.push_back(rec.set_size);
            return v;
        });

    m.def("solve", &run_solve, py::arg("A"), py::arg("b"), py::arg("method") = "grmk",
          py::arg("tol") = 1e-10, py::arg("metric") = "res", py::arg("max_iters") = 0,
          py::arg("seed") = 0, py::arg("x0") = std::nullopt,
          py::arg("x_star") = std::nullopt,
          "Run one solver on A x = b and return the iteration report.");

    m.def(
        "generate",
        [](const std::string& source, int m_, int n_, double density, std::uint64_t seed) {
            ProblemSpec spec;
            if (source == "gaussian") {
                spec = ProblemSpec::gaussian_dense(m_, n_);
            } else if (source == "uniform") {
                spec = ProblemSpec::uniform_dense(m_, n_);
            } else if (source == "sprandn") {
                spec = ProblemSpec::sparse_normal(m_, n_, density);
            } else if (source == "sprand") {
                spec = ProblemSpec::sparse_uniform(m_, n_, density);
            } else {
                throw std::invalid_argument("source must be gaussian|uniform|sprandn|sprand");
            }
            Problem prob = generate(spec, seed);
            return py::make_tuple(std::move(prob.A), to_numpy(prob.b), to_numpy(prob.x_star));
        },
        py::arg("source"), py::arg("m"), py::arg("n"), py::arg("density") = 0.2,
        py::arg("seed") = 0, "Generate (A, b, x_star) with b = A @ x_star.");

    m.def(
        "min_norm_solution",
        [](const RowMatrix& A,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
            return to_numpy(min_norm_solution(A, to_vector(b)));
        },
        py::arg("A"), py::arg("b"));

    m.def("lambda_min_pos", &lambda_min_pos, py::arg("A"),
          "Smallest positive eigenvalue of A^T A.");

    m.def(
        "grk_factor",
        [](const RowMatrix& A) { return grk_factor(A, lambda_min_pos(A)); }, py::arg("A"),
        "Per-step GRK convergence factor.");

    m.def(
        "grmk_general_factor",
        [](const RowMatrix& A, const SolveReport& rep) {
            return grmk_general_factor_from_run(A, rep, lambda_min_pos(A));
        },
        py::arg("A"), py::arg("report"),
        "Alpha-form GRMK convergence factor from a recorded run.");

    m.def(
        "bound_report",
        [](const RowMatrix& A, const SolveReport& grmk_run,
           std::optional<SolveReport> gmbk_run) {
            const BoundReport rep =
                compute_bound_report(A, grmk_run, gmbk_run ? &*gmbk_run : nullptr);
            py::dict out;
            out["grmk_first_step"] = rep.grmk_first_step;
            out["grmk_general"] = rep.grmk_general;
            out["grk_factor"] = rep.grk_factor;
            out["gmbk_first"] = rep.gmbk_first;
            out["gmbk_general"] = rep.gmbk_general;
            out["gmbk_step_factors"] = rep.gmbk_step_factors;
            out["gmbk_vacuous_steps"] = rep.gmbk_vacuous_steps;
            return out;
        },
        py::arg("A"), py::arg("grmk_report"), py::arg("gmbk_report") = std::nullopt,
        "Convergence factors assembled from recorded runs.");

    m.def(
        "read_matrix_market",
        [](const std::string& path) { return read_matrix_market(path); }, py::arg("path"));

    m.def(
        "write_matrix_market",
        [](const RowMatrix& A, const std::string& path) { write_matrix_market(A, path); },
        py::arg("A"), py::arg("path"));
}
