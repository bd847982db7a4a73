#pragma once

#include <span>
#include <vector>

#include "kaczmarz/row_matrix.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

/// Theoretical convergence factors and the empirical rate of a run.
/// A factor is "vacuous" when the bound expression is <= 0 or undefined;
/// vacuous values are reported raw, never clamped.
struct BoundReport {
    double grmk_first_step = 0.0; // first-step GRMK factor
    double grmk_general = 0.0;    // alpha-form per-step GRMK factor
    double grk_factor = 0.0;      // per-step GRK factor
    double gmbk_first = 0.0;      // first-step GMBK factor
    double gmbk_general = 0.0;    // worst non-vacuous per-step GMBK factor
    std::vector<double> gmbk_step_factors; // raw per-step values, k >= 1
    int gmbk_vacuous_steps = 0;
    std::vector<double> rho_history; // rho_k for k = 1..K
};

bool bound_vacuous(double factor);

/// 1 - 1/2 (lambda_min / ||A||_F^2) (||A||_F^2 / (||A||_F^2 - min_i ||A^(i)||^2) + 1).
double grk_factor(const RowMatrix& A, double lambda_min);

/// 1 - (min_i ||A^(i)||^2 / max_{i in I0} ||A^(i)||^2) (lambda_min / ||A||_F^2).
double grmk_first_factor(const RowMatrix& A, const IndexSet& first_set,
                         double lambda_min);

/// Per-step GRMK factor for k >= 1, using the realized set I_k and the
/// previously chosen row.
double grmk_step_factor(const RowMatrix& A, const IndexSet& set_k, int prev_row,
                        double lambda_min);

/// alpha = min_k (min_{i != i_{k-1}} ||A^(i)||^2 / max_{i in I_k} ||A^(i)||^2)
/// over the realized iteration history (k >= 1).
double grmk_alpha(const RowMatrix& A, std::span<const IndexSet> sets,
                  std::span<const int> rows);

/// The alpha-form per-step factor of the cumulative GRMK estimate.
double grmk_general_factor(const RowMatrix& A, double alpha, double lambda_min);

/// Convenience: alpha and general factor from a recorded GRMK run.
double grmk_general_factor_from_run(const RowMatrix& A, const SolveReport& report,
                                    double lambda_min);

/// 1 - |I0| (min_i ||A^(i)||^2 / lambda_max(A_I0^T A_I0)) (lambda_min / ||A||_F^2).
double gmbk_first_factor(const RowMatrix& A, const IndexSet& first_set,
                         double lambda_min);

/// Per-step GMBK factor for k >= 1 from the realized sets I_k and I_{k-1};
/// may be <= 0 or NaN (vacuous) and is returned as computed.
double gmbk_step_factor(const RowMatrix& A, const IndexSet& set_k,
                        const IndexSet& set_prev, double lambda_min);

/// All per-step GMBK factors of a recorded set history.
std::vector<double> gmbk_step_factors(const RowMatrix& A,
                                      std::span<const IndexSet> sets,
                                      double lambda_min);

/// Assembles the full factor set from recorded runs: a GRMK run for the
/// first-step and alpha-form factors, an optional GMBK run for the block
/// factors, and optional per-trial squared-error histories for rho_k.
BoundReport compute_bound_report(const RowMatrix& A, const SolveReport& grmk_run,
                                 const SolveReport* gmbk_run = nullptr,
                                 const std::vector<std::vector<double>>* trial_err_sq =
                                     nullptr);

/// rho_k = (E||x_k - x*||^2 / ||x_0 - x*||^2)^(1/k) for k >= 1, with the
/// expectation estimated by a sample mean over trials.
double empirical_rate(std::span<const double> mean_err_sq, long k);

/// Pools per-trial squared-error histories into a mean curve of length
/// `upto + 1`; trials that converged early contribute their final value.
std::vector<double> mean_sq_error_curve(
    const std::vector<std::vector<double>>& trial_histories, std::size_t upto);

/// Squared-error history ||x_k - x*||^2 of a run that recorded RES.
std::vector<double> err_sq_history(const SolveReport& report);

struct Metrics {
    double res = 0.0;
    double rr = 0.0;
};

/// RES = ||x - x*||^2 / ||x*||^2 and RR = ||r||^2 / ||r0||^2.
/// Throws std::domain_error on x* = 0 and std::invalid_argument on r0 = 0.
Metrics metrics(std::span<const double> x, std::span<const double> x_star,
                std::span<const double> r, std::span<const double> r0);

} // namespace kaczmarz
