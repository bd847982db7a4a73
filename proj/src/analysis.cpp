#include "kaczmarz/analysis.hpp"

#include "kaczmarz/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kaczmarz {

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// (||A||_F^2 / (||A||_F^2 - min_i ||A^(i)||^2) + 1), the tail factor shared
// by the k >= 1 estimates; NaN when the denominator degenerates (m = 1).
double tail_factor(const RowMatrix& A) {
    const double denom = A.frob_sq() - A.min_row_sq_norm();
    if (!(denom > 0.0)) return nan_value();
    return A.frob_sq() / denom + 1.0;
}

} // namespace

bool bound_vacuous(double factor) {
    return !std::isfinite(factor) || factor <= 0.0;
}

double grk_factor(const RowMatrix& A, double lambda_min) {
    return 1.0 - 0.5 * (lambda_min / A.frob_sq()) * tail_factor(A);
}

double grmk_first_factor(const RowMatrix& A, const IndexSet& first_set,
                         double lambda_min) {
    if (first_set.empty()) throw std::invalid_argument("grmk_first_factor: empty set");
    const double ratio = A.min_row_sq_norm() / A.max_row_sq_norm_over(first_set.indices);
    return 1.0 - ratio * (lambda_min / A.frob_sq());
}

double grmk_step_factor(const RowMatrix& A, const IndexSet& set_k, int prev_row,
                        double lambda_min) {
    if (set_k.empty()) throw std::invalid_argument("grmk_step_factor: empty set");
    const double ratio =
        A.min_row_sq_norm_excluding(prev_row) / A.max_row_sq_norm_over(set_k.indices);
    return 1.0 - 0.5 * ratio * (lambda_min / A.frob_sq()) * tail_factor(A);
}

double grmk_alpha(const RowMatrix& A, std::span<const IndexSet> sets,
                  std::span<const int> rows) {
    if (sets.size() < 2) throw std::invalid_argument("grmk_alpha: need at least two steps");
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < sets.size(); ++k) {
        const int prev = rows[k - 1];
        const double ratio = A.min_row_sq_norm_excluding(prev) /
                             A.max_row_sq_norm_over(sets[k].indices);
        alpha = std::min(alpha, ratio);
    }
    return alpha;
}

double grmk_general_factor(const RowMatrix& A, double alpha, double lambda_min) {
    return 1.0 - 0.5 * alpha * (lambda_min / A.frob_sq()) * tail_factor(A);
}

double grmk_general_factor_from_run(const RowMatrix& A, const SolveReport& report,
                                    double lambda_min) {
    if (report.chosen_sets.size() < 2 || report.chosen_rows.size() < 2) {
        // single-step run: only the first-step estimate exists
        if (report.chosen_sets.empty()) return nan_value();
        return grmk_first_factor(A, report.chosen_sets.front(), lambda_min);
    }
    const double alpha = grmk_alpha(A, report.chosen_sets, report.chosen_rows);
    return grmk_general_factor(A, alpha, lambda_min);
}

double gmbk_first_factor(const RowMatrix& A, const IndexSet& first_set,
                         double lambda_min) {
    if (first_set.empty()) throw std::invalid_argument("gmbk_first_factor: empty set");
    const double lmax = lambda_max_block(A, first_set.indices);
    return 1.0 - static_cast<double>(first_set.size()) * (A.min_row_sq_norm() / lmax) *
                     (lambda_min / A.frob_sq());
}

double gmbk_step_factor(const RowMatrix& A, const IndexSet& set_k,
                        const IndexSet& set_prev, double lambda_min) {
    if (set_k.empty() || set_prev.empty()) {
        throw std::invalid_argument("gmbk_step_factor: empty set");
    }
    const double min_outside = A.min_row_sq_norm_outside(set_prev.indices);
    const double prev_frob = A.sum_row_sq_norm_over(set_prev.indices);
    const double denom = A.frob_sq() - prev_frob;
    if (!std::isfinite(min_outside) || !(denom > 0.0)) return nan_value();
    const double lmax = lambda_max_block(A, set_k.indices);
    const double tail = A.frob_sq() / denom + 1.0;
    return 1.0 - 0.5 * static_cast<double>(set_k.size()) * (min_outside / lmax) *
                     (lambda_min / A.frob_sq()) * tail;
}

std::vector<double> gmbk_step_factors(const RowMatrix& A,
                                      std::span<const IndexSet> sets,
                                      double lambda_min) {
    std::vector<double> factors;
    for (std::size_t k = 1; k < sets.size(); ++k) {
        factors.push_back(gmbk_step_factor(A, sets[k], sets[k - 1], lambda_min));
    }
    return factors;
}

BoundReport compute_bound_report(const RowMatrix& A, const SolveReport& grmk_run,
                                 const SolveReport* gmbk_run,
                                 const std::vector<std::vector<double>>* trial_err_sq) {
    if (grmk_run.chosen_sets.empty()) {
        throw std::invalid_argument("compute_bound_report: run recorded no index sets");
    }
    const double lambda = lambda_min_pos(A);

    BoundReport report;
    report.grmk_first_step =
        grmk_first_factor(A, grmk_run.chosen_sets.front(), lambda);
    report.grmk_general = grmk_general_factor_from_run(A, grmk_run, lambda);
    report.grk_factor = grk_factor(A, lambda);

    report.gmbk_first = nan_value();
    report.gmbk_general = nan_value();
    if (gmbk_run != nullptr && !gmbk_run->chosen_sets.empty()) {
        report.gmbk_first =
            gmbk_first_factor(A, gmbk_run->chosen_sets.front(), lambda);
        report.gmbk_step_factors =
            gmbk_step_factors(A, gmbk_run->chosen_sets, lambda);
        double worst = -std::numeric_limits<double>::infinity();
        for (double f : report.gmbk_step_factors) {
            if (bound_vacuous(f)) {
                ++report.gmbk_vacuous_steps;
            } else {
                worst = std::max(worst, f);
            }
        }
        if (std::isfinite(worst)) report.gmbk_general = worst;
    }

    if (trial_err_sq != nullptr && !trial_err_sq->empty()) {
        std::size_t upto = 0;
        for (const auto& hist : *trial_err_sq) {
            upto = std::max(upto, hist.size() > 0 ? hist.size() - 1 : 0);
        }
        const auto curve = mean_sq_error_curve(*trial_err_sq, upto);
        if (curve.front() > 0.0) {
            for (std::size_t k = 1; k <= upto; ++k) {
                report.rho_history.push_back(
                    empirical_rate(curve, static_cast<long>(k)));
            }
        }
    }
    return report;
}

double empirical_rate(std::span<const double> mean_err_sq, long k) {
    if (k < 1) throw std::invalid_argument("empirical_rate: k must be >= 1");
    if (static_cast<std::size_t>(k) >= mean_err_sq.size()) {
        throw std::invalid_argument("empirical_rate: k beyond history");
    }
    const double initial = mean_err_sq[0];
    if (!(initial > 0.0)) throw std::invalid_argument("empirical_rate: zero initial error");
    const double ratio = mean_err_sq[static_cast<std::size_t>(k)] / initial;
    if (ratio <= 0.0) return 0.0;
    return std::pow(ratio, 1.0 / static_cast<double>(k));
}

std::vector<double> mean_sq_error_curve(
    const std::vector<std::vector<double>>& trial_histories, std::size_t upto) {
    if (trial_histories.empty()) {
        throw std::invalid_argument("mean_sq_error_curve: no trials");
    }
    std::vector<double> mean(upto + 1, 0.0);
    for (const auto& hist : trial_histories) {
        if (hist.empty()) throw std::invalid_argument("mean_sq_error_curve: empty trial");
        for (std::size_t k = 0; k <= upto; ++k) {
            mean[k] += k < hist.size() ? hist[k] : hist.back();
        }
    }
    const double inv = 1.0 / static_cast<double>(trial_histories.size());
    for (double& v : mean) v *= inv;
    return mean;
}

std::vector<double> err_sq_history(const SolveReport& report) {
    if (!report.has_oracle()) {
        throw std::invalid_argument("err_sq_history: run has no reference solution");
    }
    std::vector<double> hist;
    hist.reserve(report.history.size());
    const double scale = report.x_star_sq_norm > 0.0 ? report.x_star_sq_norm : 1.0;
    for (const HistoryRecord& rec : report.history) hist.push_back(rec.res * scale);
    return hist;
}

Metrics metrics(std::span<const double> x, std::span<const double> x_star,
                std::span<const double> r, std::span<const double> r0) {
    const double xs_sq = sq_norm(x_star);
    if (xs_sq == 0.0) throw std::domain_error("degenerate reference solution");
    const double r0_sq = sq_norm(r0);
    if (r0_sq == 0.0) throw std::invalid_argument("metrics: zero initial residual");
    Metrics m;
    m.res = sq_dist(x, x_star) / xs_sq;
    m.rr = sq_norm(r) / r0_sq;
    return m;
}

} // namespace kaczmarz
