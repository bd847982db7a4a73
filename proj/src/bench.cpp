#include "kaczmarz/bench.hpp"

#include "kaczmarz/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace kaczmarz {

namespace {

constexpr double kDeskScaleEntries = 8.0e6;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t h = values.size() / 2;
    if (values.size() % 2 == 1) return values[h];
    return 0.5 * (values[h - 1] + values[h]);
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t method_idx, int trial) {
    return Rng::mix(base, (static_cast<std::uint64_t>(method_idx) << 32) ^
                              static_cast<std::uint64_t>(trial));
}

/// Runs trials for each method against a shared immutable problem, using a
/// small worker pool when threads > 1. Per-trial seeds are derived from the
/// (method, trial) pair, so results do not depend on scheduling.
std::vector<std::vector<SolveReport>> run_all(const Problem& prob,
                                              const std::vector<SelectionRule>& methods,
                                              const StopCriteria& stop, int trials,
                                              std::uint64_t seed, int threads,
                                              const Vector* oracle) {
    std::vector<std::vector<SolveReport>> reports(methods.size());
    for (auto& r : reports) r.resize(static_cast<std::size_t>(trials));

    const Vector x0(static_cast<std::size_t>(prob.A.cols()), 0.0);
    const std::size_t total = methods.size() * static_cast<std::size_t>(trials);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t mi = task / static_cast<std::size_t>(trials);
            const int trial = static_cast<int>(task % static_cast<std::size_t>(trials));
            Rng rng(trial_seed(seed, mi, trial));
            reports[mi][static_cast<std::size_t>(trial)] =
                solve(methods[mi], prob.A, prob.b, x0, stop, rng, oracle);
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return reports;
}

void write_curves(const std::string& path, const std::vector<SelectionRule>& methods,
                  const std::vector<std::vector<SolveReport>>& reports) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "method,trial,k,res,rr,elapsed_ns,set_size\n";
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const std::string name = methods[mi].name();
        for (std::size_t trial = 0; trial < reports[mi].size(); ++trial) {
            for (const HistoryRecord& rec : reports[mi][trial].history) {
                out << name << ',' << trial << ',' << rec.k << ',' << fmt(rec.res) << ','
                    << fmt(rec.rr) << ',' << rec.elapsed_ns << ',' << rec.set_size << '\n';
            }
        }
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

double summary_bound_factor(const SelectionRule& rule, const RowMatrix& A,
                            const SolveReport& first_trial, double lambda_min) {
    switch (rule.method()) {
        case Method::GRK:
            return grk_factor(A, lambda_min);
        case Method::GRMK:
            return grmk_general_factor_from_run(A, first_trial, lambda_min);
        case Method::GMBK: {
            // worst realized non-vacuous per-step estimate of the run
            if (first_trial.chosen_sets.size() < 2) {
                if (first_trial.chosen_sets.empty()) break;
                return gmbk_first_factor(A, first_trial.chosen_sets.front(), lambda_min);
            }
            const auto factors =
                gmbk_step_factors(A, first_trial.chosen_sets, lambda_min);
            double worst = -std::numeric_limits<double>::infinity();
            for (double f : factors) {
                if (!bound_vacuous(f)) worst = std::max(worst, f);
            }
            if (std::isfinite(worst)) return worst;
            break;
        }
        default:
            break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

int run(const RunConfig& config) {
    try {
        if (config.methods.empty()) throw std::invalid_argument("run: no methods configured");
        if (config.trials < 1) throw std::invalid_argument("run: trials must be >= 1");

        const Problem prob = generate(config.problem, config.seed);

        // The min-norm solution is the right RES reference even for
        // rank-deficient inputs; the generated x_star only matches it for
        // full-column-rank systems.
        Vector oracle;
        const Vector* oracle_ptr = nullptr;
        const double entries =
            static_cast<double>(prob.A.rows()) * static_cast<double>(prob.A.cols());
        if (entries <= kDeskScaleEntries) {
            oracle = min_norm_solution(prob.A, prob.b);
            oracle_ptr = &oracle;
        }

        const auto reports = run_all(prob, config.methods, config.stop, config.trials,
                                     config.seed, config.threads, oracle_ptr);

        bool need_lambda = false;
        for (const SelectionRule& rule : config.methods) {
            const Method m = rule.method();
            if (m == Method::GRK || m == Method::GRMK || m == Method::GMBK) {
                need_lambda = true;
            }
        }
        double lambda_min = std::numeric_limits<double>::quiet_NaN();
        if (need_lambda && !config.summary_out.empty() && entries <= kDeskScaleEntries) {
            lambda_min = lambda_min_pos(prob.A);
        }

        if (!config.curves_out.empty()) {
            write_curves(config.curves_out, config.methods, reports);
        }
        if (!config.summary_out.empty()) {
            std::ofstream out(config.summary_out);
            if (!out) throw std::runtime_error(config.summary_out + ": cannot open for writing");
            out << "# trials=" << config.trials << " seed=" << config.seed << "\n";
            out << "method,median_iters,median_time_s,rho_at_final,bound_factor\n";
            for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
                std::vector<double> iters;
                std::vector<double> times;
                std::vector<std::vector<double>> err_histories;
                bool have_errors = true;
                for (const SolveReport& rep : reports[mi]) {
                    iters.push_back(static_cast<double>(rep.iterations));
                    times.push_back(static_cast<double>(rep.history.back().elapsed_ns) * 1e-9);
                    if (rep.has_oracle()) {
                        err_histories.push_back(err_sq_history(rep));
                    } else {
                        have_errors = false;
                    }
                }
                const double med_iters = median(iters);
                const double med_time = median(times);

                double rho = std::numeric_limits<double>::quiet_NaN();
                const long k_final = static_cast<long>(med_iters);
                if (have_errors && k_final >= 1) {
                    const auto curve = mean_sq_error_curve(err_histories,
                                                           static_cast<std::size_t>(k_final));
                    if (curve.front() > 0.0) rho = empirical_rate(curve, k_final);
                }

                double bound = std::numeric_limits<double>::quiet_NaN();
                if (std::isfinite(lambda_min)) {
                    bound = summary_bound_factor(config.methods[mi], prob.A,
                                                 reports[mi].front(), lambda_min);
                }

                out << config.methods[mi].name() << ',' << fmt(med_iters) << ','
                    << fmt(med_time) << ',' << fmt(rho) << ',' << fmt(bound) << '\n';
            }
            if (!out) throw std::runtime_error(config.summary_out + ": write failed");
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "kaczbench: " << e.what() << "\n";
        return 1;
    }
}

int compare_rates(const RunConfig& config) {
    try {
        if (config.rates_out.empty()) {
            throw std::invalid_argument("compare_rates: no rates output path configured");
        }
        const Problem prob = generate(config.problem, config.seed);
        const Vector oracle = min_norm_solution(prob.A, prob.b);
        const double lambda_min = lambda_min_pos(prob.A);

        const std::vector<SelectionRule> methods = {SelectionRule::grk(),
                                                    SelectionRule::grmk()};
        const auto reports = run_all(prob, methods, config.stop, config.trials,
                                     config.seed, config.threads, &oracle);

        std::size_t max_k = 0;
        std::vector<std::vector<double>> grk_err;
        std::vector<std::vector<double>> grmk_err;
        for (const SolveReport& rep : reports[0]) {
            grk_err.push_back(err_sq_history(rep));
            max_k = std::max(max_k, static_cast<std::size_t>(rep.iterations));
        }
        for (const SolveReport& rep : reports[1]) {
            grmk_err.push_back(err_sq_history(rep));
            max_k = std::max(max_k, static_cast<std::size_t>(rep.iterations));
        }
        const auto grk_curve = mean_sq_error_curve(grk_err, max_k);
        const auto grmk_curve = mean_sq_error_curve(grmk_err, max_k);

        const double grk_bound = grk_factor(prob.A, lambda_min);
        const SolveReport& grmk_run = reports[1].front(); // bound from one realized run

        std::ofstream out(config.rates_out);
        if (!out) throw std::runtime_error(config.rates_out + ": cannot open for writing");
        out << "k,grk_bound,grmk_bound,grk_rho,grmk_rho\n";
        for (std::size_t k = 1; k <= max_k; ++k) {
            double grmk_bound = std::numeric_limits<double>::quiet_NaN();
            if (k == 1 && !grmk_run.chosen_sets.empty()) {
                grmk_bound = grmk_first_factor(prob.A, grmk_run.chosen_sets.front(),
                                               lambda_min);
            } else if (k >= 2 && grmk_run.chosen_sets.size() >= k &&
                       grmk_run.chosen_rows.size() >= k - 1) {
                grmk_bound = grmk_step_factor(prob.A, grmk_run.chosen_sets[k - 1],
                                              grmk_run.chosen_rows[k - 2], lambda_min);
            }
            const double grk_rho =
                grk_curve.front() > 0.0 ? empirical_rate(grk_curve, static_cast<long>(k))
                                        : 0.0;
            const double grmk_rho =
                grmk_curve.front() > 0.0 ? empirical_rate(grmk_curve, static_cast<long>(k))
                                         : 0.0;
            out << k << ',' << fmt(grk_bound) << ',' << fmt(grmk_bound) << ','
                << fmt(grk_rho) << ',' << fmt(grmk_rho) << '\n';
        }
        if (!out) throw std::runtime_error(config.rates_out + ": write failed");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "kaczbench: " << e.what() << "\n";
        return 1;
    }
}

} // namespace kaczmarz
