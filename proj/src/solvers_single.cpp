#include "kaczmarz/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kaczmarz {

namespace {

// Incremental residuals are refreshed from b - A x at this cadence to
// bound floating-point drift without paying O(mn) per step.
constexpr long kResidualRefreshInterval = 1000;

// Systems beyond this size skip the automatic min-norm oracle.
constexpr double kDeskScaleEntries = 8.0e6;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

int sample_rk(const Vector& cum_norms, Rng& rng) {
    const double target = rng.next_uniform() * cum_norms.back();
    auto it = std::upper_bound(cum_norms.begin(), cum_norms.end(), target);
    if (it == cum_norms.end()) --it;
    return static_cast<int>(it - cum_norms.begin());
}

} // namespace

double SolveReport::err_sq_at(long k) const {
    const auto idx = static_cast<std::size_t>(k);
    if (idx >= history.size() || x_star.empty()) return nan_value();
    return history[idx].res * x_star_sq_norm;
}

IterState IterState::start(const RowMatrix& A, const Vector& b, Vector x0) {
    if (b.size() != static_cast<std::size_t>(A.rows())) {
        throw std::invalid_argument("IterState::start: rhs length != m");
    }
    if (x0.size() != static_cast<std::size_t>(A.cols())) {
        throw std::invalid_argument("IterState::start: x0 length != n");
    }
    IterState st;
    st.x = std::move(x0);
    st.r = b;
    bool x0_zero = true;
    for (double v : st.x) {
        if (v != 0.0) {
            x0_zero = false;
            break;
        }
    }
    if (!x0_zero) {
        Vector ax = A.apply(st.x);
        for (std::size_t i = 0; i < st.r.size(); ++i) st.r[i] -= ax[i];
    }
    return st;
}

void IterState::recompute_residual(const RowMatrix& A, const Vector& b) {
    Vector ax = A.apply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - ax[i];
}

double IterState::residual_drift(const RowMatrix& A, const Vector& b) const {
    Vector ax = A.apply(x);
    double drift = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        drift = std::max(drift, std::abs(r[i] - (b[i] - ax[i])));
    }
    return drift;
}

void kaczmarz_step(IterState& state, int i, const RowMatrix& A, const Vector& b) {
    (void)b;
    const double beta = state.r[static_cast<std::size_t>(i)] / A.row_sq_norm(i);
    if (beta != 0.0) {
        A.add_scaled_row(state.x, beta, i);
        A.sub_scaled_col_gram(state.r, beta, i);
    }
    state.k += 1;
    state.last_row = i;
    state.last_set.reset();
}

SolveReport solve(const SelectionRule& rule, const RowMatrix& A, const Vector& b,
                  const Vector& x0, const StopCriteria& stop, Rng& rng,
                  const Vector* x_star) {
    using Clock = std::chrono::steady_clock;

    if (stop.tol <= 0.0) throw std::invalid_argument("solve: tol must be positive");
    const long max_iters =
        stop.max_iters > 0 ? stop.max_iters : 200L * static_cast<long>(A.rows());

    SolveReport rep;
    rep.metric_used = stop.metric;

    // Oracle policy: RES needs x*, computed once up front at desk scale.
    if (x_star != nullptr) {
        rep.x_star = *x_star;
    } else if (stop.metric == Metric::RES) {
        const double entries = static_cast<double>(A.rows()) * static_cast<double>(A.cols());
        if (entries <= kDeskScaleEntries) {
            rep.x_star = min_norm_solution(A, b);
        } else {
            rep.metric_used = Metric::RR;
        }
    }
    rep.x_star_sq_norm = rep.x_star.empty() ? 0.0 : sq_norm(rep.x_star);
    if (rep.metric_used == Metric::RES && rep.x_star_sq_norm == 0.0) {
        bool b_zero = true;
        for (double v : b) {
            if (v != 0.0) {
                b_zero = false;
                break;
            }
        }
        if (!b_zero) throw std::domain_error("degenerate reference solution");
    }

    IterState st = IterState::start(A, b, x0);
    rep.r0_sq_norm = sq_norm(st.r);

    const bool record_sets = rule.uses_index_set();
    Vector rk_cum;
    if (rule.method() == Method::RK) {
        rk_cum.resize(static_cast<std::size_t>(A.rows()));
        double acc = 0.0;
        for (int i = 0; i < A.rows(); ++i) {
            acc += A.row_sq_norm(i);
            rk_cum[static_cast<std::size_t>(i)] = acc;
        }
    }

    IndexSet set;
    const WeightScheme avg_weights = WeightScheme::norm_proportional();

    const auto t0 = Clock::now();
    auto record = [&](int set_size) {
        HistoryRecord rec;
        rec.k = st.k;
        rec.rr = rep.r0_sq_norm > 0.0 ? sq_norm(st.r) / rep.r0_sq_norm : 0.0;
        rec.res = rep.x_star.empty()
                      ? nan_value()
                      : sq_dist(st.x, rep.x_star) /
                            (rep.x_star_sq_norm > 0.0 ? rep.x_star_sq_norm : 1.0);
        rec.elapsed_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
        rec.set_size = set_size;
        rep.history.push_back(rec);
    };

    record(0);

    SolveStatus status = SolveStatus::MaxIters;
    while (true) {
        const HistoryRecord& cur = rep.history.back();
        const double metric_value = rep.metric_used == Metric::RES ? cur.res : cur.rr;
        if (metric_value < stop.tol) {
            status = SolveStatus::Converged;
            break;
        }
        if (st.k >= max_iters) {
            status = SolveStatus::MaxIters;
            break;
        }

        int set_size = 1;
        switch (rule.method()) {
            case Method::RK: {
                const int i = sample_rk(rk_cum, rng);
                rep.chosen_rows.push_back(i);
                kaczmarz_step(st, i, A, b);
                break;
            }
            case Method::MaxResidual: {
                const int i = argmax_residual(st.r);
                rep.chosen_rows.push_back(i);
                kaczmarz_step(st, i, A, b);
                break;
            }
            case Method::MaxDistance: {
                const int i = argmax_distance(st.r, A);
                rep.chosen_rows.push_back(i);
                kaczmarz_step(st, i, A, b);
                break;
            }
            case Method::GRK: {
                const auto eps = grk_threshold(st.r, A);
                if (!eps) {
                    status = SolveStatus::Converged;
                    break;
                }
                grk_set_into(st.r, A, *eps, set);
                const int i = sample_grk(set, st.r, rng);
                set_size = set.size();
                rep.chosen_rows.push_back(i);
                if (record_sets) rep.chosen_sets.push_back(set);
                kaczmarz_step(st, i, A, b);
                break;
            }
            case Method::GRMK:
            case Method::GRMKTheta: {
                const double theta = rule.method() == Method::GRMK ? 0.5 : rule.theta();
                const auto delta = grmk_threshold(st.r, A, theta);
                if (!delta) {
                    status = SolveStatus::Converged;
                    break;
                }
                grmk_set_into(st.r, A, *delta, set);
                const int i = sample_grmk(set, st.r, A, rng);
                set_size = set.size();
                rep.chosen_rows.push_back(i);
                if (record_sets) rep.chosen_sets.push_back(set);
                kaczmarz_step(st, i, A, b);
                break;
            }
            case Method::GK: {
                const auto delta = grmk_threshold(st.r, A, 1.0);
                if (!delta) {
                    status = SolveStatus::Converged;
                    break;
                }
                grmk_set_into(st.r, A, *delta, set);
                const int i = argmax_distance_in(set, st.r, A);
                set_size = set.size();
                rep.chosen_rows.push_back(i);
                if (record_sets) rep.chosen_sets.push_back(set);
                kaczmarz_step(st, i, A, b);
                break;
            }
            case Method::GBK:
            case Method::GDBK: {
                const auto eps = rule.method() == Method::GBK
                                     ? gbk_threshold(st.r, A, rule.eta())
                                     : grk_threshold(st.r, A);
                if (!eps) {
                    status = SolveStatus::Converged;
                    break;
                }
                grk_set_into(st.r, A, *eps, set);
                set_size = set.size();
                rep.chosen_rows.push_back(-1);
                if (record_sets) rep.chosen_sets.push_back(set);
                block_project_step(st, A, b, set);
                break;
            }
            case Method::GMBK:
            case Method::GMBKXi: {
                const auto delta = rule.method() == Method::GMBK
                                       ? grmk_threshold(st.r, A, 0.5)
                                       : gmbk_xi_threshold(st.r, rule.xi());
                if (!delta) {
                    status = SolveStatus::Converged;
                    break;
                }
                grmk_set_into(st.r, A, *delta, set);
                set_size = set.size();
                rep.chosen_rows.push_back(-1);
                if (record_sets) rep.chosen_sets.push_back(set);
                block_project_step(st, A, b, set);
                break;
            }
            case Method::AveragedBlock: {
                const auto delta = grmk_threshold(st.r, A, 0.5);
                if (!delta) {
                    status = SolveStatus::Converged;
                    break;
                }
                grmk_set_into(st.r, A, *delta, set);
                set_size = set.size();
                rep.chosen_rows.push_back(-1);
                if (record_sets) rep.chosen_sets.push_back(set);
                averaged_block_step(st, A, b, set, avg_weights);
                break;
            }
        }
        if (status == SolveStatus::Converged) break; // all-zero residual mid-loop

        if (st.k % kResidualRefreshInterval == 0) st.recompute_residual(A, b);
        record(set_size);
    }

    rep.status = status;
    rep.iterations = st.k;
    rep.final_x = std::move(st.x);
    return rep;
}

} // namespace kaczmarz
