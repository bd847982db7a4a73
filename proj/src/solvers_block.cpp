#include "kaczmarz/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace kaczmarz {

WeightScheme WeightScheme::custom(Vector weights) {
    WeightScheme w(Kind::Custom);
    w.custom_ = std::move(weights);
    return w;
}

Vector WeightScheme::resolve(const RowMatrix& A, const IndexSet& idx) const {
    if (idx.empty()) throw std::invalid_argument("WeightScheme: empty index set");
    const auto count = static_cast<std::size_t>(idx.size());
    Vector w(count);
    switch (kind_) {
        case Kind::Uniform: {
            const double v = 1.0 / static_cast<double>(count);
            for (double& wi : w) wi = v;
            break;
        }
        case Kind::NormProportional: {
            double total = 0.0;
            for (int i : idx.indices) total += A.row_sq_norm(i);
            for (std::size_t j = 0; j < count; ++j) {
                w[j] = A.row_sq_norm(idx.indices[j]) / total;
            }
            break;
        }
        case Kind::Custom: {
            if (custom_.size() != count) {
                throw std::invalid_argument("WeightScheme: custom weight count != |idx|");
            }
            w = custom_;
            break;
        }
    }
    double sum = 0.0;
    for (double wi : w) {
        if (!(wi > 0.0)) throw std::invalid_argument("WeightScheme: weights must be positive");
        sum += wi;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("WeightScheme: weights must sum to 1");
    }
    return w;
}

void block_project_step(IterState& state, const RowMatrix& A, const Vector& b,
                        IndexSet idx) {
    if (idx.empty()) throw std::invalid_argument("block_project_step: empty index set");
    if (idx.size() == 1) {
        const int i = idx.indices.front();
        kaczmarz_step(state, i, A, b);
        state.last_set = std::move(idx);
        return;
    }

    // rhs = b_idx - A_idx x, read off the maintained residual
    Vector rhs(static_cast<std::size_t>(idx.size()));
    for (std::size_t j = 0; j < rhs.size(); ++j) {
        rhs[j] = state.r[static_cast<std::size_t>(idx.indices[j])];
    }
    const Vector z = block_ls_apply(A, idx, rhs);
    for (std::size_t j = 0; j < state.x.size(); ++j) state.x[j] += z[j];

    Vector az = A.apply(z);
    for (std::size_t i = 0; i < state.r.size(); ++i) state.r[i] -= az[i];

    state.k += 1;
    state.last_row.reset();
    state.last_set = std::move(idx);
}

void gmbk_step(IterState& state, const RowMatrix& A, const Vector& b) {
    const auto delta = grmk_threshold(state.r, A, 0.5);
    if (!delta) throw std::invalid_argument("gmbk_step: residual is zero");
    block_project_step(state, A, b, grmk_set(state.r, A, *delta));
}

void gmbk_xi_step(IterState& state, const RowMatrix& A, const Vector& b, double xi) {
    const auto delta = gmbk_xi_threshold(state.r, xi);
    if (!delta) throw std::invalid_argument("gmbk_xi_step: residual is zero");
    block_project_step(state, A, b, grmk_set(state.r, A, *delta));
}

void gbk_step(IterState& state, const RowMatrix& A, const Vector& b, double eta) {
    const auto eps = gbk_threshold(state.r, A, eta);
    if (!eps) throw std::invalid_argument("gbk_step: residual is zero");
    block_project_step(state, A, b, grk_set(state.r, A, *eps));
}

double gdbk_eta(const IterState& state, const RowMatrix& A) {
    double max_dist = 0.0;
    double r_sq = 0.0;
    for (std::size_t i = 0; i < state.r.size(); ++i) {
        const double sq = state.r[i] * state.r[i];
        r_sq += sq;
        max_dist = std::max(max_dist, sq / A.row_sq_norm(static_cast<int>(i)));
    }
    if (max_dist == 0.0) throw std::invalid_argument("gdbk_eta: residual is zero");
    return 0.5 + 0.5 * (r_sq / A.frob_sq()) / max_dist;
}

void gdbk_step(IterState& state, const RowMatrix& A, const Vector& b) {
    const auto eps = grk_threshold(state.r, A);
    if (!eps) throw std::invalid_argument("gdbk_step: residual is zero");
    block_project_step(state, A, b, grk_set(state.r, A, *eps));
}

void averaged_block_step(IterState& state, const RowMatrix& A, const Vector& b,
                         const IndexSet& idx, const WeightScheme& weights) {
    if (idx.empty()) throw std::invalid_argument("averaged_block_step: empty index set");
    const Vector w = weights.resolve(A, idx);

    // accumulate the weighted projection step in index order, then apply once
    Vector dx(state.x.size(), 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        const int i = idx.indices[j];
        const double coef =
            w[j] * state.r[static_cast<std::size_t>(i)] / A.row_sq_norm(i);
        A.add_scaled_row(dx, coef, i);
    }
    for (std::size_t j = 0; j < state.x.size(); ++j) state.x[j] += dx[j];

    Vector adx = A.apply(dx);
    for (std::size_t i = 0; i < state.r.size(); ++i) state.r[i] -= adx[i];

    (void)b;
    state.k += 1;
    state.last_row.reset();
    state.last_set = idx;
}

} // namespace kaczmarz
