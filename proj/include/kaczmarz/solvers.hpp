#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kaczmarz/linalg.hpp"
#include "kaczmarz/selection.hpp"

namespace kaczmarz {

enum class Metric { RES, RR };

/// Stopping rule: iterate until metric < tol or k = max_iters.
/// max_iters = 0 means the default cap of 200 * m.
struct StopCriteria {
    double tol = 1e-10;
    Metric metric = Metric::RR;
    long max_iters = 0;
};

enum class SolveStatus { Converged, MaxIters };

struct HistoryRecord {
    long k = 0;
    double res = 0.0; // ||x_k - x*||^2 / ||x*||^2, NaN when x* unknown
    double rr = 0.0;  // ||b - A x_k||^2 / ||b - A x_0||^2
    std::int64_t elapsed_ns = 0;
    int set_size = 0; // 0 for the k = 0 record
};

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIters;
    long iterations = 0;
    Metric metric_used = Metric::RR;
    Vector final_x;
    std::vector<HistoryRecord> history; // length iterations + 1
    std::vector<int> chosen_rows;       // i_k per step, -1 for block steps
    std::vector<IndexSet> chosen_sets;  // I_k / U_k per step for set methods
    Vector x_star;                      // empty when no oracle was available
    double x_star_sq_norm = 0.0;
    double r0_sq_norm = 0.0;

    bool converged() const { return status == SolveStatus::Converged; }
    bool has_oracle() const { return !x_star.empty(); }
    /// ||x_k - x*||^2 from the recorded history.
    double err_sq_at(long k) const;
};

/// Current iterate, incrementally maintained residual r = b - A x, and the
/// index (or set) chosen at step k-1. Single-owner, not shared.
struct IterState {
    Vector x;
    Vector r;
    long k = 0;
    std::optional<int> last_row;
    std::optional<IndexSet> last_set;

    static IterState start(const RowMatrix& A, const Vector& b, Vector x0);
    void recompute_residual(const RowMatrix& A, const Vector& b);
    /// inf-norm gap between the maintained r and b - A x.
    double residual_drift(const RowMatrix& A, const Vector& b) const;
};

/// Weights for the averaged block update; positive and summing to 1 over
/// the working set.
class WeightScheme {
public:
    enum class Kind { Uniform, NormProportional, Custom };

    static WeightScheme uniform() { return WeightScheme(Kind::Uniform); }
    static WeightScheme norm_proportional() { return WeightScheme(Kind::NormProportional); }
    static WeightScheme custom(Vector weights);

    Kind kind() const { return kind_; }
    /// Concrete weights over idx; validates positivity and unit sum.
    Vector resolve(const RowMatrix& A, const IndexSet& idx) const;

private:
    explicit WeightScheme(Kind k) : kind_(k) {}
    Kind kind_;
    Vector custom_;
};

/// One orthogonal projection onto the hyperplane of row i:
/// x += (r^(i) / ||A^(i)||^2) (A^(i))^T, with the residual updated in the
/// same sparse-aware pass.
void kaczmarz_step(IterState& state, int i, const RowMatrix& A, const Vector& b);

/// Exact projection onto the solution space of the rows in idx via the
/// block pseudoinverse; |idx| = 1 short-circuits to kaczmarz_step.
void block_project_step(IterState& state, const RowMatrix& A, const Vector& b,
                        IndexSet idx);

/// Builds the Motzkin set (theta = 1/2) and projects onto it.
void gmbk_step(IterState& state, const RowMatrix& A, const Vector& b);
void gmbk_xi_step(IterState& state, const RowMatrix& A, const Vector& b, double xi);

/// Builds the distance set with threshold eta * max distance and projects.
void gbk_step(IterState& state, const RowMatrix& A, const Vector& b, double eta);

/// The eta that makes GBK's threshold coincide with GRK's epsilon_k.
double gdbk_eta(const IterState& state, const RowMatrix& A);
void gdbk_step(IterState& state, const RowMatrix& A, const Vector& b);

/// x_{k+1} = x_k + sum_{i in idx} w_i (r^(i) / ||A^(i)||^2) (A^(i))^T.
void averaged_block_step(IterState& state, const RowMatrix& A, const Vector& b,
                         const IndexSet& idx, const WeightScheme& weights);

/// Runs the per-method pipeline (threshold -> set -> sample/argmax -> step)
/// until the stopping metric drops below tol or the iteration cap is hit.
/// When the metric is RES and no oracle is given, the min-norm solution is
/// computed up front at desk scale (falling back to RR for huge systems).
SolveReport solve(const SelectionRule& rule, const RowMatrix& A, const Vector& b,
                  const Vector& x0, const StopCriteria& stop, Rng& rng,
                  const Vector* x_star = nullptr);

} // namespace kaczmarz
