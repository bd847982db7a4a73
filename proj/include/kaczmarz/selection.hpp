#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "kaczmarz/index_set.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/row_matrix.hpp"

namespace kaczmarz {

enum class Method {
    RK,            // randomized Kaczmarz, rows sampled by squared norm
    MaxResidual,   // Motzkin rule: argmax |r^(i)|^2
    MaxDistance,   // argmax |r^(i)|^2 / ||A^(i)||^2
    GRK,           // greedy randomized Kaczmarz
    GRMK,          // greedy randomized Motzkin-Kaczmarz (theta = 1/2)
    GRMKTheta,     // relaxed GRMK with caller-chosen theta
    GK,            // greedy Kaczmarz: theta = 1 set, deterministic pick
    GBK,           // greedy block Kaczmarz with eta threshold
    GDBK,          // GBK with the eta that reproduces GRK's threshold
    GMBK,          // greedy Motzkin block Kaczmarz
    GMBKXi,        // GMBK with xi * max-residual threshold
    AveragedBlock, // weighted average of row projections over the GMBK set
};

/// A solver method tag plus its relaxation parameter, validated at
/// construction: theta in [0,1], eta in (0,1], xi in (0,1].
class SelectionRule {
public:
    static SelectionRule rk() { return SelectionRule(Method::RK); }
    static SelectionRule max_residual() { return SelectionRule(Method::MaxResidual); }
    static SelectionRule max_distance() { return SelectionRule(Method::MaxDistance); }
    static SelectionRule grk() { return SelectionRule(Method::GRK); }
    static SelectionRule grmk() { return SelectionRule(Method::GRMK); }
    static SelectionRule grmk_theta(double theta);
    static SelectionRule gk() { return SelectionRule(Method::GK); }
    static SelectionRule gbk(double eta);
    static SelectionRule gdbk() { return SelectionRule(Method::GDBK); }
    static SelectionRule gmbk() { return SelectionRule(Method::GMBK); }
    static SelectionRule gmbk_xi(double xi);
    static SelectionRule averaged_block() { return SelectionRule(Method::AveragedBlock); }

    /// Parses a CLI token: rk, mr, md, grk, grmk, grmk-theta=<v>, gk,
    /// gbk-eta=<v>, gdbk, gmbk, gmbk-xi=<v>, avg-block.
    static SelectionRule parse(std::string_view token);

    Method method() const { return method_; }
    double theta() const { return theta_; }
    double eta() const { return eta_; }
    double xi() const { return xi_; }

    bool is_block() const;
    bool is_stochastic() const;
    /// True for methods that build a greedy index set each iteration.
    bool uses_index_set() const;
    std::string name() const;

private:
    explicit SelectionRule(Method m) : method_(m) {}

    Method method_;
    double theta_ = 0.5;
    double eta_ = 1.0;
    double xi_ = 1.0;
};

// Thresholds return nullopt on an all-zero residual: the iteration has
// converged and no index set exists.

/// delta_k = theta * max_i |r^(i)|^2
///         + (1-theta) * sum_i (||A^(i)||^2 / ||A||_F^2) |r^(i)|^2.
std::optional<double> grmk_threshold(std::span<const double> r, const RowMatrix& A,
                                     double theta = 0.5);

/// eps_k = 1/2 (max_i |r^(i)|^2 / ||A^(i)||^2 + ||r||^2 / ||A||_F^2).
std::optional<double> grk_threshold(std::span<const double> r, const RowMatrix& A);

/// eps_k = eta * max_i |r^(i)|^2 / ||A^(i)||^2.
std::optional<double> gbk_threshold(std::span<const double> r, const RowMatrix& A,
                                    double eta);

/// delta_k = xi * max_i |r^(i)|^2.
std::optional<double> gmbk_xi_threshold(std::span<const double> r, double xi);

/// I_k = { i : |r^(i)|^2 >= delta }, excluding rows with zero residual.
IndexSet grmk_set(std::span<const double> r, const RowMatrix& A, double delta);
void grmk_set_into(std::span<const double> r, const RowMatrix& A, double delta,
                   IndexSet& out);

/// U_k = { i : |r^(i)|^2 / ||A^(i)||^2 >= eps }, excluding zero residuals.
IndexSet grk_set(std::span<const double> r, const RowMatrix& A, double eps);
void grk_set_into(std::span<const double> r, const RowMatrix& A, double eps,
                  IndexSet& out);

/// Samples from idx with probability proportional to the distance
/// |r^(i)|^2 / ||A^(i)||^2.
int sample_grmk(const IndexSet& idx, std::span<const double> r, const RowMatrix& A,
                Rng& rng);

/// Samples from idx with probability proportional to |r^(i)|^2.
int sample_grk(const IndexSet& idx, std::span<const double> r, Rng& rng);

/// Ties broken by the smallest row index.
int argmax_residual(std::span<const double> r);
int argmax_distance(std::span<const double> r, const RowMatrix& A);
/// argmax of the distance restricted to idx (greedy Kaczmarz pick).
int argmax_distance_in(const IndexSet& idx, std::span<const double> r,
                       const RowMatrix& A);

} // namespace kaczmarz
