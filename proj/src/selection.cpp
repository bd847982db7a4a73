#include "kaczmarz/selection.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace kaczmarz {

namespace {

// Membership compares with >=, relaxed by one part in 1e14 so the max
// element is never lost to rounding.
constexpr double kSetGuard = 1.0 - 1e-14;

double parse_param(std::string_view token, std::string_view prefix) {
    const std::string_view tail = token.substr(prefix.size());
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
        throw std::invalid_argument("SelectionRule::parse: bad parameter in '" +
                                    std::string(token) + "'");
    }
    return value;
}

} // namespace

SelectionRule SelectionRule::grmk_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("SelectionRule: theta must lie in [0, 1]");
    }
    SelectionRule rule(Method::GRMKTheta);
    rule.theta_ = theta;
    return rule;
}

SelectionRule SelectionRule::gbk(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("SelectionRule: eta must lie in (0, 1]");
    }
    SelectionRule rule(Method::GBK);
    rule.eta_ = eta;
    return rule;
}

SelectionRule SelectionRule::gmbk_xi(double xi) {
    if (!(xi > 0.0 && xi <= 1.0)) {
        throw std::invalid_argument("SelectionRule: xi must lie in (0, 1]");
    }
    SelectionRule rule(Method::GMBKXi);
    rule.xi_ = xi;
    return rule;
}

SelectionRule SelectionRule::parse(std::string_view token) {
    if (token == "rk") return rk();
    if (token == "mr") return max_residual();
    if (token == "md") return max_distance();
    if (token == "grk") return grk();
    if (token == "grmk") return grmk();
    if (token == "gk") return gk();
    if (token == "gdbk") return gdbk();
    if (token == "gmbk") return gmbk();
    if (token == "avg-block") return averaged_block();
    if (token.starts_with("grmk-theta=")) return grmk_theta(parse_param(token, "grmk-theta="));
    if (token.starts_with("gbk-eta=")) return gbk(parse_param(token, "gbk-eta="));
    if (token.starts_with("gmbk-xi=")) return gmbk_xi(parse_param(token, "gmbk-xi="));
    throw std::invalid_argument("unknown method token '" + std::string(token) + "'");
}

bool SelectionRule::is_block() const {
    switch (method_) {
        case Method::GBK:
        case Method::GDBK:
        case Method::GMBK:
        case Method::GMBKXi:
        case Method::AveragedBlock:
            return true;
        default:
            return false;
    }
}

bool SelectionRule::is_stochastic() const {
    switch (method_) {
        case Method::RK:
        case Method::GRK:
        case Method::GRMK:
        case Method::GRMKTheta:
            return true;
        default:
            return false;
    }
}

bool SelectionRule::uses_index_set() const {
    switch (method_) {
        case Method::RK:
        case Method::MaxResidual:
        case Method::MaxDistance:
            return false;
        default:
            return true;
    }
}

std::string SelectionRule::name() const {
    auto with_param = [](const char* prefix, double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%s%g", prefix, v);
        return std::string(buf);
    };
    switch (method_) {
        case Method::RK: return "rk";
        case Method::MaxResidual: return "mr";
        case Method::MaxDistance: return "md";
        case Method::GRK: return "grk";
        case Method::GRMK: return "grmk";
        case Method::GRMKTheta: return with_param("grmk-theta=", theta_);
        case Method::GK: return "gk";
        case Method::GBK: return with_param("gbk-eta=", eta_);
        case Method::GDBK: return "gdbk";
        case Method::GMBK: return "gmbk";
        case Method::GMBKXi: return with_param("gmbk-xi=", xi_);
        case Method::AveragedBlock: return "avg-block";
    }
    return "?";
}

std::optional<double> grmk_threshold(std::span<const double> r, const RowMatrix& A,
                                     double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("grmk_threshold: theta must lie in [0, 1]");
    }
    const double inv_frob = 1.0 / A.frob_sq();
    double max_sq = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double sq = r[i] * r[i];
        if (sq > max_sq) max_sq = sq;
        weighted += A.row_sq_norm(static_cast<int>(i)) * sq;
    }
    if (max_sq == 0.0) return std::nullopt; // converged
    return theta * max_sq + (1.0 - theta) * weighted * inv_frob;
}

std::optional<double> grk_threshold(std::span<const double> r, const RowMatrix& A) {
    double max_dist = 0.0;
    double r_sq = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double sq = r[i] * r[i];
        r_sq += sq;
        const double dist = sq / A.row_sq_norm(static_cast<int>(i));
        if (dist > max_dist) max_dist = dist;
    }
    if (r_sq == 0.0) return std::nullopt;
    return 0.5 * (max_dist + r_sq / A.frob_sq());
}

std::optional<double> gbk_threshold(std::span<const double> r, const RowMatrix& A,
                                    double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("gbk_threshold: eta must lie in (0, 1]");
    }
    double max_dist = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double dist = r[i] * r[i] / A.row_sq_norm(static_cast<int>(i));
        if (dist > max_dist) max_dist = dist;
    }
    if (max_dist == 0.0) return std::nullopt;
    return eta * max_dist;
}

std::optional<double> gmbk_xi_threshold(std::span<const double> r, double xi) {
    if (!(xi > 0.0 && xi <= 1.0)) {
        throw std::invalid_argument("gmbk_xi_threshold: xi must lie in (0, 1]");
    }
    double max_sq = 0.0;
    for (double ri : r) max_sq = std::max(max_sq, ri * ri);
    if (max_sq == 0.0) return std::nullopt;
    return xi * max_sq;
}

void grmk_set_into(std::span<const double> r, const RowMatrix& A, double delta,
                   IndexSet& out) {
    (void)A;
    out.indices.clear();
    out.threshold = delta;
    const double bar = delta * kSetGuard;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double sq = r[i] * r[i];
        if (sq > 0.0 && sq >= bar) out.indices.push_back(static_cast<int>(i));
    }
}

IndexSet grmk_set(std::span<const double> r, const RowMatrix& A, double delta) {
    IndexSet out;
    grmk_set_into(r, A, delta, out);
    return out;
}

void grk_set_into(std::span<const double> r, const RowMatrix& A, double eps,
                  IndexSet& out) {
    out.indices.clear();
    out.threshold = eps;
    const double bar = eps * kSetGuard;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double sq = r[i] * r[i];
        if (sq > 0.0 && sq / A.row_sq_norm(static_cast<int>(i)) >= bar) {
            out.indices.push_back(static_cast<int>(i));
        }
    }
}

IndexSet grk_set(std::span<const double> r, const RowMatrix& A, double eps) {
    IndexSet out;
    grk_set_into(r, A, eps, out);
    return out;
}

int sample_grmk(const IndexSet& idx, std::span<const double> r, const RowMatrix& A,
                Rng& rng) {
    if (idx.empty()) throw std::invalid_argument("sample_grmk: empty index set");
    double total = 0.0;
    for (int i : idx.indices) {
        total += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)] /
                 A.row_sq_norm(i);
    }
    const double target = rng.next_uniform() * total;
    double acc = 0.0;
    for (int i : idx.indices) {
        acc += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)] /
               A.row_sq_norm(i);
        if (acc >= target) return i;
    }
    return idx.indices.back();
}

int sample_grk(const IndexSet& idx, std::span<const double> r, Rng& rng) {
    if (idx.empty()) throw std::invalid_argument("sample_grk: empty index set");
    double total = 0.0;
    for (int i : idx.indices) {
        total += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
    }
    const double target = rng.next_uniform() * total;
    double acc = 0.0;
    for (int i : idx.indices) {
        acc += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
        if (acc >= target) return i;
    }
    return idx.indices.back();
}

int argmax_residual(std::span<const double> r) {
    int best = 0;
    double best_sq = r[0] * r[0];
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double sq = r[i] * r[i];
        if (sq > best_sq) {
            best_sq = sq;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int argmax_distance(std::span<const double> r, const RowMatrix& A) {
    int best = 0;
    double best_dist = r[0] * r[0] / A.row_sq_norm(0);
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double dist = r[i] * r[i] / A.row_sq_norm(static_cast<int>(i));
        if (dist > best_dist) {
            best_dist = dist;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int argmax_distance_in(const IndexSet& idx, std::span<const double> r,
                       const RowMatrix& A) {
    if (idx.empty()) throw std::invalid_argument("argmax_distance_in: empty index set");
    int best = idx.indices.front();
    double best_dist = r[static_cast<std::size_t>(best)] * r[static_cast<std::size_t>(best)] /
                       A.row_sq_norm(best);
    for (int i : idx.indices) {
        const double dist = r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)] /
                            A.row_sq_norm(i);
        if (dist > best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

} // namespace kaczmarz
