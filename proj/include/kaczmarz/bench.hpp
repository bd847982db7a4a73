#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kaczmarz/problems.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

/// Benchmark harness configuration. Curves CSV schema:
///   method,trial,k,res,rr,elapsed_ns,set_size
/// Summary CSV schema:
///   method,median_iters,median_time_s,rho_at_final,bound_factor
/// Rates CSV schema (compare_rates):
///   k,grk_bound,grmk_bound,grk_rho,grmk_rho
struct RunConfig {
    ProblemSpec problem;
    std::vector<SelectionRule> methods;
    StopCriteria stop;
    int trials = 30;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string curves_out;  // empty -> not written
    std::string summary_out; // empty -> not written
    std::string rates_out;   // compare_rates output
};

/// Runs every (method, trial) pair and writes the configured CSV outputs.
/// Returns 0 on success; configuration and IO failures print a diagnostic
/// to stderr and return nonzero. A solver hitting the iteration cap is
/// recorded as MaxIters in the outputs, not treated as a failure.
int run(const RunConfig& config);

/// Runs GRK and GRMK side by side and writes the per-k bound/rate table
/// for factor-vs-rate plots.
int compare_rates(const RunConfig& config);

} // namespace kaczmarz
