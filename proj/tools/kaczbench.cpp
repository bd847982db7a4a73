// Benchmark harness for the greedy Kaczmarz solver family.
//
//   kaczbench run   --problem gaussian --m 500 --n 100 --methods grk,grmk ...
//   kaczbench rates --problem uniform --m 2000 --n 200 --max-iters 200 ...
//
// Emits CSV convergence curves, a per-method summary table, and the
// bound-vs-rate table; plotting is out of process.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "kaczmarz/bench.hpp"

namespace {

struct CliOptions {
    std::string problem = "gaussian";
    int m = 500;
    int n = 100;
    double density = 0.2;
    std::string mm_file;
    std::vector<std::string> methods = {"grk", "grmk"};
    double tol = 1e-10;
    std::string metric = "res";
    long max_iters = 0;
    int trials = 30;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string curves_out;
    std::string summary_out;
    std::string rates_out;
};

kaczmarz::RunConfig to_config(const CliOptions& opt) {
    kaczmarz::RunConfig cfg;
    if (opt.problem == "gaussian") {
        cfg.problem = kaczmarz::ProblemSpec::gaussian_dense(opt.m, opt.n);
    } else if (opt.problem == "uniform") {
        cfg.problem = kaczmarz::ProblemSpec::uniform_dense(opt.m, opt.n);
    } else if (opt.problem == "sprandn") {
        cfg.problem = kaczmarz::ProblemSpec::sparse_normal(opt.m, opt.n, opt.density);
    } else if (opt.problem == "sprand") {
        cfg.problem = kaczmarz::ProblemSpec::sparse_uniform(opt.m, opt.n, opt.density);
    } else {
        cfg.problem = kaczmarz::ProblemSpec::matrix_market(opt.mm_file);
    }

    for (const std::string& token : opt.methods) {
        if (!token.empty()) cfg.methods.push_back(kaczmarz::SelectionRule::parse(token));
    }

    cfg.stop.tol = opt.tol;
    cfg.stop.metric = opt.metric == "res" ? kaczmarz::Metric::RES : kaczmarz::Metric::RR;
    cfg.stop.max_iters = opt.max_iters;
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    cfg.curves_out = opt.curves_out;
    cfg.summary_out = opt.summary_out;
    cfg.rates_out = opt.rates_out;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"greedy Kaczmarz benchmark harness"};
    app.require_subcommand(1);
    app.fallthrough(true); // options may follow the subcommand name

    CliOptions opt;
    app.add_option("--problem", opt.problem,
                   "matrix source: gaussian, uniform, sprandn, sprand, mm")
        ->check(CLI::IsMember({"gaussian", "uniform", "sprandn", "sprand", "mm"}));
    app.add_option("--m", opt.m, "row count");
    app.add_option("--n", opt.n, "column count");
    app.add_option("--density", opt.density, "sparse density in (0, 1]");
    app.add_option("--mm-file", opt.mm_file, "Matrix Market input path");
    app.add_option("--methods", opt.methods,
                   "comma list: rk,mr,md,grk,grmk,grmk-theta=<v>,gk,gbk-eta=<v>,"
                   "gdbk,gmbk,gmbk-xi=<v>,avg-block")
        ->delimiter(',');
    app.add_option("--tol", opt.tol, "stopping tolerance");
    app.add_option("--metric", opt.metric, "stopping metric: res or rr")
        ->check(CLI::IsMember({"res", "rr"}));
    app.add_option("--max-iters", opt.max_iters, "iteration cap (0 = 200*m)");
    app.add_option("--trials", opt.trials, "independent trials per method");
    app.add_option("--seed", opt.seed, "base RNG seed")->envname("KACZ_SEED");
    app.add_option("--threads", opt.threads, "worker threads for trials");
    app.add_option("--curves-out", opt.curves_out, "per-iteration CSV path");
    app.add_option("--summary-out", opt.summary_out, "per-method summary CSV path");
    app.add_option("--rates-out", opt.rates_out, "bound/rate CSV path");
    app.set_config("--config", "", "key=value config file; flags override it");

    CLI::App* run_cmd =
        app.add_subcommand("run", "run methods and emit curves/summary CSV");
    app.add_subcommand("rates", "GRK vs GRMK bound/rate table for factor-vs-rate plots");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return kaczmarz::run(to_config(opt));
        return kaczmarz::compare_rates(to_config(opt));
    } catch (const std::exception& e) {
        std::cerr << "kaczbench: " << e.what() << "\n";
        return 1;
    }
}
