#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kaczmarz/bench.hpp"

using namespace kaczmarz;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// drops the named columns (by 0-based position) from every CSV line
std::string drop_columns(const std::string& csv, const std::vector<int>& cols) {
    std::stringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            out += line + "\n";
            continue;
        }
        std::stringstream fields(line);
        std::string field;
        int idx = 0;
        bool first = true;
        while (std::getline(fields, field, ',')) {
            bool drop = false;
            for (int c : cols) {
                if (idx == c) drop = true;
            }
            if (!drop) {
                if (!first) out += ',';
                out += field;
                first = false;
            }
            ++idx;
        }
        out += '\n';
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::stringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream in(line);
    std::string f;
    while (std::getline(in, f, ',')) fields.push_back(f);
    return fields;
}

void write_identity_mtx(const std::string& path, int n) {
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << n << " " << n << " " << n << "\n";
    for (int i = 1; i <= n; ++i) out << i << " " << i << " 1.0\n";
}

} // namespace

TEST_CASE("run emits the fixed CSV schemas") {
    RunConfig cfg;
    cfg.problem = ProblemSpec::gaussian_dense(40, 10);
    cfg.methods = {SelectionRule::grk(), SelectionRule::grmk()};
    cfg.stop.metric = Metric::RES;
    cfg.trials = 2;
    cfg.seed = 5;
    cfg.curves_out = temp_path("kz_curves.csv");
    cfg.summary_out = temp_path("kz_summary.csv");
    REQUIRE(run(cfg) == 0);

    const auto curves = split_lines(slurp(cfg.curves_out));
    REQUIRE(!curves.empty());
    CHECK(curves[0] == "method,trial,k,res,rr,elapsed_ns,set_size");
    const auto fields = split_fields(curves[1]);
    REQUIRE(fields.size() == 7);
    CHECK(fields[0] == "grk");
    CHECK(fields[2] == "0");
    CHECK(fields[6] == "0"); // k = 0 record has no working set

    const auto summary = split_lines(slurp(cfg.summary_out));
    REQUIRE(summary.size() >= 4);
    CHECK(summary[0] == "# trials=2 seed=5");
    CHECK(summary[1] == "method,median_iters,median_time_s,rho_at_final,bound_factor");
    CHECK(split_fields(summary[2])[0] == "grk");
    CHECK(split_fields(summary[3])[0] == "grmk");

    // bound columns: grk <= grmk < 1
    const double grk_bound = std::stod(split_fields(summary[2])[4]);
    const double grmk_bound = std::stod(split_fields(summary[3])[4]);
    CHECK(grk_bound <= grmk_bound);
    CHECK(grmk_bound < 1.0);
}

TEST_CASE("identity problem runs in exactly n iterations") {
    const std::string mtx = temp_path("kz_eye10.mtx");
    write_identity_mtx(mtx, 10);

    RunConfig cfg;
    cfg.problem = ProblemSpec::matrix_market(mtx);
    cfg.methods = {SelectionRule::grmk()};
    cfg.stop.metric = Metric::RES;
    cfg.trials = 1;
    cfg.seed = 3;
    cfg.summary_out = temp_path("kz_eye_summary.csv");
    REQUIRE(run(cfg) == 0);

    const auto summary = split_lines(slurp(cfg.summary_out));
    const auto fields = split_fields(summary[2]);
    CHECK(fields[0] == "grmk");
    CHECK(std::stod(fields[1]) == 10.0);
}

TEST_CASE("identical config and seed reproduce the CSVs byte for byte") {
    RunConfig cfg;
    cfg.problem = ProblemSpec::sparse_normal(50, 12, 0.3);
    cfg.methods = {SelectionRule::grmk(), SelectionRule::gmbk(),
                   SelectionRule::rk()};
    cfg.stop.metric = Metric::RES;
    cfg.trials = 3;
    cfg.seed = 11;

    cfg.curves_out = temp_path("kz_rep_c1.csv");
    cfg.summary_out = temp_path("kz_rep_s1.csv");
    REQUIRE(run(cfg) == 0);
    const std::string c1 = slurp(cfg.curves_out);
    const std::string s1 = slurp(cfg.summary_out);

    cfg.curves_out = temp_path("kz_rep_c2.csv");
    cfg.summary_out = temp_path("kz_rep_s2.csv");
    REQUIRE(run(cfg) == 0);
    const std::string c2 = slurp(cfg.curves_out);
    const std::string s2 = slurp(cfg.summary_out);

    // timing columns excluded, everything else byte-identical
    CHECK(drop_columns(c1, {5}) == drop_columns(c2, {5}));
    CHECK(drop_columns(s1, {2}) == drop_columns(s2, {2}));

    // timing columns are present (7 fields per curves row)
    CHECK(split_fields(split_lines(c1)[1]).size() == 7);
}

TEST_CASE("threaded trials match single-threaded results") {
    RunConfig cfg;
    cfg.problem = ProblemSpec::gaussian_dense(60, 15);
    cfg.methods = {SelectionRule::grmk(), SelectionRule::grk()};
    cfg.stop.metric = Metric::RES;
    cfg.trials = 4;
    cfg.seed = 21;

    cfg.curves_out = temp_path("kz_thr_c1.csv");
    cfg.threads = 1;
    REQUIRE(run(cfg) == 0);
    const std::string serial = slurp(cfg.curves_out);

    cfg.curves_out = temp_path("kz_thr_c2.csv");
    cfg.threads = 2;
    REQUIRE(run(cfg) == 0);
    const std::string threaded = slurp(cfg.curves_out);

    CHECK(drop_columns(serial, {5}) == drop_columns(threaded, {5}));
}

TEST_CASE("GMBK and GDBK medians agree within 15 percent") {
    RunConfig cfg;
    cfg.problem = ProblemSpec::gaussian_dense(300, 60);
    cfg.methods = {SelectionRule::gmbk(), SelectionRule::gdbk()};
    cfg.stop.metric = Metric::RES;
    cfg.trials = 5;
    cfg.seed = 2024;
    cfg.summary_out = temp_path("kz_blockcmp.csv");
    REQUIRE(run(cfg) == 0);

    const auto summary = split_lines(slurp(cfg.summary_out));
    const double gmbk_iters = std::stod(split_fields(summary[2])[1]);
    const double gdbk_iters = std::stod(split_fields(summary[3])[1]);
    CHECK(std::abs(gmbk_iters - gdbk_iters) <= 0.15 * std::max(gmbk_iters, gdbk_iters));
}

TEST_CASE("compare_rates on a unit-row instance equalizes the bounds") {
    const std::string mtx = temp_path("kz_eye20.mtx");
    write_identity_mtx(mtx, 20);

    RunConfig cfg;
    cfg.problem = ProblemSpec::matrix_market(mtx);
    cfg.stop.metric = Metric::RES;
    cfg.trials = 2;
    cfg.seed = 9;
    cfg.rates_out = temp_path("kz_rates.csv");
    REQUIRE(compare_rates(cfg) == 0);

    const auto lines = split_lines(slurp(cfg.rates_out));
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "k,grk_bound,grmk_bound,grk_rho,grmk_rho");
    for (std::size_t li = 2; li < lines.size(); ++li) { // k >= 2 rows
        const auto f = split_fields(lines[li]);
        REQUIRE(f.size() == 5);
        if (f[2] == "nan") continue; // past the recorded run's history
        CHECK(std::stod(f[1]) == doctest::Approx(std::stod(f[2])).epsilon(1e-12));
    }
    // the identity run converges to exact zero error: rho ends at 0
    const auto last = split_fields(lines.back());
    CHECK(std::stod(last[3]) == 0.0);
    CHECK(std::stod(last[4]) == 0.0);
}

TEST_CASE("compare_rates orders the bound columns on a generic instance") {
    RunConfig cfg;
    cfg.problem = ProblemSpec::uniform_dense(150, 25);
    cfg.stop.metric = Metric::RES;
    cfg.trials = 3;
    cfg.seed = 31;
    cfg.rates_out = temp_path("kz_rates_ord.csv");
    REQUIRE(compare_rates(cfg) == 0);

    const auto lines = split_lines(slurp(cfg.rates_out));
    REQUIRE(lines.size() >= 3);
    int compared = 0;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto f = split_fields(lines[li]);
        REQUIRE(f.size() == 5);
        if (f[2] == "nan") continue;
        const double grk_bound = std::stod(f[1]);
        const double grmk_bound = std::stod(f[2]);
        CHECK(grmk_bound >= grk_bound - 1e-14);
        CHECK(grmk_bound < 1.0);
        ++compared;
    }
    CHECK(compared > 5);
}

TEST_CASE("IO failures return nonzero instead of throwing") {
    RunConfig cfg;
    cfg.problem = ProblemSpec::gaussian_dense(10, 4);
    cfg.methods = {SelectionRule::grmk()};
    cfg.trials = 1;
    cfg.curves_out = "/nonexistent-dir/kz.csv";
    CHECK(run(cfg) != 0);

    RunConfig empty;
    empty.problem = ProblemSpec::gaussian_dense(10, 4);
    CHECK(run(empty) != 0); // no methods
}
