#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "krylow/errors.hpp"
#include "krylow/experiment.hpp"
#include "krylow/probe.hpp"

using namespace krylow;

namespace {

namespace fs = std::filesystem;

fs::path workdir() {
    const fs::path dir = fs::temp_directory_path() / "krylow-exp-tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_wall_time(const std::string& csv) {
    std::stringstream out, in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) parts.push_back(f);
        for (size_t i = 0; i < parts.size(); ++i)
            if (i != 9) out << parts[i] << ',';
        out << '\n';
    }
    return out.str();
}

const char* kMinimalConfig = R"({
  "operator": {"type": "synthetic", "spectrum": "log_decay", "n": 2000},
  "function": {"kind": "log"},
  "k": 50,
  "l": 50,
  "s_equals_r": [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
  "methods": ["krylov_aware"]
})";

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("minimal synthetic-log config parses with defaults") {
    ExperimentConfig cfg = parse_config_text(kMinimalConfig, "<test>");
    CHECK(cfg.op_kind == ExperimentConfig::OpKind::synthetic);
    CHECK(cfg.spectrum_kind == "log_decay");
    CHECK(cfg.spectrum_n == 2000);
    CHECK(cfg.k == 50);
    CHECK(cfg.l == 50);
    CHECK(cfg.schedule.size() == 11);
    CHECK(cfg.schedule.front().s == 2);
    CHECK(cfg.schedule.front().r == 2);
    CHECK(cfg.trials == 10);            // default
    CHECK(cfg.dense_cap == 12000);      // default
    MatVecOperator op = build_operator(cfg);
    CHECK(op.dim() == 2000);
}

TEST_CASE("missing required key names the key") {
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "log_decay", "n": 10},
      "function": {"kind": "log"},
      "l": 5, "s_equals_r": [2], "methods": ["krylov_aware"]
    })";
    try {
        parse_config_text(text, "<test>");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("'k'") != std::string::npos);
    }
}

TEST_CASE("l < k rejects the sketch-based methods only") {
    const char* bad = R"({
      "operator": {"type": "synthetic", "spectrum": "log_decay", "n": 100},
      "function": {"kind": "log"},
      "k": 8, "l": 4, "s_equals_r": [3],
      "methods": ["rand_svd_matfun"]
    })";
    CHECK_THROWS_AS(parse_config_text(bad, "<test>"), ValidationError);
    const char* good = R"({
      "operator": {"type": "synthetic", "spectrum": "log_decay", "n": 100},
      "function": {"kind": "log"},
      "k": 8, "l": 4, "s_equals_r": [3],
      "methods": ["krylov_aware", "single_vector"]
    })";
    CHECK_NOTHROW(parse_config_text(good, "<test>"));
}

TEST_CASE("unknown keys are rejected with their path") {
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "log_decay", "n": 10, "oops": 1},
      "function": {"kind": "log"},
      "k": 2, "l": 2, "s_equals_r": [2], "methods": ["krylov_aware"]
    })";
    try {
        parse_config_text(text, "<test>");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("operator") != std::string::npos);
        CHECK(msg.find("oops") != std::string::npos);
    }
}

TEST_CASE("exactly one schedule form is required") {
    const char* both = R"({
      "operator": {"type": "synthetic", "spectrum": "log_decay", "n": 10},
      "function": {"kind": "log"},
      "k": 2, "l": 2, "s_equals_r": [2],
      "budget_schedule": [{"s": 2, "r": 2}],
      "methods": ["krylov_aware"]
    })";
    CHECK_THROWS_AS(parse_config_text(both, "<test>"), ValidationError);
}

TEST_CASE("tail-probability bounds require delta") {
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "exp_decay", "n": 50},
      "function": {"kind": "exp"},
      "k": 4, "l": 8, "s_equals_r": [3],
      "methods": ["krylov_aware"],
      "bounds": [{"kind": "thm35_tail"}]
    })";
    CHECK_THROWS_AS(parse_config_text(text, "<test>"), ValidationError);
}

TEST_CASE("malformed JSON raises a parse error") {
    CHECK_THROWS_AS(parse_config_text("{not json", "<test>"), ParseError);
}

TEST_CASE("trivial full-rank config reaches machine precision for every method") {
    const char* text = R"({
      "operator": {"type": "synthetic", "eigenvalues": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0]},
      "function": {"kind": "identity"},
      "k": 12, "l": 12,
      "budget_schedule": [{"s": 1, "r": 1}],
      "trials": 3, "seed": 5,
      "methods": ["rand_svd_exact", "rand_svd_matfun", "krylov_aware", "krylov_aware_direct", "single_vector"]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    const std::string out = (workdir() / "trivial").string();
    ExperimentSummary summary = run_experiment(cfg, out);
    CHECK(summary.failures == 0);
    for (const ResultRow& row : read_results_csv(summary.results_csv)) {
        CAPTURE(row.method);
        CHECK(row.status == "ok");
        CHECK(row.rel_error <= 1e-10);
    }
}

TEST_CASE("identical config and seed reproduce results.csv byte for byte") {
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "exp_decay", "n": 100, "scale": 3.0, "rate": 0.1},
      "function": {"kind": "exp", "t": 1.0},
      "k": 4, "l": 6, "s_equals_r": [2, 3], "trials": 4, "seed": 99,
      "methods": ["krylov_aware", "rand_svd_matfun", "single_vector"]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    ExperimentSummary s1 = run_experiment(cfg, (workdir() / "det1").string());
    ExperimentSummary s2 = run_experiment(cfg, (workdir() / "det2").string());
    CHECK(strip_wall_time(slurp(s1.results_csv)) == strip_wall_time(slurp(s2.results_csv)));
}

TEST_CASE("error rows keep the run alive") {
    // budget l*(s+r) = 6 < k = 8: single_vector cannot reach rank k
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "exp_decay", "n": 60, "scale": 2.0, "rate": 0.1},
      "function": {"kind": "exp"},
      "k": 8, "l": 2, "budget_schedule": [{"s": 2, "r": 1}], "trials": 2, "seed": 3,
      "methods": ["krylov_aware", "single_vector"]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    ExperimentSummary summary = run_experiment(cfg, (workdir() / "errors").string());
    CHECK(summary.failures > 0);
    int ok_rows = 0, error_rows = 0;
    for (const ResultRow& row : read_results_csv(summary.results_csv)) {
        if (row.status == "ok") {
            ++ok_rows;
        } else {
            ++error_rows;
            CHECK(std::isnan(row.rel_error));
        }
    }
    CHECK(ok_rows > 0);
    CHECK(error_rows == summary.failures);
}

TEST_CASE("budget column carries the analytic cost model") {
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "exp_decay", "n": 80, "scale": 2.0, "rate": 0.1},
      "function": {"kind": "exp"},
      "k": 3, "l": 5, "budget_schedule": [{"s": 3, "r": 2}], "trials": 2, "seed": 11,
      "methods": ["rand_svd_exact", "krylov_aware", "krylov_aware_direct", "single_vector"]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    ExperimentSummary summary = run_experiment(cfg, (workdir() / "budget").string());
    for (const ResultRow& row : read_results_csv(summary.results_csv)) {
        if (row.method.rfind("rand_svd_exact", 0) == 0) {
            CHECK(row.matvecs == 2 * cfg.l);
        } else {
            CHECK(row.matvecs == cfg.l * (3 + 2));
        }
    }
    CHECK(summary.failures == 0);
}

TEST_CASE("bounds.csv is written when requested") {
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "exp_decay", "n": 120, "scale": 4.0, "rate": 0.05},
      "function": {"kind": "exp"},
      "k": 5, "l": 12, "s_equals_r": [6], "trials": 2, "seed": 1,
      "methods": ["krylov_aware"],
      "bounds": [{"kind": "thm35_expectation"}, {"kind": "thm35_tail", "delta": 0.1}]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    ExperimentSummary summary = run_experiment(cfg, (workdir() / "bounds").string());
    REQUIRE(!summary.bounds_csv.empty());
    const std::string text_out = slurp(summary.bounds_csv);
    CHECK(text_out.find("thm35_expectation") != std::string::npos);
    CHECK(text_out.find("thm35_tail") != std::string::npos);
    CHECK(text_out.find("tail_norm=") != std::string::npos);
    CHECK(slurp(summary.meta_json).find("omega_hash_per_trial") != std::string::npos);
}

TEST_CASE("mean error of krylov_aware decreases with the budget") {
    const char* text = R"({
      "operator": {"type": "laplacian2d", "grid": 12, "kappa": 0.01, "lambda": 1.0},
      "function": {"kind": "exp"},
      "k": 6, "l": 6, "s_equals_r": [1, 4], "trials": 5, "seed": 17,
      "methods": ["krylov_aware"]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    ExperimentSummary summary = run_experiment(cfg, (workdir() / "monotone").string());
    std::map<int64_t, std::pair<double, int>> mean_by_budget;
    for (const ResultRow& row : read_results_csv(summary.results_csv)) {
        if (row.method != "krylov_aware_k") continue;
        auto& [sum, count] = mean_by_budget[row.matvecs];
        sum += row.rel_error;
        ++count;
    }
    REQUIRE(mean_by_budget.size() == 2);
    const double lo_budget = mean_by_budget.begin()->second.first /
                             mean_by_budget.begin()->second.second;
    const double hi_budget = mean_by_budget.rbegin()->second.first /
                             mean_by_budget.rbegin()->second.second;
    CHECK(hi_budget < lo_budget);
}

TEST_CASE("plot data aggregates match an independent recomputation") {
    const char* text = R"({
      "operator": {"type": "synthetic", "spectrum": "exp_decay", "n": 90, "scale": 3.0, "rate": 0.1},
      "function": {"kind": "exp"},
      "k": 4, "l": 6, "s_equals_r": [2, 3], "trials": 4, "seed": 23,
      "methods": ["krylov_aware"]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    ExperimentSummary summary = run_experiment(cfg, (workdir() / "plot").string());

    // oracle: second-pass aggregation from the raw rows
    std::map<std::pair<std::string, int64_t>, std::vector<double>> series;
    for (const ResultRow& row : read_results_csv(summary.results_csv))
        if (row.status == "ok") series[{row.method, row.matvecs}].push_back(row.rel_error);

    std::ifstream in(summary.plot_csv);
    std::string line;
    std::getline(in, line);  // header
    int data_rows = 0;
    bool saw_optimal = false;
    while (std::getline(in, line)) {
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) parts.push_back(f);
        REQUIRE(parts.size() == 5);
        const double mean = std::stod(parts[2]);
        const double lo = std::stod(parts[3]);
        const double hi = std::stod(parts[4]);
        CHECK(lo <= mean + 1e-15);
        CHECK(mean <= hi + 1e-15);
        if (parts[0] == "optimal_rank_k") {
            saw_optimal = true;
            continue;
        }
        ++data_rows;
        const auto& vals = series.at({parts[0], std::stoll(parts[1])});
        double sum = 0.0, mn = vals[0], mx = vals[0];
        for (double v : vals) {
            sum += v;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        CHECK(mean == doctest::Approx(sum / vals.size()).epsilon(1e-15));
        CHECK(lo == doctest::Approx(mn).epsilon(1e-15));
        CHECK(hi == doctest::Approx(mx).epsilon(1e-15));
    }
    CHECK(saw_optimal);
    CHECK(data_rows == static_cast<int>(series.size()));
}

TEST_CASE("plot data parser reports the offending row") {
    const fs::path bad = workdir() / "bad.csv";
    std::ofstream out(bad);
    out << "method,s,r,l,k,matvecs,trial,rel_error,optimal_rank_k_error,wall_time_ms,status\n";
    out << "x,1,2\n";
    out.close();
    try {
        emit_plotdata(bad.string(), (workdir() / "bad_out.csv").string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("dense-cap violation is an actionable resource error") {
    const char* text = R"({
      "operator": {"type": "laplacian2d", "grid": 20, "kappa": 0.01, "lambda": 1.0},
      "function": {"kind": "exp"},
      "k": 4, "l": 6, "s_equals_r": [2], "trials": 1, "seed": 1, "dense_cap": 100,
      "methods": ["krylov_aware"]
    })";
    ExperimentConfig cfg = parse_config_text(text, "<test>");
    CHECK_THROWS_AS(run_experiment(cfg, (workdir() / "cap").string()), ResourceError);
}

}  // TEST_SUITE
