// Experiment CLI: runs seeded method sweeps, the invariant verification
// suites, standalone bound evaluation, and small Matrix Market fixtures.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure,
// 3 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krylow/bounds.hpp"
#include "krylow/errors.hpp"
#include "krylow/experiment.hpp"
#include "krylow/matrix_market.hpp"
#include "krylow/spectrum.hpp"
#include "krylow/verification.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    krylow::ExperimentConfig cfg = krylow::parse_config(config_path);
    krylow::ExperimentSummary summary = krylow::run_experiment(cfg, out_dir);
    std::cout << "wrote " << summary.results_csv << " (" << summary.rows << " rows, "
              << summary.failures << " error rows)\n";
    if (!summary.bounds_csv.empty()) std::cout << "wrote " << summary.bounds_csv << "\n";
    std::cout << "wrote " << summary.plot_csv << "\n";
    std::cout << "wrote " << summary.meta_json << "\n";
    return 0;
}

int cmd_verify(const std::string& suite) {
    std::vector<krylow::CheckResult> results = krylow::run_verification(suite);
    int failures = 0;
    for (const krylow::CheckResult& r : results) {
        std::printf("%s\t%s\tslack=%.6g\t%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.slack,
                    r.detail.c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 3;
}

int cmd_bounds(const std::string& config_path, const std::string& out_dir) {
    krylow::ExperimentConfig cfg = krylow::parse_config(config_path);
    if (cfg.bounds.empty())
        throw krylow::ValidationError("bounds: config requests no bounds (add a 'bounds' list)");

    krylow::MatVecOperator op = krylow::build_operator(cfg);
    std::vector<double> eigs;
    if (op.exact_spectrum()) {
        eigs = *op.exact_spectrum();
    } else {
        eigs = krylow::sym_eigvals(krylow::symmetrize(op.materialize(cfg.dense_cap)),
                                   cfg.dense_cap);
    }
    krylow::SpectrumSplit split(eigs, cfg.k, cfg.function);

    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / "bounds.csv").string();
    std::ofstream out(path);
    if (!out) throw krylow::ValidationError("bounds: cannot write " + path);
    out << "bound,k,l,s,r,delta,value,components\n";
    for (const krylow::BoundRequest& req : cfg.bounds) {
        for (const krylow::BudgetPoint& b : cfg.schedule) {
            out << krylow::bound_kind_name(req.kind) << ',' << cfg.k << ',' << cfg.l << ',' << b.s
                << ',' << b.r << ',';
            if (req.delta) out << *req.delta;
            out << ',';
            try {
                krylow::BoundReport rep =
                    krylow::assemble_bound(req.kind, split, cfg.l, b.s, b.r, req.delta);
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", rep.value);
                out << buf << ',';
                bool first = true;
                for (const auto& [name, val] : rep.components) {
                    std::snprintf(buf, sizeof(buf), "%.17g", val);
                    if (!first) out << ';';
                    out << name << '=' << buf;
                    first = false;
                }
                out << '\n';
            } catch (const krylow::Error& e) {
                std::string msg = e.what();
                for (char& c : msg)
                    if (c == ',' || c == '\n') c = ';';
                out << "nan," << msg << '\n';
            }
        }
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_gen_matrix(const std::string& kind, const std::string& out_path) {
    const auto colon = kind.find(':');
    if (colon == std::string::npos)
        throw krylow::ValidationError("gen-matrix: kind must look like path:16, cycle:10 or "
                                      "complete:8");
    const std::string shape = kind.substr(0, colon);
    const int n = std::stoi(kind.substr(colon + 1));
    if (n < 2) throw krylow::ValidationError("gen-matrix: need at least 2 nodes");
    std::vector<std::pair<int64_t, int64_t>> edges;
    if (shape == "path") {
        for (int i = 1; i < n; ++i) edges.push_back({i, i + 1});
    } else if (shape == "cycle") {
        for (int i = 1; i < n; ++i) edges.push_back({i, i + 1});
        edges.push_back({n, 1});
    } else if (shape == "complete") {
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) edges.push_back({i, j});
    } else {
        throw krylow::ValidationError("gen-matrix: unknown kind '" + shape + "'");
    }
    krylow::write_matrix_market_pattern(out_path, n, edges);
    std::cout << "wrote " << out_path << " (" << shape << ", n=" << n << ", " << edges.size()
              << " edges)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krylov-aware low-rank approximation of matrix functions"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", suite = "fast", kind, mm_out;
    std::string plot_in, plot_out;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    run->add_option("--out", out_dir, "output directory");

    CLI::App* verify = app.add_subcommand("verify", "run the invariant verification suite");
    verify->add_option("--suite", suite, "fast|full")->check(CLI::IsMember({"fast", "full"}));

    CLI::App* bounds = app.add_subcommand("bounds", "evaluate requested bounds for a config");
    bounds->add_option("--config", config_path, "JSON experiment config")->required();
    bounds->add_option("--out", out_dir, "output directory");

    CLI::App* gen = app.add_subcommand("gen-matrix", "write a small Matrix Market graph");
    gen->add_option("--kind", kind, "path:N | cycle:N | complete:N")->required();
    gen->add_option("--out", mm_out, "output .mtx path")->required();

    CLI::App* plot = app.add_subcommand("plot-data", "aggregate a results.csv for plotting");
    plot->add_option("--results", plot_in, "results.csv from a run")->required();
    plot->add_option("--out", plot_out, "output csv path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (verify->parsed()) return cmd_verify(suite);
        if (bounds->parsed()) return cmd_bounds(config_path, out_dir);
        if (gen->parsed()) return cmd_gen_matrix(kind, mm_out);
        if (plot->parsed()) {
            krylow::emit_plotdata(plot_in, plot_out);
            std::cout << "wrote " << plot_out << "\n";
            return 0;
        }
    } catch (const krylow::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const krylow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
