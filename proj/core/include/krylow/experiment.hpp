#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "krylow/bounds.hpp"
#include "krylow/lowrank.hpp"
#include "krylow/operators.hpp"
#include "krylow/scalar_function.hpp"

namespace krylow {

struct BudgetPoint {
    int s = 0;
    int r = 0;
};

struct BoundRequest {
    BoundKind kind;
    std::optional<double> delta;
};

/// Declarative experiment description (JSON on disk, strict schema).
struct ExperimentConfig {
    enum class OpKind { laplacian2d, spin_chain, synthetic, matrix_market };

    OpKind op_kind = OpKind::synthetic;
    // laplacian2d
    int grid = 0;
    double kappa = 0.0;
    double lambda = 0.0;
    // spin_chain
    int sites = 0;
    double field_h = 0.0;
    // synthetic: explicit eigenvalues or a named generator
    std::vector<double> eigenvalues;
    std::string spectrum_kind;  // "log_decay" | "exp_decay"
    int spectrum_n = 0;
    double spectrum_scale = 1.0;
    double spectrum_rate = 1.0;
    // matrix_market
    std::string mm_path;

    ScalarFunction function = ScalarFunction::identity();
    int k = 0;
    int l = 0;
    std::vector<BudgetPoint> schedule;
    int trials = 10;
    uint64_t seed = 0;
    std::vector<std::string> methods;
    std::vector<BoundRequest> bounds;
    int dense_cap = kDefaultDenseCap;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& json_text, const std::string& origin);

MatVecOperator build_operator(const ExperimentConfig& cfg);

/// One CSV record. Method names carry the truncation variant: "krylov_aware"
/// is the full-core approximation, "krylov_aware_k" its rank-k truncation,
/// and likewise for the other methods. matvecs is the method's analytic
/// budget. status is "ok" or the failure text for error rows.
struct ResultRow {
    std::string method;
    int s = 0, r = 0, l = 0, k = 0;
    int64_t matvecs = 0;
    int trial = 0;
    double rel_error = 0.0;
    double optimal_rank_k_error = 0.0;
    int64_t wall_time_ms = 0;
    std::string status = "ok";
};

struct ExperimentSummary {
    std::string results_csv;
    std::string bounds_csv;  // empty when no bounds requested
    std::string meta_json;
    std::string plot_csv;
    int rows = 0;
    int failures = 0;
};

/// Runs the full sweep: shared per-trial Gaussian sketches across methods,
/// exact reference errors, deterministic CSV output (17 significant digits;
/// rows sorted by method, s, r, trial). Trials execute on a worker pool.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Aggregates results.csv into per-method series (matvecs, mean, min, max)
/// plus the optimal rank-k line.
void emit_plotdata(const std::string& results_csv, const std::string& out_path);

std::vector<ResultRow> read_results_csv(const std::string& path);

}  // namespace krylow
