#include "krylow/experiment.hpp"

#include <atomic>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "krylow/errors.hpp"
#include "krylow/matrix_market.hpp"
#include "krylow/probe.hpp"
#include "krylow/rng.hpp"
#include "krylow/spectrum.hpp"

namespace krylow {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ValidationError("config " + path + ": unknown key '" + it.key() + "'");
    }
}

const json& require_key(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("config " + path + ": missing required key '" + key + "'");
    return *it;
}

ScalarFunction parse_function(const json& fn) {
    reject_unknown_keys(fn, {"kind", "t", "coeffs"}, "function");
    const std::string kind = require_key(fn, "kind", "function").get<std::string>();
    if (kind == "identity") return ScalarFunction::identity();
    if (kind == "exp" || kind == "exp_scaled")
        return ScalarFunction::exp_scaled(fn.value("t", 1.0));
    if (kind == "log") return ScalarFunction::log();
    if (kind == "polynomial" || kind == "power_series") {
        const json& c = require_key(fn, "coeffs", "function");
        std::vector<double> coeffs = c.get<std::vector<double>>();
        if (coeffs.empty()) throw ValidationError("config function.coeffs: must be nonempty");
        return kind == "polynomial" ? ScalarFunction::polynomial(std::move(coeffs))
                                    : ScalarFunction::power_series(std::move(coeffs));
    }
    throw ValidationError("config function.kind: unknown kind '" + kind + "'");
}

const std::vector<std::string> kMethodNames = {"rand_svd_exact", "rand_svd_matfun", "krylov_aware",
                                               "krylov_aware_direct", "single_vector"};

BoundKind parse_bound_kind(const std::string& name) {
    if (name == "thm35_tail") return BoundKind::thm35_tail;
    if (name == "thm35_expectation") return BoundKind::thm35_expectation;
    if (name == "cor41") return BoundKind::cor41;
    if (name == "cor42") return BoundKind::cor42;
    if (name == "thm51") return BoundKind::thm51;
    throw ValidationError("config bounds.kind: unknown bound '" + name + "'");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

std::string git_describe() {
    FILE* pipe = popen("git describe --always --dirty 2>/dev/null", "r");
    if (!pipe) return "unknown";
    char buf[128] = {0};
    std::string out;
    while (fgets(buf, sizeof(buf), pipe)) out += buf;
    pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    return out.empty() ? "unknown" : out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("config " + origin + ": " + e.what());
    }
    if (!root.is_object()) throw ValidationError("config " + origin + ": top level must be an object");
    reject_unknown_keys(root,
                        {"operator", "function", "k", "l", "budget_schedule", "s_equals_r",
                         "trials", "seed", "methods", "bounds", "dense_cap"},
                        "");

    ExperimentConfig cfg;

    const json& op = require_key(root, "operator", "");
    const std::string type = require_key(op, "type", "operator").get<std::string>();
    if (type == "laplacian2d") {
        reject_unknown_keys(op, {"type", "grid", "kappa", "lambda"}, "operator");
        cfg.op_kind = ExperimentConfig::OpKind::laplacian2d;
        cfg.grid = require_key(op, "grid", "operator").get<int>();
        cfg.kappa = require_key(op, "kappa", "operator").get<double>();
        cfg.lambda = require_key(op, "lambda", "operator").get<double>();
    } else if (type == "spin_chain") {
        reject_unknown_keys(op, {"type", "sites", "h"}, "operator");
        cfg.op_kind = ExperimentConfig::OpKind::spin_chain;
        cfg.sites = require_key(op, "sites", "operator").get<int>();
        cfg.field_h = require_key(op, "h", "operator").get<double>();
    } else if (type == "synthetic") {
        reject_unknown_keys(op, {"type", "eigenvalues", "spectrum", "n", "scale", "rate"},
                            "operator");
        cfg.op_kind = ExperimentConfig::OpKind::synthetic;
        if (op.contains("eigenvalues")) {
            cfg.eigenvalues = op.at("eigenvalues").get<std::vector<double>>();
            if (cfg.eigenvalues.empty())
                throw ValidationError("config operator.eigenvalues: must be nonempty");
        } else {
            cfg.spectrum_kind = require_key(op, "spectrum", "operator").get<std::string>();
            cfg.spectrum_n = require_key(op, "n", "operator").get<int>();
            cfg.spectrum_scale = op.value("scale", 1.0);
            cfg.spectrum_rate = op.value("rate", 1.0);
            if (cfg.spectrum_kind != "log_decay" && cfg.spectrum_kind != "exp_decay")
                throw ValidationError("config operator.spectrum: unknown generator '" +
                                      cfg.spectrum_kind + "'");
            if (cfg.spectrum_n < 1) throw ValidationError("config operator.n: must be >= 1");
        }
    } else if (type == "matrix_market") {
        reject_unknown_keys(op, {"type", "path"}, "operator");
        cfg.op_kind = ExperimentConfig::OpKind::matrix_market;
        cfg.mm_path = require_key(op, "path", "operator").get<std::string>();
    } else {
        throw ValidationError("config operator.type: unknown type '" + type + "'");
    }

    cfg.function = parse_function(require_key(root, "function", ""));
    cfg.k = require_key(root, "k", "").get<int>();
    if (cfg.k < 1) throw ValidationError("config k: must be >= 1");
    cfg.l = require_key(root, "l", "").get<int>();
    if (cfg.l < 1) throw ValidationError("config l: must be >= 1");

    if (root.contains("budget_schedule") == root.contains("s_equals_r"))
        throw ValidationError("config: exactly one of 'budget_schedule' and 's_equals_r' required");
    if (root.contains("budget_schedule")) {
        for (const json& b : root.at("budget_schedule")) {
            reject_unknown_keys(b, {"s", "r"}, "budget_schedule[]");
            BudgetPoint p;
            p.s = require_key(b, "s", "budget_schedule[]").get<int>();
            p.r = require_key(b, "r", "budget_schedule[]").get<int>();
            if (p.s < 1 || p.r < 0)
                throw ValidationError("config budget_schedule: need s >= 1 and r >= 0");
            cfg.schedule.push_back(p);
        }
    } else {
        for (const json& v : root.at("s_equals_r")) {
            const int s = v.get<int>();
            if (s < 1) throw ValidationError("config s_equals_r: entries must be >= 1");
            cfg.schedule.push_back({s, s});
        }
    }
    if (cfg.schedule.empty()) throw ValidationError("config: budget schedule is empty");

    cfg.trials = root.value("trials", 10);
    if (cfg.trials < 1) throw ValidationError("config trials: must be >= 1");
    cfg.seed = root.value("seed", uint64_t{0});
    cfg.dense_cap = root.value("dense_cap", kDefaultDenseCap);
    if (cfg.dense_cap < 1) throw ValidationError("config dense_cap: must be >= 1");

    cfg.methods = require_key(root, "methods", "").get<std::vector<std::string>>();
    if (cfg.methods.empty()) throw ValidationError("config methods: must be nonempty");
    for (const std::string& m : cfg.methods) {
        if (std::find(kMethodNames.begin(), kMethodNames.end(), m) == kMethodNames.end())
            throw ValidationError("config methods: unknown method '" + m + "'");
        if (std::count(cfg.methods.begin(), cfg.methods.end(), m) > 1)
            throw ValidationError("config methods: duplicate method '" + m + "'");
    }
    // Alg 2/3 sketch the range with l columns, so they need l >= k; only the
    // Krylov-aware variants admit l < k.
    if (cfg.l < cfg.k) {
        for (const std::string& m : cfg.methods)
            if (m == "rand_svd_matfun" || m == "rand_svd_exact")
                throw ValidationError("config: method '" + m + "' requires l >= k, got l = " +
                                      std::to_string(cfg.l) + " < k = " + std::to_string(cfg.k));
    }

    if (root.contains("bounds")) {
        for (const json& b : root.at("bounds")) {
            reject_unknown_keys(b, {"kind", "delta"}, "bounds[]");
            BoundRequest req;
            req.kind = parse_bound_kind(require_key(b, "kind", "bounds[]").get<std::string>());
            if (b.contains("delta")) req.delta = b.at("delta").get<double>();
            if ((req.kind == BoundKind::thm35_tail || req.kind == BoundKind::thm51) && !req.delta)
                throw ValidationError("config bounds: kind '" + bound_kind_name(req.kind) +
                                      "' requires 'delta'");
            cfg.bounds.push_back(req);
        }
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

MatVecOperator build_operator(const ExperimentConfig& cfg) {
    switch (cfg.op_kind) {
        case ExperimentConfig::OpKind::laplacian2d:
            return laplacian2d_operator(cfg.grid, cfg.kappa, cfg.lambda);
        case ExperimentConfig::OpKind::spin_chain:
            return spin_chain_operator(cfg.sites, cfg.field_h);
        case ExperimentConfig::OpKind::synthetic: {
            if (!cfg.eigenvalues.empty()) return synthetic_spectrum_operator(cfg.eigenvalues);
            if (cfg.spectrum_kind == "log_decay")
                return synthetic_spectrum_operator(log_decay_spectrum(cfg.spectrum_n));
            return synthetic_spectrum_operator(
                exp_decay_spectrum(cfg.spectrum_n, cfg.spectrum_scale, cfg.spectrum_rate));
        }
        case ExperimentConfig::OpKind::matrix_market:
            return adjacency_from_matrix_market(cfg.mm_path);
    }
    throw ValidationError("build_operator: unreachable");
}

namespace {

struct ReferenceBundle {
    ExactReference ref;
    std::vector<double> a_eigenvalues;            // spectrum of A
    std::optional<DenseMatrix> f_of_a_dense;      // for rand_svd_exact
};

ReferenceBundle build_reference(const ExperimentConfig& cfg, const MatVecOperator& op,
                                bool need_dense_f) {
    ReferenceBundle out;
    const ScalarFunction& f = cfg.function;
    if (cfg.op_kind == ExperimentConfig::OpKind::synthetic) {
        out.a_eigenvalues = *op.exact_spectrum();
        std::vector<double> fvals(out.a_eigenvalues.size());
        for (size_t i = 0; i < fvals.size(); ++i) {
            if (!f.in_domain(out.a_eigenvalues[i]))
                throw DomainError("reference: " + f.name() + " undefined at eigenvalue " +
                                  std::to_string(out.a_eigenvalues[i]));
            fvals[i] = f(out.a_eigenvalues[i]);
        }
        out.ref = ExactReference::from_diagonal(fvals);
        if (need_dense_f) out.f_of_a_dense = DenseMatrix::diag(fvals);
        return out;
    }
    if (op.dim() > cfg.dense_cap)
        throw ResourceError("run_experiment: operator dimension " + std::to_string(op.dim()) +
                            " exceeds dense_cap " + std::to_string(cfg.dense_cap) +
                            "; exact errors need a scaled-down configuration");
    DenseMatrix a = symmetrize(op.materialize(cfg.dense_cap));
    SpectralDecomposition dec = sym_eig(a, EigMethod::automatic, cfg.dense_cap);
    out.a_eigenvalues = dec.eigenvalues;
    const int n = a.rows();
    std::vector<double> fvals(n);
    DenseMatrix scaled = dec.eigenvectors;
    for (int j = 0; j < n; ++j) {
        const double lam = dec.eigenvalues[j];
        if (!f.in_domain(lam))
            throw DomainError("reference: " + f.name() + " undefined at eigenvalue " +
                              std::to_string(lam));
        fvals[j] = f(lam);
        double* c = scaled.col(j);
        for (int i = 0; i < n; ++i) c[i] *= fvals[j];
    }
    DenseMatrix f_of_a = symmetrize(matmul_nt(scaled, dec.eigenvectors));
    if (need_dense_f) out.f_of_a_dense = f_of_a;
    out.ref = ExactReference::from_dense(std::move(f_of_a), std::move(fvals));
    return out;
}

struct MethodRun {
    LowRankApprox approx;
    int64_t analytic_matvecs = 0;
};

MethodRun dispatch_method(const std::string& method, const ExperimentConfig& cfg,
                          const MatVecOperator& op, const ReferenceBundle& bundle,
                          const DenseMatrix& omega, const DenseMatrix& omega_vec, int s, int r) {
    MethodRun run;
    const int l = cfg.l;
    if (method == "rand_svd_exact") {
        run.approx = rand_svd_exact(*bundle.f_of_a_dense, cfg.k, omega);
        run.analytic_matvecs = 2 * l;
    } else if (method == "rand_svd_matfun") {
        if (r < 1) throw ValidationError("rand_svd_matfun needs r >= 1 in the budget schedule");
        run.approx = rand_svd_matfun(op, cfg.function, cfg.k, omega, s, r);
        run.analytic_matvecs = static_cast<int64_t>(s + r) * l;
    } else if (method == "krylov_aware") {
        run.approx = krylov_aware(op, cfg.function, cfg.k, omega, s, r);
        run.analytic_matvecs = static_cast<int64_t>(s + r) * l;
    } else if (method == "krylov_aware_direct") {
        run.approx = krylov_aware(op, cfg.function, cfg.k, omega, s + r, 0);
        run.analytic_matvecs = static_cast<int64_t>(s + r) * l;
    } else if (method == "single_vector") {
        // matched budget: k + s' + r' = l(s+r), basis dimension k + s' = half
        const int64_t budget = static_cast<int64_t>(l) * (s + r);
        if (budget < cfg.k)
            throw ValidationError("single_vector: budget " + std::to_string(budget) +
                                  " below rank k = " + std::to_string(cfg.k));
        const int shat = static_cast<int>(std::max(int64_t{0}, budget / 2 - cfg.k));
        const int rhat = static_cast<int>(budget - cfg.k - shat);
        run.approx = single_vector_krylov_aware(op, cfg.function, cfg.k, omega_vec, shat, rhat);
        run.analytic_matvecs = budget;
    } else {
        throw ValidationError("unknown method '" + method + "'");
    }
    return run;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("run_experiment: cannot write " + path);
    out << "method,s,r,l,k,matvecs,trial,rel_error,optimal_rank_k_error,wall_time_ms,status\n";
    for (const ResultRow& row : rows) {
        out << row.method << ',' << row.s << ',' << row.r << ',' << row.l << ',' << row.k << ','
            << row.matvecs << ',' << row.trial << ',' << fmt17(row.rel_error) << ','
            << fmt17(row.optimal_rank_k_error) << ',' << row.wall_time_ms << ','
            << sanitize(row.status) << '\n';
    }
}

json config_echo(const ExperimentConfig& cfg) {
    json op;
    switch (cfg.op_kind) {
        case ExperimentConfig::OpKind::laplacian2d:
            op = {{"type", "laplacian2d"}, {"grid", cfg.grid}, {"kappa", cfg.kappa},
                  {"lambda", cfg.lambda}};
            break;
        case ExperimentConfig::OpKind::spin_chain:
            op = {{"type", "spin_chain"}, {"sites", cfg.sites}, {"h", cfg.field_h}};
            break;
        case ExperimentConfig::OpKind::synthetic:
            if (!cfg.eigenvalues.empty()) {
                op = {{"type", "synthetic"}, {"eigenvalues", cfg.eigenvalues}};
            } else {
                op = {{"type", "synthetic"}, {"spectrum", cfg.spectrum_kind},
                      {"n", cfg.spectrum_n}, {"scale", cfg.spectrum_scale},
                      {"rate", cfg.spectrum_rate}};
            }
            break;
        case ExperimentConfig::OpKind::matrix_market:
            op = {{"type", "matrix_market"}, {"path", cfg.mm_path}};
            break;
    }
    json fn;
    switch (cfg.function.kind()) {
        case ScalarFunction::Kind::identity:
            fn = {{"kind", "identity"}};
            break;
        case ScalarFunction::Kind::exp_scaled:
            fn = {{"kind", "exp_scaled"}, {"t", cfg.function.scale()}};
            break;
        case ScalarFunction::Kind::log:
            fn = {{"kind", "log"}};
            break;
        case ScalarFunction::Kind::polynomial:
            fn = {{"kind", "polynomial"}, {"coeffs", cfg.function.coeffs()}};
            break;
        case ScalarFunction::Kind::power_series:
            fn = {{"kind", "power_series"}, {"coeffs", cfg.function.coeffs()}};
            break;
    }
    json schedule = json::array();
    for (const BudgetPoint& b : cfg.schedule) schedule.push_back({{"s", b.s}, {"r", b.r}});
    json bounds = json::array();
    for (const BoundRequest& b : cfg.bounds) {
        json e = {{"kind", bound_kind_name(b.kind)}};
        if (b.delta) e["delta"] = *b.delta;
        bounds.push_back(e);
    }
    return json{{"operator", op},   {"function", fn},       {"k", cfg.k},
                {"l", cfg.l},       {"budget_schedule", schedule}, {"trials", cfg.trials},
                {"seed", cfg.seed}, {"methods", cfg.methods},      {"bounds", bounds},
                {"dense_cap", cfg.dense_cap}};
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    MatVecOperator op = build_operator(cfg);
    const int n = static_cast<int>(op.dim());
    const bool need_dense_f =
        std::find(cfg.methods.begin(), cfg.methods.end(), "rand_svd_exact") != cfg.methods.end();
    ReferenceBundle bundle = build_reference(cfg, op, need_dense_f);
    const double opt_err = bundle.ref.optimal_rank_error(cfg.k);

    std::vector<std::vector<ResultRow>> per_trial(cfg.trials);
    std::vector<uint64_t> omega_hashes(cfg.trials, 0);

    auto run_trial = [&](int trial) {
        std::vector<ResultRow> rows;
        RngStream block_rng(cfg.seed, 2 * static_cast<uint64_t>(trial));
        DenseMatrix omega = gaussian_matrix(n, cfg.l, block_rng);
        RngStream vec_rng(cfg.seed, 2 * static_cast<uint64_t>(trial) + 1);
        DenseMatrix omega_vec = gaussian_matrix(n, 1, vec_rng);
        omega_hashes[trial] = matrix_hash(omega);
        for (const BudgetPoint& budget : cfg.schedule) {
            for (const std::string& method : cfg.methods) {
                ResultRow base;
                base.s = budget.s;
                base.r = budget.r;
                base.l = cfg.l;
                base.k = cfg.k;
                base.trial = trial;
                base.optimal_rank_k_error = opt_err;
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    MethodRun run = dispatch_method(method, cfg, op, bundle, omega, omega_vec,
                                                    budget.s, budget.r);
                    const auto t1 = std::chrono::steady_clock::now();
                    base.wall_time_ms =
                        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
                    base.matvecs = run.analytic_matvecs;

                    ResultRow full = base;
                    full.method = run.approx.method_tag;
                    full.rel_error = approx_error(run.approx, bundle.ref);
                    rows.push_back(full);

                    ResultRow trunc = base;
                    trunc.method = run.approx.method_tag + "_k";
                    try {
                        LowRankApprox tk = truncate_approx(run.approx, cfg.k);
                        trunc.rel_error = approx_error(tk, bundle.ref);
                    } catch (const Error& e) {
                        trunc.rel_error = std::nan("");
                        trunc.status = e.what();
                    }
                    rows.push_back(trunc);
                } catch (const Error& e) {
                    const auto t1 = std::chrono::steady_clock::now();
                    base.wall_time_ms =
                        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
                    base.method = method;
                    base.rel_error = std::nan("");
                    base.status = e.what();
                    rows.push_back(base);
                }
            }
        }
        per_trial[trial] = std::move(rows);
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>({hw, static_cast<unsigned>(cfg.trials), 16u});
    if (workers <= 1) {
        for (int t = 0; t < cfg.trials; ++t) run_trial(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                int t;
                while ((t = next.fetch_add(1)) < cfg.trials) run_trial(t);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    std::vector<ResultRow> rows;
    for (auto& tr : per_trial) rows.insert(rows.end(), tr.begin(), tr.end());
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.method != b.method) return a.method < b.method;
        if (a.s != b.s) return a.s < b.s;
        if (a.r != b.r) return a.r < b.r;
        return a.trial < b.trial;
    });

    ExperimentSummary summary;
    summary.rows = static_cast<int>(rows.size());
    for (const ResultRow& row : rows)
        if (row.status != "ok") ++summary.failures;

    summary.results_csv = (fs::path(out_dir) / "results.csv").string();
    write_results_csv(summary.results_csv, rows);

    if (!cfg.bounds.empty()) {
        summary.bounds_csv = (fs::path(out_dir) / "bounds.csv").string();
        std::ofstream bout(summary.bounds_csv);
        if (!bout) throw ValidationError("run_experiment: cannot write " + summary.bounds_csv);
        bout << "bound,k,l,s,r,delta,value,components\n";
        SpectrumSplit split(bundle.a_eigenvalues, cfg.k, cfg.function);
        for (const BoundRequest& req : cfg.bounds) {
            for (const BudgetPoint& budget : cfg.schedule) {
                bout << bound_kind_name(req.kind) << ',' << cfg.k << ',' << cfg.l << ','
                     << budget.s << ',' << budget.r << ','
                     << (req.delta ? fmt17(*req.delta) : "") << ',';
                try {
                    BoundReport rep =
                        assemble_bound(req.kind, split, cfg.l, budget.s, budget.r, req.delta);
                    bout << fmt17(rep.value) << ',';
                    bool first = true;
                    for (const auto& [name, val] : rep.components) {
                        if (!first) bout << ';';
                        bout << name << '=' << fmt17(val);
                        first = false;
                    }
                    bout << '\n';
                } catch (const Error& e) {
                    bout << "nan," << sanitize(e.what()) << '\n';
                }
            }
        }
    }

    {
        json meta;
        meta["config"] = config_echo(cfg);
        meta["git_describe"] = git_describe();
        meta["seed"] = cfg.seed;
        meta["operator_dim"] = op.dim();
        meta["rng"] = "splitmix64-counter/box-muller; trial t draws sketch from stream 2t, "
                      "single-vector probe from stream 2t+1";
        json hashes = json::array();
        for (uint64_t h : omega_hashes) hashes.push_back(h);
        meta["omega_hash_per_trial"] = hashes;
        summary.meta_json = (fs::path(out_dir) / "meta.json").string();
        std::ofstream mout(summary.meta_json);
        mout << meta.dump(2) << '\n';
    }

    summary.plot_csv = (fs::path(out_dir) / "plot_data.csv").string();
    emit_plotdata(summary.results_csv, summary.plot_csv);
    return summary;
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("results csv: cannot open " + path);
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw ParseError("results csv: empty file", 1);
    ++lineno;
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) parts.push_back(field);
        if (parts.size() != 11)
            throw ParseError("results csv: expected 11 fields, got " +
                                 std::to_string(parts.size()),
                             lineno);
        try {
            ResultRow row;
            row.method = parts[0];
            row.s = std::stoi(parts[1]);
            row.r = std::stoi(parts[2]);
            row.l = std::stoi(parts[3]);
            row.k = std::stoi(parts[4]);
            row.matvecs = std::stoll(parts[5]);
            row.trial = std::stoi(parts[6]);
            row.rel_error = std::stod(parts[7]);
            row.optimal_rank_k_error = std::stod(parts[8]);
            row.wall_time_ms = std::stoll(parts[9]);
            row.status = parts[10];
            rows.push_back(std::move(row));
        } catch (const std::exception&) {
            throw ParseError("results csv: malformed row", lineno);
        }
    }
    return rows;
}

void emit_plotdata(const std::string& results_csv, const std::string& out_path) {
    std::vector<ResultRow> rows = read_results_csv(results_csv);
    struct Agg {
        double sum = 0.0, lo = 0.0, hi = 0.0;
        int count = 0;
    };
    std::map<std::pair<std::string, int64_t>, Agg> agg;
    std::optional<double> optimal;
    for (const ResultRow& row : rows) {
        if (row.status != "ok" || std::isnan(row.rel_error)) continue;
        Agg& a = agg[{row.method, row.matvecs}];
        if (a.count == 0) {
            a.lo = a.hi = row.rel_error;
        } else {
            a.lo = std::min(a.lo, row.rel_error);
            a.hi = std::max(a.hi, row.rel_error);
        }
        a.sum += row.rel_error;
        ++a.count;
        if (!optimal) optimal = row.optimal_rank_k_error;
    }
    std::ofstream out(out_path);
    if (!out) throw ValidationError("emit_plotdata: cannot write " + out_path);
    out << "series,matvecs,mean_error,min_error,max_error\n";
    for (const auto& [key, a] : agg) {
        out << key.first << ',' << key.second << ',' << fmt17(a.sum / a.count) << ','
            << fmt17(a.lo) << ',' << fmt17(a.hi) << '\n';
    }
    if (optimal)
        out << "optimal_rank_k,0," << fmt17(*optimal) << ',' << fmt17(*optimal) << ','
            << fmt17(*optimal) << '\n';
}

}  // namespace krylow
