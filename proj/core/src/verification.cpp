#include "krylow/verification.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>

#include "krylow/block_lanczos.hpp"
#include "krylow/bounds.hpp"
#include "krylow/errors.hpp"
#include "krylow/experiment.hpp"
#include "krylow/lowrank.hpp"
#include "krylow/matrix_market.hpp"
#include "krylow/probe.hpp"
#include "krylow/spectrum.hpp"

namespace krylow {

namespace {

struct Harness {
    std::vector<CheckResult> results;

    void check(const std::string& name, const std::function<CheckResult()>& fn) {
        CheckResult r;
        r.name = name;
        try {
            r = fn();
            r.name = name;
        } catch (const std::exception& e) {
            r.pass = false;
            r.slack = -1.0;
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    }
};

CheckResult pass_if(double measured, double bound, const std::string& detail = "") {
    CheckResult r;
    r.slack = bound - measured;
    r.pass = measured <= bound;
    std::ostringstream os;
    os << "measured=" << measured << " bound=" << bound;
    if (!detail.empty()) os << " " << detail;
    r.detail = os.str();
    return r;
}

// |f|-descending reordering of an ascending eigendecomposition, consistent
// with SpectrumSplit's ordering.
void sort_by_f_desc(std::vector<double>& eigs, DenseMatrix& v, const ScalarFunction& f) {
    const int n = static_cast<int>(eigs.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<double> mag(n);
    for (int i = 0; i < n; ++i) mag[i] = std::abs(f(eigs[i]));
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return mag[a] > mag[b]; });
    std::vector<double> es(n);
    DenseMatrix vs(v.rows(), v.cols());
    for (int i = 0; i < n; ++i) {
        es[i] = eigs[idx[i]];
        std::copy(v.col(idx[i]), v.col(idx[i]) + v.rows(), vs.col(i));
    }
    eigs = std::move(es);
    v = std::move(vs);
}

struct StructuralInstance {
    MatVecOperator op;
    ScalarFunction f;
    int k;
    int l;
    int s;
};

// One structural-bound trial: exact-projection truncated error^2 vs
// tail^2 + 5 * best registered E_Omega candidate.
CheckResult structural_trial(const StructuralInstance& inst, RngStream& rng) {
    const int n = static_cast<int>(inst.op.dim());
    DenseMatrix a = symmetrize(inst.op.materialize());
    SpectralDecomposition dec = sym_eig(a);
    std::vector<double> eigs = dec.eigenvalues;
    DenseMatrix u = dec.eigenvectors;
    sort_by_f_desc(eigs, u, inst.f);
    SpectrumSplit split(eigs, inst.k, inst.f);

    DenseMatrix fa = apply_matfun(a, inst.f);
    DenseMatrix omega = gaussian_matrix(n, inst.l, rng);
    BlockLanczosResult lan = block_lanczos(inst.op, omega, inst.s);
    const DenseMatrix& q = lan.q_basis;

    DenseMatrix proj = symmetrize(matmul_tn(q, matmul(fa, q)));
    DenseMatrix approx = matmul(q, matmul_nt(truncate_sym(proj, inst.k), q));
    const double err_sq = frob_norm_sq(fa - approx);

    DenseMatrix uo = matmul_tn(u, omega);
    DenseMatrix omega_k = block(uo, 0, inst.k, 0, inst.l);
    DenseMatrix omega_tail = block(uo, inst.k, n, 0, inst.l);
    double best = std::numeric_limits<double>::infinity();
    for (const PolyCandidate& p : registered_candidates(split, inst.s))
        best = std::min(best, E_omega_candidate(split, p, omega_k, omega_tail));
    const double tail_sq = std::exp(split.log_tail_norm_sq());
    const double rhs = tail_sq + 5.0 * best;
    return pass_if(err_sq, rhs * (1.0 + 1e-9) + 1e-12, inst.op.label());
}

std::string fixture_graph(int n) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "krylow-verify";
    fs::create_directories(dir);
    const fs::path p = dir / ("path" + std::to_string(n) + ".mtx");
    std::vector<std::pair<int64_t, int64_t>> edges;
    for (int i = 1; i < n; ++i) edges.push_back({i, i + 1});
    write_matrix_market_pattern(p.string(), n, edges);
    return p.string();
}

double err_of(const MatVecOperator& op, const ScalarFunction& f, const LowRankApprox& approx) {
    return approx_error(approx, exact_matfun_reference(op, f));
}

void fast_checks(Harness& h) {
    h.check("linalg.sym_eig_reconstruct", [] {
        RngStream rng(101, 0);
        DenseMatrix m = random_symmetric(60, rng);
        double worst = 0.0;
        for (EigMethod method : {EigMethod::jacobi, EigMethod::tridiagonal_ql}) {
            SpectralDecomposition dec = sym_eig(m, method);
            DenseMatrix scaled = dec.eigenvectors;
            for (int j = 0; j < 60; ++j)
                for (int i = 0; i < 60; ++i) scaled(i, j) *= dec.eigenvalues[j];
            worst = std::max(worst, frob_norm(m - matmul_nt(scaled, dec.eigenvectors)));
            worst = std::max(
                worst, frob_norm(matmul_tn(dec.eigenvectors, dec.eigenvectors) -
                                 DenseMatrix::identity(60)));
        }
        return pass_if(worst, 60 * 1e-10 * std::max(1.0, frob_norm(m)));
    });

    h.check("linalg.matfun_horner_crosspath", [] {
        RngStream rng(102, 0);
        DenseMatrix m = 0.3 * random_symmetric(40, rng);
        std::vector<double> coeffs = {0.7, -1.2, 0.4, 0.05, -0.3};
        DenseMatrix via_eig = apply_matfun(m, ScalarFunction::polynomial(coeffs));
        DenseMatrix horner = DenseMatrix::zeros(40, 40);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            horner = matmul(horner, m);
            for (int i = 0; i < 40; ++i) horner(i, i) += *it;
        }
        return pass_if(frob_norm(via_eig - horner), 1e-9 * std::max(1.0, frob_norm(horner)));
    });

    h.check("linalg.truncate_tail_norm", [] {
        RngStream rng(103, 0);
        DenseMatrix x = random_symmetric(30, rng);
        const int k = 5;
        DenseMatrix xk = truncate_sym(x, k);
        std::vector<double> eigs = sym_eigvals(x);
        std::sort(eigs.begin(), eigs.end(),
                  [](double a, double b) { return std::abs(a) > std::abs(b); });
        double disc = 0.0;
        for (size_t i = k; i < eigs.size(); ++i) disc += eigs[i] * eigs[i];
        disc = std::sqrt(disc);
        return pass_if(std::abs(frob_norm(x - xk) - disc), 1e-10 * disc);
    });

    h.check("linalg.orth_idempotent", [] {
        RngStream rng(104, 0);
        DenseMatrix v = random_orthonormal(40, 10, rng);
        OrthResult o = orth_basis(v);
        double worst = 0.0;
        for (int j = 0; j < 10; ++j) {
            double d_plus = 0.0, d_minus = 0.0;
            for (int i = 0; i < 40; ++i) {
                d_plus = std::max(d_plus, std::abs(o.v(i, j) - v(i, j)));
                d_minus = std::max(d_minus, std::abs(o.v(i, j) + v(i, j)));
            }
            worst = std::max(worst, std::min(d_plus, d_minus));
        }
        return pass_if(worst, 1e-12, "column sign freedom allowed");
    });

    h.check("rng.determinism", [] {
        RngStream a(42, 7), b(42, 7);
        DenseMatrix ma = gaussian_matrix(100, 7, a);
        DenseMatrix mb = gaussian_matrix(100, 7, b);
        CheckResult r = pass_if(ma == mb ? 0.0 : 1.0, 0.0, "bitwise replay");
        return r;
    });

    h.check("rng.moments", [] {
        RngStream rng(2024, 3);
        const int n = 1000000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = rng.normal();
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / n;
        const double var = sumsq / n - mean * mean;
        return pass_if(std::max(std::abs(mean), std::abs(var - 1.0)), 5e-3);
    });

    h.check("operators.probes", [] {
        RngStream rng(105, 0);
        std::vector<MatVecOperator> ops;
        ops.push_back(laplacian2d_operator(8, 0.01, 1.0));
        ops.push_back(spin_chain_operator(6, 10.0));
        ops.push_back(synthetic_spectrum_operator(log_decay_spectrum(64)));
        ops.push_back(adjacency_from_matrix_market(fixture_graph(16)));
        double worst = 0.0;
        for (const MatVecOperator& op : ops) {
            worst = std::max(worst, linearity_slack(op, 20, rng));
            worst = std::max(worst, symmetry_slack(op, 20, rng));
        }
        return pass_if(worst, 1e-10);
    });

    h.check("operators.block_columnwise_exact", [] {
        RngStream rng(106, 0);
        MatVecOperator op = spin_chain_operator(7, 10.0);
        DenseMatrix x = gaussian_matrix(128, 5, rng);
        DenseMatrix block_apply = op.apply_block(x);
        double worst = 0.0;
        for (int j = 0; j < 5; ++j) {
            DenseMatrix cv = block(x, 0, 128, j, j + 1);
            DenseMatrix single = op.apply_block(cv);
            for (int i = 0; i < 128; ++i)
                worst = std::max(worst, std::abs(single(i, 0) - block_apply(i, j)));
        }
        return pass_if(worst, 0.0, "bitwise column equivalence");
    });

    h.check("operators.shift_invariant_span", [] {
        RngStream rng(107, 0);
        MatVecOperator op = laplacian2d_operator(8, 0.01, 1.0);
        DenseMatrix omega = gaussian_matrix(static_cast<int>(op.dim()), 3, rng);
        BlockLanczosResult plain = block_lanczos(op, omega, 5);
        double worst = 0.0;
        for (double c : {-2.0, 3.5}) {
            BlockLanczosResult shifted = block_lanczos(shifted_operator(op, c), omega, 5);
            worst = std::max(worst, max_principal_angle(plain.q_basis, shifted.q_basis));
        }
        return pass_if(worst, 1e-8);
    });

    h.check("lanczos.polynomial_exactness", [] {
        RngStream rng(108, 0);
        double worst = 0.0;
        for (int inst = 0; inst < 10; ++inst) {
            const int n = 20 + static_cast<int>(rng.uniform() * 60);
            const int l = 1 + static_cast<int>(rng.uniform() * 3);
            const int s = 2 + static_cast<int>(rng.uniform() * 4);
            MatVecOperator op = dense_operator(random_symmetric(n, rng));
            DenseMatrix omega = gaussian_matrix(n, l, rng);
            BlockLanczosResult res = block_lanczos(op, omega, s);

            std::vector<double> coeffs(s);
            for (double& c : coeffs) c = 2.0 * rng.uniform() - 1.0;
            ScalarFunction p = ScalarFunction::polynomial(coeffs);
            DenseMatrix direct = omega;
            DenseMatrix acc = DenseMatrix::zeros(n, l);
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
                acc = op.apply_block(acc);
                acc = acc + *it * direct;
            }
            const double denom = std::max(1e-12, frob_norm(acc));
            worst = std::max(worst, frob_norm(lanczos_fom(res, p) - acc) / denom);

            std::vector<double> qc(2 * s);
            for (double& c : qc) c = 2.0 * rng.uniform() - 1.0;
            ScalarFunction pq = ScalarFunction::polynomial(qc);
            DenseMatrix acc2 = DenseMatrix::zeros(n, l);
            for (auto it = qc.rbegin(); it != qc.rend(); ++it) {
                acc2 = op.apply_block(acc2);
                acc2 = acc2 + *it * omega;
            }
            DenseMatrix qf_direct = matmul_tn(omega, acc2);
            const double denom2 = std::max(1e-12, frob_norm(qf_direct));
            worst = std::max(worst,
                             frob_norm(lanczos_quadform(res, pq) - qf_direct) / denom2);
        }
        return pass_if(worst, 1e-8);
    });

    h.check("lanczos.krylov_nesting", [] {
        RngStream rng(109, 0);
        double worst = 0.0;
        for (int inst = 0; inst < 5; ++inst) {
            MatVecOperator op = spin_chain_operator(6, 10.0);
            DenseMatrix omega = gaussian_matrix(64, 2, rng);
            BlockLanczosResult fresh = block_lanczos(op, omega, 5);
            BlockLanczosResult stepped = extend_lanczos(block_lanczos(op, omega, 3), op, 2);
            worst = std::max(worst, max_principal_angle(fresh.q_basis, stepped.q_basis));
        }
        return pass_if(worst, 1e-8);
    });

    h.check("lanczos.quadform_error_bound", [] {
        RngStream rng(110, 0);
        MatVecOperator op = dense_operator(random_symmetric_with_spectrum(
            exp_decay_spectrum(80, 2.0, 0.05), rng));
        ScalarFunction f = ScalarFunction::exp_scaled(1.0);
        DenseMatrix fa = exact_matfun_reference(op, f);
        double worst_excess = 0.0;
        const int l = 4;
        for (int s = 2; s <= 4; ++s) {
            for (int r = 1; r <= 3; ++r) {
                DenseMatrix omega = gaussian_matrix(80, l, rng);
                BlockLanczosResult res = block_lanczos(op, omega, s + r);
                auto [qs, d] = leading_principal(res, s);
                DenseMatrix ft = apply_matfun(res.t_proj, f);
                DenseMatrix lhs = matmul_tn(qs, matmul(fa, qs)) - block(ft, 0, d, 0, d);
                std::vector<double> eigs = sym_eigvals(op.materialize());
                const double bound = 2.0 * std::sqrt(static_cast<double>(l) * s) *
                                     poly_err_exp(r, eigs.front(), eigs.back()) *
                                     std::exp(eigs.back());
                worst_excess = std::max(worst_excess, frob_norm(lhs) - bound);
            }
        }
        return pass_if(worst_excess, 0.0, "lhs minus 2*sqrt(ls)*E_poly bound");
    });

    h.check("lanczos.reorth_quality_clustered", [] {
        RngStream rng(111, 0);
        MatVecOperator op = synthetic_spectrum_operator(log_decay_spectrum(150));
        DenseMatrix omega = gaussian_matrix(150, 1, rng);
        BlockLanczosResult res = block_lanczos(op, omega, 100);
        const int d = res.total_dim();
        const double loss = frob_norm(matmul_tn(res.q_basis, res.q_basis) -
                                      DenseMatrix::identity(d));
        return pass_if(loss, d * 1e-10, "q=100 on clustered log spectrum, d=" + std::to_string(d));
    });

    h.check("lowrank.optimal_floor_and_dominance", [] {
        RngStream rng(112, 0);
        MatVecOperator op = dense_operator(
            random_symmetric_with_spectrum(exp_decay_spectrum(90, 3.0, 0.12), rng));
        ScalarFunction f = ScalarFunction::exp_scaled(1.0);
        ExactReference ref = ExactReference::from_dense(exact_matfun_reference(op, f));
        const int k = 6;
        double worst = -1e300;
        bool floor_ok = true, dom_ok = true;
        for (int trial = 0; trial < 5; ++trial) {
            LowRankApprox full = krylov_aware(op, f, k, 8, 4, 3, rng);
            LowRankApprox trunc = truncate_approx(full, k);
            const double e_full = approx_error(full, ref);
            const double e_trunc = approx_error(trunc, ref);
            const double floor = ref.optimal_rank_error(k);
            floor_ok = floor_ok && e_trunc >= (1.0 - 1e-10) * floor;
            dom_ok = dom_ok && e_full <= e_trunc + 1e-12;
            worst = std::max(worst, floor * (1.0 - 1e-10) - e_trunc);
        }
        CheckResult r = pass_if(worst, 0.0, "floor slack");
        r.pass = floor_ok && dom_ok;
        return r;
    });

    h.check("lowrank.robustness_and_pythagoras", [] {
        RngStream rng(113, 0);
        double worst = 0.0;
        for (int inst = 0; inst < 20; ++inst) {
            const int n = 20 + static_cast<int>(rng.uniform() * 40);
            const int d = 5 + static_cast<int>(rng.uniform() * 6);
            const int k = 1 + static_cast<int>(rng.uniform() * 4);
            DenseMatrix fa = random_symmetric(n, rng);
            DenseMatrix q = random_orthonormal(n, d, rng);
            DenseMatrix p = symmetrize(matmul_tn(q, matmul(fa, q)));
            DenseMatrix e = std::pow(10.0, -3.0 * rng.uniform()) * random_symmetric(d, rng);
            DenseMatrix x = p + e;

            const double lhs = frob_norm(fa - matmul(q, matmul_nt(truncate_sym(x, k), q)));
            const double rhs = frob_norm(fa - matmul(q, matmul_nt(truncate_sym(p, k), q))) +
                               2.0 * frob_norm(e);
            worst = std::max(worst, lhs - rhs);

            const double lhs_sq = frob_norm_sq(fa - matmul(q, matmul_nt(x, q)));
            const double rhs_sq = frob_norm_sq(fa - matmul(q, matmul_nt(p, q))) + frob_norm_sq(e);
            worst = std::max(worst, std::abs(lhs_sq - rhs_sq) / std::max(1.0, rhs_sq) - 1e-8);
        }
        return pass_if(worst, 1e-9, "theorem slack and pythagoras residual");
    });

    h.check("lowrank.exp_shift_covariance", [] {
        RngStream seed_rng(114, 0);
        MatVecOperator op = dense_operator(
            random_symmetric_with_spectrum(exp_decay_spectrum(100, 4.0, 0.1), seed_rng));
        ScalarFunction f = ScalarFunction::exp_scaled(1.0);
        DenseMatrix fa = exact_matfun_reference(op, f);
        RngStream omega_rng(114, 1);
        DenseMatrix omega = gaussian_matrix(100, 5, omega_rng);
        const int k = 5;
        std::vector<double> errs;
        for (double c : {0.0, -5.0, 5.0}) {
            MatVecOperator sop = c == 0.0 ? op : shifted_operator(op, c);
            LowRankApprox approx = truncate_approx(krylov_aware(sop, f, k, omega, 3, 3), k);
            DenseMatrix ref = std::exp(-c) * fa;
            errs.push_back(approx_error(approx, ref));
        }
        const double spread = std::max(std::abs(errs[1] - errs[0]), std::abs(errs[2] - errs[0]));
        return pass_if(spread, 1e-10, "rel errors across shifts {0,-5,5}");
    });

    h.check("lowrank.cor32_ordering_with_slack", [] {
        RngStream rng(118, 0);
        MatVecOperator op = dense_operator(
            random_symmetric_with_spectrum(exp_decay_spectrum(90, 3.0, 0.08), rng));
        ScalarFunction f = ScalarFunction::exp_scaled(1.0);
        DenseMatrix fa = exact_matfun_reference(op, f);
        ExactReference ref = ExactReference::from_dense(fa);
        std::vector<double> eigs = sym_eigvals(op.materialize());
        const double fa_norm = frob_norm(fa);
        const int k = 5, l = 7;
        double worst = -1e300;
        for (int trial = 0; trial < 6; ++trial) {
            DenseMatrix omega = gaussian_matrix(90, l, rng);
            for (int s : {2, 3}) {
                for (int r : {2, 3}) {
                    const double ka = approx_error(
                        truncate_approx(krylov_aware(op, f, k, omega, s, r), k), ref);
                    const double rs = approx_error(
                        truncate_approx(rand_svd_matfun(op, f, k, omega, s, r), k), ref);
                    const double slack = 4.0 * std::sqrt(static_cast<double>(l) * s) *
                                         poly_err_exp(r, eigs.front(), eigs.back()) *
                                         std::exp(eigs.back()) / fa_norm;
                    worst = std::max(worst, ka - (rs + slack));
                }
            }
        }
        return pass_if(worst, 1e-10, "truncated kA error minus (randSVD error + poly slack)");
    });

    h.check("lowrank.streaming_error_identity", [] {
        RngStream rng(115, 0);
        DenseMatrix fa = random_symmetric(50, rng);
        DenseMatrix q = random_orthonormal(50, 8, rng);
        DenseMatrix x = random_symmetric(8, rng);
        LowRankApprox approx{q, x, std::nullopt, "synthetic", 0};
        const double streaming = approx_error(approx, ExactReference::from_dense(fa));
        const double dense = frob_norm(fa - approx.assemble()) / frob_norm(fa);
        return pass_if(std::abs(streaming - dense), 1e-10);
    });

    h.check("bounds.chebyshev_crosscheck", [] {
        double worst = 0.0;
        for (int m : {0, 1, 2, 5, 10, 17}) {
            for (double x : {1.0, 1.3, 2.7, -1.9, 40.0}) {
                if (std::abs(x) < 1.0) continue;
                const double rec = chebyshev(m, x);
                const double closed = chebyshev_closed_form(m, x);
                worst = std::max(worst, std::abs(rec - closed) / std::max(1.0, std::abs(closed)));
                const double lg = chebyshev_log_abs(m, x);
                worst = std::max(worst,
                                 std::abs(lg - std::log(std::abs(rec))) / std::max(1.0, std::abs(lg)));
            }
        }
        return pass_if(worst, 1e-10);
    });

    h.check("bounds.report_recombination", [] {
        SpectrumSplit split(exp_decay_spectrum(200, 4.0, 0.04), 10,
                            ScalarFunction::exp_scaled(1.0));
        double worst = 0.0;
        for (BoundKind kind : {BoundKind::thm35_tail, BoundKind::thm35_expectation,
                               BoundKind::cor41, BoundKind::cor42}) {
            std::optional<double> delta;
            if (kind == BoundKind::thm35_tail) delta = 0.1;
            BoundReport rep = assemble_bound(kind, split, 22, 15, 10, delta);
            worst = std::max(worst, std::abs(rep.value - rep.recombine()) /
                                        std::max(1e-300, std::abs(rep.value)));
        }
        BoundReport rep51 = assemble_bound(BoundKind::thm51, split, 1, 15, 10, 0.1);
        worst = std::max(worst, std::abs(rep51.value - rep51.recombine()) /
                                    std::max(1e-300, std::abs(rep51.value)));
        return pass_if(worst, 1e-12);
    });

    h.check("bounds.structural_bound", [] {
        RngStream rng(116, 0);
        double worst = -1e300;
        std::vector<StructuralInstance> instances;
        instances.push_back({laplacian2d_operator(10, 0.01, 1.0),
                             ScalarFunction::exp_scaled(1.0), 5, 8, 6});
        instances.push_back({synthetic_spectrum_operator(log_decay_spectrum(100)),
                             ScalarFunction::log(), 5, 8, 8});
        for (const StructuralInstance& inst : instances) {
            for (int t = 0; t < 4; ++t) {
                CheckResult r = structural_trial(inst, rng);
                worst = std::max(worst, -r.slack);
            }
        }
        return pass_if(worst, 0.0, "max violation over trials");
    });

    h.check("harness.budget_ledger", [] {
        RngStream rng(117, 0);
        MatVecOperator op = synthetic_spectrum_operator(exp_decay_spectrum(300, 2.0, 0.01));
        op.reset_matvec_count();
        const int l = 6, s = 4, r = 3;
        krylov_aware(op, ScalarFunction::exp_scaled(1.0), 4, l, s, r, rng);
        const int64_t used = op.matvec_count();
        const int64_t analytic = static_cast<int64_t>(l) * (s + r);
        return pass_if(std::abs(static_cast<double>(used - analytic)), 0.0,
                       "instrumented=" + std::to_string(used) +
                           " analytic=" + std::to_string(analytic));
    });

    h.check("harness.coupled_omega_hash", [] {
        RngStream a(9001, 4), b(9001, 4);
        const uint64_t ha = matrix_hash(gaussian_matrix(64, 5, a));
        const uint64_t hb = matrix_hash(gaussian_matrix(64, 5, b));
        RngStream c(9001, 6);
        const uint64_t hc = matrix_hash(gaussian_matrix(64, 5, c));
        return pass_if((ha == hb && ha != hc) ? 0.0 : 1.0, 0.0,
                       "same stream agrees, distinct stream differs");
    });

    h.check("harness.determinism_csv", [] {
        const std::string cfg_text = R"({
            "operator": {"type": "synthetic", "spectrum": "exp_decay", "n": 120, "scale": 3.0, "rate": 0.1},
            "function": {"kind": "exp", "t": 1.0},
            "k": 4, "l": 6, "s_equals_r": [2, 3], "trials": 3, "seed": 77,
            "methods": ["krylov_aware", "rand_svd_matfun"]
        })";
        ExperimentConfig cfg = parse_config_text(cfg_text, "<inline>");
        namespace fs = std::filesystem;
        const fs::path base =
            fs::temp_directory_path() / ("krylow-verify-" + std::to_string(getpid()));
        auto strip_wall_time = [](const std::string& path) {
            std::ifstream in(path);
            std::stringstream out;
            std::string line;
            while (std::getline(in, line)) {
                // drop the wall_time_ms field (10th of 11)
                std::vector<std::string> parts;
                std::stringstream ss(line);
                std::string f;
                while (std::getline(ss, f, ',')) parts.push_back(f);
                for (size_t i = 0; i < parts.size(); ++i)
                    if (i != 9) out << parts[i] << ',';
                out << '\n';
            }
            return out.str();
        };
        run_experiment(cfg, (base / "det1").string());
        run_experiment(cfg, (base / "det2").string());
        const bool same = strip_wall_time((base / "det1" / "results.csv").string()) ==
                          strip_wall_time((base / "det2" / "results.csv").string());
        return pass_if(same ? 0.0 : 1.0, 0.0, "results.csv identical modulo wall_time_ms");
    });
}

void full_checks(Harness& h) {
    h.check("rng.stream_independence", [] {
        RngStream a(555, 1), b(555, 2);
        const int n = 1000000;
        double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = a.normal(), y = b.normal();
            sx += x;
            sy += y;
            sxy += x * y;
            sxx += x * x;
            syy += y * y;
        }
        const double cov = sxy / n - (sx / n) * (sy / n);
        const double vx = sxx / n - (sx / n) * (sx / n);
        const double vy = syy / n - (sy / n) * (sy / n);
        return pass_if(std::abs(cov / std::sqrt(vx * vy)), 5e-3);
    });

    h.check("bounds.E_omega_expectation_mc", [] {
        const int n = 150, k = 6, l = 10, s = 8;
        SpectrumSplit split(exp_decay_spectrum(n, 3.0, 0.05), k, ScalarFunction::exp_scaled(1.0));
        EUpperResult eu = E_upper(split, s);
        PolyCandidate best = [&] {
            for (const PolyCandidate& p : registered_candidates(split, s))
                if (p.kind_name() == eu.argmin_kind) return p;
            throw NumericalError("candidate lookup failed");
        }();
        RngStream rng(600, 0);
        DenseMatrix u = DenseMatrix::identity(n);  // diagonal A: eigenbasis is standard
        double sum = 0.0;
        const int draws = 200;
        for (int d = 0; d < draws; ++d) {
            DenseMatrix omega = gaussian_matrix(n, l, rng);
            DenseMatrix omega_k = block(omega, 0, k, 0, l);
            DenseMatrix omega_tail = block(omega, k, n, 0, l);
            sum += E_omega_candidate(split, best, omega_k, omega_tail);
        }
        const double mc_mean = sum / draws;
        const double bound = (static_cast<double>(k) / (l - k - 1.0)) *
                             E_candidate(split, best).value * (1.0 + 3.0 / std::sqrt(200.0));
        return pass_if(mc_mean, bound, "candidate " + eu.argmin_kind);
    });

    h.check("bounds.thm35_tail_quantile", [] {
        const int n = 120, k = 5, l = 9, s = 8, r = 6;
        std::vector<double> eigs = exp_decay_spectrum(n, 3.0, 0.06);
        MatVecOperator op = synthetic_spectrum_operator(eigs);
        ScalarFunction f = ScalarFunction::exp_scaled(1.0);
        SpectrumSplit split(eigs, k, f);
        std::vector<double> fvals(eigs.size());
        for (size_t i = 0; i < eigs.size(); ++i) fvals[i] = f(eigs[i]);
        ExactReference ref = ExactReference::from_diagonal(fvals);
        const int trials = 200;
        std::vector<double> errs(trials);
        for (int t = 0; t < trials; ++t) {
            RngStream rng(700, static_cast<uint64_t>(t));
            LowRankApprox approx = truncate_approx(krylov_aware(op, f, k, l, s, r, rng), k);
            errs[t] = approx_error(approx, ref) * ref.frob_norm_value;  // absolute error
        }
        std::sort(errs.begin(), errs.end());
        double worst = -1e300;
        std::string detail;
        for (double delta : {0.1, 0.5}) {
            BoundReport rep = assemble_bound(BoundKind::thm35_tail, split, l, s, r, delta);
            const int q_idx = static_cast<int>(std::ceil((1.0 - delta) * trials)) - 1;
            const double quant = errs[std::clamp(q_idx, 0, trials - 1)];
            worst = std::max(worst, quant - rep.value);
            detail += "delta=" + std::to_string(delta) + " quantile=" + std::to_string(quant) +
                      " bound=" + std::to_string(rep.value) + "; ";
        }
        return pass_if(worst, 0.0, detail);
    });

    h.check("bounds.thm35_expectation_mc", [] {
        const int n = 200, k = 10, l = 22, s = 15, r = 10;
        std::vector<double> eigs = exp_decay_spectrum(n, 4.0, 0.04);
        MatVecOperator op = synthetic_spectrum_operator(eigs);
        ScalarFunction f = ScalarFunction::exp_scaled(1.0);
        SpectrumSplit split(eigs, k, f);
        std::vector<double> fvals(eigs.size());
        for (size_t i = 0; i < eigs.size(); ++i) fvals[i] = f(eigs[i]);
        ExactReference ref = ExactReference::from_diagonal(fvals);
        double sum = 0.0;
        const int trials = 100;
        for (int t = 0; t < trials; ++t) {
            RngStream rng(800, static_cast<uint64_t>(t));
            LowRankApprox approx = truncate_approx(krylov_aware(op, f, k, l, s, r, rng), k);
            sum += approx_error(approx, ref) * ref.frob_norm_value;
        }
        BoundReport rep = assemble_bound(BoundKind::thm35_expectation, split, l, s, r);
        return pass_if(sum / trials, rep.value);
    });

    h.check("bounds.cor41_cor42_dominance", [] {
        // gapped spectra where the Chebyshev route must beat Taylor
        double worst = -1e300;
        for (double gap : {2.5, 3.0}) {
            std::vector<double> eigs;
            const int k = 4, n = 80;
            for (int i = 0; i < k; ++i) eigs.push_back(4.0 - 0.1 * i);
            for (int i = 0; i < n - k; ++i) eigs.push_back((4.0 - gap) * std::exp(-0.08 * i));
            SpectrumSplit split(eigs, k, ScalarFunction::exp_scaled(1.0));
            const GammaQuantities g = gamma_quantities(split);
            if (g.big_gamma < 0.5) throw NumericalError("grid spectrum lost its gap");
            for (int s : {13, 16, 20}) {
                BoundReport c41 = assemble_bound(BoundKind::cor41, split, 12, s, 8);
                BoundReport c42 = assemble_bound(BoundKind::cor42, split, 12, s, 8);
                worst = std::max(worst, c42.value - c41.value);
            }
        }
        return pass_if(worst, 0.0, "cor42 minus cor41 over the grid");
    });

    h.check("bounds.structural_bound_full", [] {
        RngStream rng(900, 0);
        namespace fs = std::filesystem;
        std::vector<StructuralInstance> instances;
        instances.push_back({laplacian2d_operator(16, 0.01, 1.0),
                             ScalarFunction::exp_scaled(1.0), 8, 12, 8});
        instances.push_back({spin_chain_operator(8, 10.0), ScalarFunction::exp_scaled(-0.3), 8,
                             12, 8});
        instances.push_back({synthetic_spectrum_operator(log_decay_spectrum(300)),
                             ScalarFunction::log(), 10, 14, 10});
        instances.push_back({adjacency_from_matrix_market(fixture_graph(60)),
                             ScalarFunction::exp_scaled(1.0), 6, 10, 8});
        double worst = -1e300;
        int trials_total = 0;
        for (const StructuralInstance& inst : instances) {
            for (int t = 0; t < 13 && trials_total < 50; ++t, ++trials_total) {
                CheckResult r = structural_trial(inst, rng);
                worst = std::max(worst, -r.slack);
            }
        }
        return pass_if(worst, 0.0, "50 trials across four operator families");
    });
}

}  // namespace

std::vector<CheckResult> run_verification(const std::string& suite) {
    if (suite != "fast" && suite != "full")
        throw ValidationError("run_verification: suite must be 'fast' or 'full'");
    Harness h;
    fast_checks(h);
    if (suite == "full") full_checks(h);
    return h.results;
}

}  // namespace krylow
