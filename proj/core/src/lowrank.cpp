#include "krylow/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "krylow/errors.hpp"

namespace krylow {

DenseMatrix LowRankApprox::assemble() const {
    return matmul(basis, matmul_nt(core, basis));
}

LowRankApprox truncate_approx(const LowRankApprox& approx, int k) {
    if (k < 1) throw ValidationError("truncate_approx: k must be >= 1");
    if (approx.core.rows() < k)
        throw ValidationError("truncate_approx: requested rank " + std::to_string(k) +
                              " but the captured subspace has dimension " +
                              std::to_string(approx.core.rows()));
    LowRankApprox out = approx;
    out.core = truncate_sym(approx.core, k);
    out.truncated_to = k;
    return out;
}

LowRankApprox rand_svd_exact(const DenseMatrix& f_of_a, int k, const DenseMatrix& omega) {
    require_symmetric(f_of_a, "rand_svd_exact");
    const int l = omega.cols();
    if (l < k) throw ValidationError("rand_svd_exact: block size l must be >= k");
    DenseMatrix sketch = matmul(f_of_a, omega);
    OrthResult w = orth_basis(sketch);
    LowRankApprox out;
    out.core = symmetrize(matmul_tn(w.v, matmul(f_of_a, w.v)));
    out.basis = std::move(w.v);
    out.method_tag = "rand_svd_exact";
    out.matvec_count = 2 * l;  // products with f(A), reference cost model
    return out;
}

LowRankApprox rand_svd_exact(const DenseMatrix& f_of_a, int k, int l, RngStream& rng) {
    if (l < k) throw ValidationError("rand_svd_exact: block size l must be >= k");
    DenseMatrix omega = gaussian_matrix(f_of_a.rows(), l, rng);
    return rand_svd_exact(f_of_a, k, omega);
}

LowRankApprox rand_svd_matfun(const MatVecOperator& op, const ScalarFunction& f, int k,
                              const DenseMatrix& omega, int s, int r) {
    const int l = omega.cols();
    if (l < k) throw ValidationError("rand_svd_matfun: block size l must be >= k");
    if (s < 1 || r < 1) throw ValidationError("rand_svd_matfun: s and r must be >= 1");
    BlockLanczosResult inner = block_lanczos(op, omega, s);
    DenseMatrix sketch = lanczos_fom(inner, f);
    OrthResult w = orth_basis(sketch);
    if (w.rank == 0)
        throw NumericalError("rand_svd_matfun: sketch f(A)*Omega is numerically zero");
    BlockLanczosResult outer = block_lanczos(op, w.v, r);
    const int w0 = outer.r0.rows();
    DenseMatrix ft = apply_matfun(outer.t_proj, f);
    LowRankApprox out;
    out.basis = leading_columns(outer.q_basis, w0);
    out.core = symmetrize(block(ft, 0, w0, 0, w0));
    out.method_tag = "rand_svd_matfun";
    out.matvec_count = static_cast<int64_t>(s + r) * l;
    return out;
}

LowRankApprox rand_svd_matfun(const MatVecOperator& op, const ScalarFunction& f, int k, int l,
                              int s, int r, RngStream& rng) {
    DenseMatrix omega = gaussian_matrix(static_cast<int>(op.dim()), l, rng);
    return rand_svd_matfun(op, f, k, omega, s, r);
}

LowRankApprox krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k,
                           const DenseMatrix& omega, int s, int r) {
    if (s < 1) throw ValidationError("krylov_aware: s must be >= 1");
    if (r < 0) throw ValidationError("krylov_aware: r must be >= 0");
    const int l = omega.cols();
    BlockLanczosResult res = block_lanczos(op, omega, s + r);
    auto [q_s, d] = leading_principal(res, s);
    DenseMatrix ft = apply_matfun(res.t_proj, f);
    LowRankApprox out;
    out.basis = std::move(q_s);
    out.core = symmetrize(block(ft, 0, d, 0, d));
    out.method_tag = r == 0 ? "krylov_aware_direct" : "krylov_aware";
    out.matvec_count = static_cast<int64_t>(s + r) * l;
    return out;
}

LowRankApprox krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k, int l, int s,
                           int r, RngStream& rng) {
    DenseMatrix omega = gaussian_matrix(static_cast<int>(op.dim()), l, rng);
    return krylov_aware(op, f, k, omega, s, r);
}

LowRankApprox single_vector_krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k,
                                         const DenseMatrix& omega_vec, int s, int r) {
    if (k < 1) throw ValidationError("single_vector_krylov_aware: k must be >= 1");
    if (s < 0 || r < 0) throw ValidationError("single_vector_krylov_aware: s, r must be >= 0");
    if (omega_vec.cols() != 1)
        throw ValidationError("single_vector_krylov_aware: start block must be a single vector");
    const int q = k + s + r;
    BlockLanczosResult res = block_lanczos(op, omega_vec, q);
    const int d = res.dim_at(std::min(k + s, res.iterations));
    DenseMatrix ft = apply_matfun(res.t_proj, f);
    LowRankApprox out;
    out.basis = leading_columns(res.q_basis, d);
    out.core = symmetrize(block(ft, 0, d, 0, d));
    out.method_tag = "single_vector";
    out.matvec_count = q;
    return out;
}

LowRankApprox single_vector_krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k,
                                         int s, int r, RngStream& rng) {
    DenseMatrix omega = gaussian_matrix(static_cast<int>(op.dim()), 1, rng);
    return single_vector_krylov_aware(op, f, k, omega, s, r);
}

ExactReference ExactReference::from_dense(DenseMatrix m, std::vector<double> f_values) {
    ExactReference ref;
    ref.frob_norm_value = frob_norm(m);
    ref.dense = std::move(m);
    ref.f_values = std::move(f_values);
    return ref;
}

ExactReference ExactReference::from_diagonal(std::vector<double> d) {
    ExactReference ref;
    double s = 0.0;
    for (double v : d) s += v * v;
    ref.frob_norm_value = std::sqrt(s);
    ref.f_values = d;
    ref.diagonal = std::move(d);
    return ref;
}

int64_t ExactReference::dim() const {
    if (dense) return dense->rows();
    return static_cast<int64_t>(diagonal->size());
}

double ExactReference::optimal_rank_error(int k) const {
    std::vector<double> fvals;
    if (!f_values.empty()) {
        fvals = f_values;
    } else {
        fvals = sym_eigvals(*dense);
    }
    std::sort(fvals.begin(), fvals.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    double tail = 0.0, total = 0.0;
    for (int i = 0; i < static_cast<int>(fvals.size()); ++i) {
        total += fvals[i] * fvals[i];
        if (i >= k) tail += fvals[i] * fvals[i];
    }
    if (total == 0.0) throw DomainError("optimal_rank_error: reference has zero norm");
    return std::sqrt(tail / total);
}

double approx_error(const LowRankApprox& approx, const ExactReference& reference) {
    if (approx.basis.rows() != reference.dim())
        throw ValidationError("approx_error: dimension mismatch");
    if (reference.frob_norm_value == 0.0)
        throw DomainError("approx_error: reference has zero norm");

    // Diagonalize the core and drop its numerically zero directions; for
    // rank-k-truncated cores this shrinks the dominant n^2 d projection
    // down to n^2 k.
    SpectralDecomposition core = sym_eig(approx.core);
    double lam_max = 0.0;
    for (double lam : core.eigenvalues) lam_max = std::max(lam_max, std::abs(lam));
    std::vector<int> keep;
    for (int j = 0; j < static_cast<int>(core.eigenvalues.size()); ++j)
        if (std::abs(core.eigenvalues[j]) > 1e-14 * lam_max) keep.push_back(j);

    const int n = approx.basis.rows();
    DenseMatrix factors(core.eigenvectors.rows(), static_cast<int>(keep.size()));
    std::vector<double> lams(keep.size());
    for (size_t j = 0; j < keep.size(); ++j) {
        lams[j] = core.eigenvalues[keep[j]];
        std::copy(core.eigenvectors.col(keep[j]), core.eigenvectors.col(keep[j]) + factors.rows(),
                  factors.col(j));
    }
    DenseMatrix b = matmul(approx.basis, factors);  // n x rank, orthonormal

    double cross = 0.0;  // tr(Lambda B^T R B)
    if (!b.empty()) {
        DenseMatrix rb(n, b.cols());
        if (reference.dense) {
            rb = matmul(*reference.dense, b);
        } else {
            rb = b;
            const auto& d = *reference.diagonal;
            for (int j = 0; j < rb.cols(); ++j) {
                double* c = rb.col(j);
                for (size_t i = 0; i < d.size(); ++i) c[i] *= d[i];
            }
        }
        for (int j = 0; j < b.cols(); ++j) {
            const double* bj = b.col(j);
            const double* rbj = rb.col(j);
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += bj[i] * rbj[i];
            cross += lams[j] * s;
        }
    }
    double core_sq = 0.0;
    for (double lam : lams) core_sq += lam * lam;
    const double r2 = reference.frob_norm_value * reference.frob_norm_value;
    const double err2 = r2 - 2.0 * cross + core_sq;

    // The streaming identity cancels catastrophically once the error drops
    // below ~sqrt(eps) of the reference; tiny residuals are recomputed
    // entrywise (column by column, no n x n approximant is stored).
    if (err2 > 1e-10 * r2) return std::sqrt(err2) / reference.frob_norm_value;
    double exact_sq = 0.0;
    std::vector<double> col(n);
    DenseMatrix bl = b;  // B * Lambda
    for (int j = 0; j < bl.cols(); ++j)
        for (int i = 0; i < n; ++i) bl(i, j) *= lams[j];
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        for (int t = 0; t < b.cols(); ++t) {
            const double btj = b(j, t);
            const double* blt = bl.col(t);
            for (int i = 0; i < n; ++i) col[i] += blt[i] * btj;
        }
        if (reference.dense) {
            const double* rcol = reference.dense->col(j);
            for (int i = 0; i < n; ++i) {
                const double d = rcol[i] - col[i];
                exact_sq += d * d;
            }
        } else {
            for (int i = 0; i < n; ++i) {
                const double d = (i == j ? (*reference.diagonal)[j] : 0.0) - col[i];
                exact_sq += d * d;
            }
        }
    }
    return std::sqrt(exact_sq) / reference.frob_norm_value;
}

double approx_error(const LowRankApprox& approx, const DenseMatrix& reference) {
    return approx_error(approx, ExactReference::from_dense(reference));
}

}  // namespace krylow
