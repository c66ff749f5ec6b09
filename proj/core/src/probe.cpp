#include "krylow/probe.hpp"

#include <algorithm>
#include <cmath>

#include "krylow/errors.hpp"
#include "krylow/linalg.hpp"

namespace krylow {

double max_principal_angle(const DenseMatrix& q1, const DenseMatrix& q2) {
    if (q1.rows() != q2.rows() || q1.cols() != q2.cols())
        throw ValidationError("max_principal_angle: subspace dimensions differ");
    if (q1.cols() == 0) return 0.0;
    // sine-based form: accurate for the near-identical spans we test
    DenseMatrix resid = q2 - matmul(q1, matmul_tn(q1, q2));
    std::vector<double> sq = sym_eigvals(symmetrize(matmul_tn(resid, resid)));
    const double smax = std::sqrt(std::max(0.0, sq.back()));
    return std::asin(std::clamp(smax, 0.0, 1.0));
}

DenseMatrix random_orthonormal(int n, int d, RngStream& rng) {
    DenseMatrix g = gaussian_matrix(n, d, rng);
    OrthResult o = orth_basis(g);
    if (o.rank != d) throw NumericalError("random_orthonormal: Gaussian block lost rank");
    return o.v;
}

DenseMatrix random_symmetric_with_spectrum(const std::vector<double>& eigs, RngStream& rng) {
    const int n = static_cast<int>(eigs.size());
    DenseMatrix v = random_orthonormal(n, n, rng);
    DenseMatrix scaled = v;
    for (int j = 0; j < n; ++j) {
        double* c = scaled.col(j);
        for (int i = 0; i < n; ++i) c[i] *= eigs[j];
    }
    return symmetrize(matmul_nt(scaled, v));
}

DenseMatrix random_symmetric(int n, RngStream& rng) {
    return symmetrize(gaussian_matrix(n, n, rng));
}

std::vector<double> log_decay_spectrum(int n) {
    std::vector<double> eigs(n);
    for (int i = 1; i <= n; ++i) eigs[i - 1] = std::exp(1.0 / (static_cast<double>(i) * i));
    return eigs;
}

std::vector<double> exp_decay_spectrum(int n, double scale, double rate) {
    std::vector<double> eigs(n);
    for (int i = 1; i <= n; ++i) eigs[i - 1] = scale * std::exp(-rate * (i - 1));
    return eigs;
}

double linearity_slack(const MatVecOperator& op, int probes, RngStream& rng) {
    const int n = static_cast<int>(op.dim());
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        DenseMatrix x = gaussian_matrix(n, 1, rng);
        DenseMatrix y = gaussian_matrix(n, 1, rng);
        const double alpha = rng.normal(), beta = rng.normal();
        DenseMatrix combo = alpha * x + beta * y;
        DenseMatrix lhs = op.apply_block(combo);
        DenseMatrix rhs = alpha * op.apply_block(x) + beta * op.apply_block(y);
        const double denom = std::max(frob_norm(lhs), 1e-300);
        worst = std::max(worst, frob_norm(lhs - rhs) / denom);
    }
    return worst;
}

double symmetry_slack(const MatVecOperator& op, int probes, RngStream& rng) {
    const int n = static_cast<int>(op.dim());
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        DenseMatrix u = gaussian_matrix(n, 1, rng);
        DenseMatrix v = gaussian_matrix(n, 1, rng);
        DenseMatrix au = op.apply_block(u);
        DenseMatrix av = op.apply_block(v);
        const double a_est = std::max({frob_norm(au) / frob_norm(u), frob_norm(av) / frob_norm(v), 1e-300});
        const double lhs = std::abs(dot(u, av) - dot(v, au));
        worst = std::max(worst, lhs / (a_est * frob_norm(u) * frob_norm(v)));
    }
    return worst;
}

uint64_t matrix_hash(const DenseMatrix& m) {
    uint64_t h = 1469598103934665603ULL;
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(m.data());
    const size_t len = m.size() * sizeof(double);
    for (size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace krylow
