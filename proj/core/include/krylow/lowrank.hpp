#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "krylow/block_lanczos.hpp"
#include "krylow/dense_matrix.hpp"
#include "krylow/operators.hpp"
#include "krylow/rng.hpp"
#include "krylow/scalar_function.hpp"

namespace krylow {

/// Factored symmetric approximation basis * core * basis^T with an optional
/// rank-k truncation applied to the core. matvec_count is the analytic
/// matvec budget with A consumed to build it.
struct LowRankApprox {
    DenseMatrix basis;  // n x d, orthonormal columns
    DenseMatrix core;   // d x d, symmetric
    std::optional<int> truncated_to;
    std::string method_tag;
    int64_t matvec_count = 0;

    DenseMatrix assemble() const;  // n x n, small-n paths only
};

/// Rank-k truncation of the core; the basis is unchanged. Throws when the
/// captured subspace cannot support rank k.
LowRankApprox truncate_approx(const LowRankApprox& approx, int k);

/// Randomized SVD with exact products against an explicitly formed f(A)
/// (reference/baseline only). matvec_count records the 2l products with
/// f(A), not matvecs with A.
LowRankApprox rand_svd_exact(const DenseMatrix& f_of_a, int k, int l, RngStream& rng);
LowRankApprox rand_svd_exact(const DenseMatrix& f_of_a, int k, const DenseMatrix& omega);

/// Randomized SVD on f(A) with matvecs approximated by block Lanczos:
/// s iterations for the sketch f(A)*Omega, an independent r-iteration run
/// started at the orthonormalized sketch for the core. (s+r)*l matvecs.
LowRankApprox rand_svd_matfun(const MatVecOperator& op, const ScalarFunction& f, int k, int l,
                              int s, int r, RngStream& rng);
LowRankApprox rand_svd_matfun(const MatVecOperator& op, const ScalarFunction& f, int k,
                              const DenseMatrix& omega, int s, int r);

/// Krylov-aware approximation: one (s+r)-iteration block Lanczos run; the
/// basis is the s-step Krylov basis, the core is the leading principal
/// block of f(T_{s+r}). r = 0 gives the direct variant f(T_s) on the full
/// basis (method tag "krylov_aware_direct"). (s+r)*l matvecs.
LowRankApprox krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k, int l, int s,
                           int r, RngStream& rng);
LowRankApprox krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k,
                           const DenseMatrix& omega, int s, int r);

/// Single-vector variant: Lanczos from one Gaussian vector for k+s+r
/// iterations, basis spanning K_{k+s}(A, w). k+s+r matvecs.
LowRankApprox single_vector_krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k,
                                         int s, int r, RngStream& rng);
LowRankApprox single_vector_krylov_aware(const MatVecOperator& op, const ScalarFunction& f, int k,
                                         const DenseMatrix& omega_vec, int s, int r);

/// Exact reference for error measurement: either a dense f(A) or, for
/// operators with known spectra, the diagonal of f(A) in the operator's
/// eigenbasis.
struct ExactReference {
    std::optional<DenseMatrix> dense;
    std::optional<std::vector<double>> diagonal;
    std::vector<double> f_values;  // spectrum of f(A), any order; may be empty

    double frob_norm_value = 0.0;
    static ExactReference from_dense(DenseMatrix m, std::vector<double> f_values = {});
    static ExactReference from_diagonal(std::vector<double> d);
    int64_t dim() const;
    /// ||f(Lambda_{n\k})||_F / ||f(Lambda)||_F from the reference spectrum.
    double optimal_rank_error(int k) const;
};

/// ||reference - basis core basis^T||_F / ||reference||_F via the streaming
/// identity ||R - QXQ^T||_F^2 = ||R||_F^2 - 2 tr(X (Q^T R Q)) + ||X||_F^2,
/// never forming the n x n approximant.
double approx_error(const LowRankApprox& approx, const ExactReference& reference);
double approx_error(const LowRankApprox& approx, const DenseMatrix& reference);

}  // namespace krylow
