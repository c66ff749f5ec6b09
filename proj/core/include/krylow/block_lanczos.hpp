#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "krylow/dense_matrix.hpp"
#include "krylow/linalg.hpp"
#include "krylow/operators.hpp"
#include "krylow/scalar_function.hpp"

namespace krylow {

/// Output of the block Lanczos iteration: graded orthonormal basis Q for
/// the Krylov space, the block-tridiagonal projection T = Q^T A Q, and the
/// initial factor R0 with Omega = V0 * R0. Widths track per-block column
/// counts (deflation shrinks them; once zero they stay zero while the
/// iteration bookkeeping continues). The trailing block and coupling
/// produced by the final iteration are retained so a run can be extended
/// without recomputation.
struct BlockLanczosResult {
    DenseMatrix q_basis;      // n x d_total
    DenseMatrix t_proj;       // d_total x d_total, symmetric block tridiagonal
    DenseMatrix r0;           // w0 x l, upper trapezoidal
    std::vector<int> widths;  // w_0 ... w_{q-1}
    int iterations = 0;       // q

    DenseMatrix v_pending;  // V_q, not part of the basis
    DenseMatrix r_pending;  // R_q
    double deflation_tol = kDefaultDeflationTol;
    std::string op_label;
    int64_t op_dim = 0;
    uint64_t op_id = 0;
    int64_t matvecs = 0;  // matvecs with A consumed by this run

    int total_dim() const { return q_basis.cols(); }
    /// d_{s,l} = dim K_s(A, Omega) = sum of the first s widths.
    int dim_at(int s) const;
};

/// Algorithm: full reorthogonalization (two passes of classical
/// Gram-Schmidt against all previous blocks) and rank-revealing deflation
/// relative to the pre-projection block norm.
BlockLanczosResult block_lanczos(const MatVecOperator& op, const DenseMatrix& omega, int q,
                                 double defl_tol = kDefaultDeflationTol);

/// Q_q f(T_q)_{:,1:w0} R0, the block-FOM approximation of f(A)*Omega.
DenseMatrix lanczos_fom(const BlockLanczosResult& res, const ScalarFunction& f);

/// R0^T f(T_q)_{1:w0,1:w0} R0, the block-quadrature approximation of
/// Omega^T f(A) Omega.
DenseMatrix lanczos_quadform(const BlockLanczosResult& res, const ScalarFunction& f);

/// Continue a finished run for `extra` more iterations; identical to a
/// fresh (q + extra)-iteration run on the same operator and start block.
BlockLanczosResult extend_lanczos(const BlockLanczosResult& res, const MatVecOperator& op,
                                  int extra);

/// First d_{s,l} basis columns and their count.
std::pair<DenseMatrix, int> leading_principal(const BlockLanczosResult& res, int s);

}  // namespace krylow
