#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "krylow/dense_matrix.hpp"
#include "krylow/linalg.hpp"
#include "krylow/scalar_function.hpp"

namespace krylow {

/// Opaque symmetric linear operator: the only access path to A is block
/// matrix-vector products. Immutable after construction and safe for
/// concurrent apply_block calls; the matvec counter is the instrumented
/// budget ledger (one unit per column applied).
class MatVecOperator {
public:
    using ApplyFn = std::function<void(const DenseMatrix&, DenseMatrix&)>;

    MatVecOperator() = default;
    MatVecOperator(int64_t dim, std::string label, ApplyFn apply,
                   std::optional<std::vector<double>> exact_spectrum = std::nullopt)
        : dim_(dim),
          label_(std::move(label)),
          apply_(std::move(apply)),
          exact_spectrum_(std::move(exact_spectrum)),
          matvecs_(std::make_shared<std::atomic<int64_t>>(0)),
          instance_id_(next_instance_id()) {}

    int64_t dim() const { return dim_; }
    const std::string& label() const { return label_; }
    /// Identity token: copies of one operator share it, fresh constructions
    /// never do. Used to validate continuation of a Lanczos run.
    uint64_t instance_id() const { return instance_id_; }
    const std::optional<std::vector<double>>& exact_spectrum() const { return exact_spectrum_; }

    DenseMatrix apply_block(const DenseMatrix& x) const;

    int64_t matvec_count() const { return matvecs_->load(); }
    void reset_matvec_count() const { matvecs_->store(0); }

    /// A as an explicit dense matrix (apply to identity blocks); guarded by cap.
    DenseMatrix materialize(int dense_cap = kDefaultDenseCap) const;

private:
    static uint64_t next_instance_id();

    int64_t dim_ = 0;
    std::string label_;
    ApplyFn apply_;
    std::optional<std::vector<double>> exact_spectrum_;
    std::shared_ptr<std::atomic<int64_t>> matvecs_;
    uint64_t instance_id_ = 0;
};

/// Finite-difference discretization of kappa*Laplace + lambda*I on [0,1]^2,
/// homogeneous Dirichlet on the left/right/bottom edges and homogeneous
/// Neumann (mirror ghost node) on the top edge. Grid spacing 1/grid points;
/// unknowns are the (grid-1) x grid interior-plus-top-edge nodes, so a
/// 100-point grid yields n = 9900. Eigenvalues are separable and attached
/// as the exact spectrum.
MatVecOperator laplacian2d_operator(int grid_points_per_side, double kappa, double lambda);

/// Transverse-field Ising chain -sum Z_i Z_{i+1} - h sum X_i on N sites,
/// dimension 2^N, applied through bit manipulation of state indices.
MatVecOperator spin_chain_operator(int n_sites, double h);

/// Diagonal operator with the prescribed spectrum.
MatVecOperator synthetic_spectrum_operator(std::vector<double> eigenvalues);

/// A - shift*I over an existing operator.
MatVecOperator shifted_operator(const MatVecOperator& op, double shift);

/// Wrap an explicit symmetric matrix (testing and reference paths).
MatVecOperator dense_operator(DenseMatrix a, std::string label = "dense");

/// Ground truth f(A) for error measurement; dense eigendecomposition of the
/// materialized operator.
DenseMatrix exact_matfun_reference(const MatVecOperator& op, const ScalarFunction& f,
                                   int dense_cap = kDefaultDenseCap);

}  // namespace krylow
