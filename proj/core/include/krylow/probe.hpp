#pragma once

#include <cstdint>
#include <vector>

#include "krylow/dense_matrix.hpp"
#include "krylow/operators.hpp"
#include "krylow/rng.hpp"

namespace krylow {

/// Largest principal angle (radians) between two equal-dimension subspaces
/// given by orthonormal bases.
double max_principal_angle(const DenseMatrix& q1, const DenseMatrix& q2);

/// Orthonormalized Gaussian block.
DenseMatrix random_orthonormal(int n, int d, RngStream& rng);

/// V diag(eigs) V^T for a random orthogonal V.
DenseMatrix random_symmetric_with_spectrum(const std::vector<double>& eigs, RngStream& rng);

/// Symmetrized Gaussian matrix.
DenseMatrix random_symmetric(int n, RngStream& rng);

/// lambda_i = exp(1/i^2), i = 1..n (the synthetic logarithm spectrum).
std::vector<double> log_decay_spectrum(int n);

/// scale * exp(-rate * (i-1)), i = 1..n.
std::vector<double> exp_decay_spectrum(int n, double scale, double rate);

/// Worst relative linearity violation of apply(alpha x + beta y) over
/// `probes` random probes.
double linearity_slack(const MatVecOperator& op, int probes, RngStream& rng);

/// Worst |u^T(Av) - v^T(Au)| / (||A||_est ||u|| ||v||) over random probes.
double symmetry_slack(const MatVecOperator& op, int probes, RngStream& rng);

/// FNV-1a over the matrix bytes; used to log sketch identity across methods.
uint64_t matrix_hash(const DenseMatrix& m);

}  // namespace krylow
