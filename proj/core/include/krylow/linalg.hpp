#pragma once

#include <vector>

#include "krylow/dense_matrix.hpp"
#include "krylow/scalar_function.hpp"

namespace krylow {

/// Eigenvalues ascending, eigenvectors as orthonormal columns in matching
/// order, deterministic column signs (largest-magnitude entry positive).
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    DenseMatrix eigenvectors;
};

enum class EigMethod {
    automatic,      // Jacobi up to kJacobiMaxDim, tridiagonal QL above
    jacobi,         // cyclic Jacobi with threshold sweeps
    tridiagonal_ql  // Householder reduction + implicit-shift QL
};

/// Jacobi handles everything the test and experiment tiers touch; the QL
/// path exists for the large dense references where O(n^3)-per-sweep Jacobi
/// is impractical. Both paths are cross-checked in the test suite.
inline constexpr int kJacobiMaxDim = 256;
inline constexpr int kDefaultDenseCap = 12000;
inline constexpr int kJacobiMaxSweeps = 50;

SpectralDecomposition sym_eig(const DenseMatrix& m, EigMethod method = EigMethod::automatic,
                              int size_cap = kDefaultDenseCap);

/// Eigenvalues only (ascending); much cheaper than sym_eig for large n.
std::vector<double> sym_eigvals(const DenseMatrix& m, int size_cap = kDefaultDenseCap);

/// V f(diag lambda) V^T. Throws DomainError naming the offending eigenvalue
/// if f is undefined somewhere on the spectrum.
DenseMatrix apply_matfun(const DenseMatrix& m, const ScalarFunction& f);

/// Best rank-(at most)-k approximation of a symmetric matrix: keep the k
/// eigenpairs of largest |eigenvalue|. Exact ties keep the eigenvalue that
/// sorts earlier (stable order over ascending eigenvalues).
DenseMatrix truncate_sym(const DenseMatrix& x, int k);

struct OrthResult {
    DenseMatrix v;  // n x rank, orthonormal columns
    DenseMatrix r;  // rank x cols(Y), Y ~= v * r
    int rank = 0;
};

inline constexpr double kDefaultDeflationTol = 1e-10;

/// Orthonormal basis of range(Y) by twice-iterated modified Gram-Schmidt.
/// Columns whose residual after projection falls below tol * scale are
/// deflated (dropped); scale defaults to ||Y||_F, callers with outside
/// knowledge of the data's magnitude (the Lanczos loop) pass their own.
OrthResult orth_basis(const DenseMatrix& y, double tol = kDefaultDeflationTol, double scale = -1.0);

/// ||exact - approx||_F / ||exact||_F
double rel_error(const DenseMatrix& exact, const DenseMatrix& approx);

}  // namespace krylow
