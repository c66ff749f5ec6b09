#include <doctest.h>

#include <cmath>
#include <vector>

#include "krylow/block_lanczos.hpp"
#include "krylow/errors.hpp"
#include "krylow/operators.hpp"
#include "krylow/probe.hpp"

using namespace krylow;

namespace {

// Independent stencil oracle: assemble kappa*Laplace + lambda*I by looping
// over grid nodes with Dirichlet left/right/bottom and a mirrored ghost on
// the top edge.
DenseMatrix assemble_laplacian(int m, double kappa, double lambda) {
    const int nx = m - 1, ny = m;
    const int n = nx * ny;
    const double c = kappa * m * m;  // kappa / h^2 with h = 1/m
    DenseMatrix a(n, n);
    auto id = [nx](int i, int j) { return i + nx * j; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = id(i, j);
            const bool top = j == ny - 1;
            a(row, row) = c * (top ? -3.0 : -4.0) + lambda;
            if (i > 0) a(row, id(i - 1, j)) = c;
            if (i < nx - 1) a(row, id(i + 1, j)) = c;
            if (j > 0) a(row, id(i, j - 1)) = c;
            if (!top) a(row, id(i, j + 1)) = c;
        }
    }
    return a;
}

// Pauli-structure oracle: explicit Kronecker assembly of the N-site chain.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int aj = 0; aj < a.cols(); ++aj)
        for (int ai = 0; ai < a.rows(); ++ai)
            for (int bj = 0; bj < b.cols(); ++bj)
                for (int bi = 0; bi < b.rows(); ++bi)
                    out(ai * b.rows() + bi, aj * b.cols() + bj) = a(ai, aj) * b(bi, bj);
    return out;
}

DenseMatrix assemble_spin_chain(int n_sites, double h) {
    const DenseMatrix pauli_x = [] {
        DenseMatrix x(2, 2);
        x(0, 1) = 1.0;
        x(1, 0) = 1.0;
        return x;
    }();
    const DenseMatrix pauli_z = DenseMatrix::diag({1.0, -1.0});
    auto site_op = [&](const DenseMatrix& op, int site) {
        DenseMatrix acc = DenseMatrix::identity(1);
        for (int i = 0; i < n_sites; ++i) acc = kron(acc, i == site ? op : DenseMatrix::identity(2));
        return acc;
    };
    const int n = 1 << n_sites;
    DenseMatrix a(n, n);
    for (int i = 0; i + 1 < n_sites; ++i)
        a = a - matmul(site_op(pauli_z, i), site_op(pauli_z, i + 1));
    for (int i = 0; i < n_sites; ++i) a = a - h * site_op(pauli_x, i);
    return a;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("laplacian2d at grid 100 has dimension 9900") {
    MatVecOperator op = laplacian2d_operator(100, 0.01, 1.0);
    CHECK(op.dim() == 9900);
    REQUIRE(op.exact_spectrum().has_value());
    CHECK(op.exact_spectrum()->size() == 9900);
}

TEST_CASE("laplacian2d maps the zero block to zero") {
    MatVecOperator op = laplacian2d_operator(7, 0.5, 2.0);
    DenseMatrix y = op.apply_block(DenseMatrix(static_cast<int>(op.dim()), 3));
    CHECK(frob_norm(y) == 0.0);
}

TEST_CASE("laplacian2d grid 5 matches the assembled stencil entrywise") {
    MatVecOperator op = laplacian2d_operator(5, 0.3, 1.5);
    REQUIRE(op.dim() == 20);
    DenseMatrix dense = op.materialize();
    DenseMatrix oracle = assemble_laplacian(5, 0.3, 1.5);
    CHECK(frob_norm(dense - oracle) <= 1e-13 * frob_norm(oracle));
}

TEST_CASE("laplacian2d exact spectrum matches the dense eigenvalues") {
    MatVecOperator op = laplacian2d_operator(6, 0.05, 1.0);
    std::vector<double> analytic = *op.exact_spectrum();
    std::sort(analytic.begin(), analytic.end());
    std::vector<double> dense = sym_eigvals(symmetrize(op.materialize()));
    REQUIRE(analytic.size() == dense.size());
    for (size_t i = 0; i < dense.size(); ++i)
        CHECK(analytic[i] == doctest::Approx(dense[i]).epsilon(1e-10));
}

TEST_CASE("laplacian2d validates the grid size") {
    CHECK_THROWS_AS(laplacian2d_operator(2, 0.1, 1.0), ValidationError);
}

TEST_CASE("spin chain dimensions and range guard") {
    CHECK(spin_chain_operator(14, 10.0).dim() == 16384);
    CHECK_THROWS_AS(spin_chain_operator(0, 1.0), ValidationError);
    CHECK_THROWS_AS(spin_chain_operator(25, 1.0), ValidationError);
}

TEST_CASE("single-site chain is -h X with eigenvalues +-h") {
    MatVecOperator op = spin_chain_operator(1, 3.5);
    std::vector<double> eigs = sym_eigvals(symmetrize(op.materialize()));
    CHECK(eigs[0] == doctest::Approx(-3.5).epsilon(1e-13));
    CHECK(eigs[1] == doctest::Approx(3.5).epsilon(1e-13));
}

TEST_CASE("spin chain N=3 agrees with explicit Kronecker assembly") {
    MatVecOperator op = spin_chain_operator(3, 10.0);
    DenseMatrix oracle = assemble_spin_chain(3, 10.0);
    CHECK(frob_norm(op.materialize() - oracle) == 0.0);
}

TEST_CASE("spin chain block apply equals column-by-column apply exactly") {
    RngStream rng(21, 0);
    MatVecOperator op = spin_chain_operator(6, 10.0);
    DenseMatrix x = gaussian_matrix(64, 4, rng);
    DenseMatrix blocked = op.apply_block(x);
    for (int j = 0; j < 4; ++j) {
        DenseMatrix single = op.apply_block(block(x, 0, 64, j, j + 1));
        for (int i = 0; i < 64; ++i) CHECK(single(i, 0) == blocked(i, j));
    }
}

TEST_CASE("synthetic log spectrum feeds log to 1/i^2") {
    std::vector<double> eigs = log_decay_spectrum(5000);
    MatVecOperator op = synthetic_spectrum_operator(eigs);
    CHECK(op.dim() == 5000);
    for (int i : {1, 7, 5000}) {
        const double f = std::log(eigs[i - 1]);
        CHECK(f == doctest::Approx(1.0 / (static_cast<double>(i) * i)).epsilon(1e-12));
    }
}

TEST_CASE("synthetic all-ones spectrum is the identity operator") {
    MatVecOperator op = synthetic_spectrum_operator(std::vector<double>(10, 1.0));
    RngStream rng(22, 0);
    DenseMatrix x = gaussian_matrix(10, 3, rng);
    CHECK(op.apply_block(x) == x);
}

TEST_CASE("diagonal action on a standard basis vector") {
    MatVecOperator op = synthetic_spectrum_operator({2.0, -1.0, 0.5, 7.0});
    DenseMatrix e2(4, 1);
    e2(2, 0) = 1.0;
    DenseMatrix y = op.apply_block(e2);
    CHECK(y(2, 0) == 0.5);
    CHECK(frob_norm(y) == 0.5);
    CHECK_THROWS_AS(synthetic_spectrum_operator({}), ValidationError);
}

TEST_CASE("exact_matfun_reference on a diagonal operator") {
    MatVecOperator op = synthetic_spectrum_operator({0.0, 1.0, -2.0});
    DenseMatrix r = exact_matfun_reference(op, ScalarFunction::exp_scaled(1.0));
    CHECK(r(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r(1, 1) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(r(2, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("exact_matfun_reference identity function returns the Hamiltonian") {
    MatVecOperator op = spin_chain_operator(3, 10.0);
    DenseMatrix r = exact_matfun_reference(op, ScalarFunction::identity());
    CHECK(frob_norm(r - assemble_spin_chain(3, 10.0)) <= 8 * 1e-10 * frob_norm(r));
}

TEST_CASE("exact_matfun_reference of x^2 matches a dense square") {
    MatVecOperator op = laplacian2d_operator(5, 0.2, 1.0);
    DenseMatrix a = op.materialize();
    DenseMatrix r = exact_matfun_reference(op, ScalarFunction::polynomial({0.0, 0.0, 1.0}));
    CHECK(frob_norm(r - matmul(a, a)) <= 1e-9 * std::max(1.0, frob_norm(r)));
}

TEST_CASE("exact_matfun_reference respects the dense cap") {
    MatVecOperator op = synthetic_spectrum_operator(std::vector<double>(128, 1.0));
    CHECK_THROWS_AS(exact_matfun_reference(op, ScalarFunction::identity(), 64), ResourceError);
}

TEST_CASE("all operator families pass randomized linearity and symmetry probes") {
    RngStream rng(23, 0);
    std::vector<MatVecOperator> ops;
    ops.push_back(laplacian2d_operator(9, 0.01, 1.0));
    ops.push_back(spin_chain_operator(6, 10.0));
    ops.push_back(synthetic_spectrum_operator(log_decay_spectrum(80)));
    for (const MatVecOperator& op : ops) {
        CHECK(linearity_slack(op, 20, rng) <= 1e-10);
        CHECK(symmetry_slack(op, 20, rng) <= 1e-10);
    }
}

TEST_CASE("shifting the operator leaves the Krylov basis span unchanged") {
    RngStream rng(24, 0);
    MatVecOperator op = spin_chain_operator(6, 10.0);
    DenseMatrix omega = gaussian_matrix(64, 3, rng);
    BlockLanczosResult plain = block_lanczos(op, omega, 5);
    for (double c : {-5.0, 1.0, 5.0}) {
        BlockLanczosResult shifted = block_lanczos(shifted_operator(op, c), omega, 5);
        CHECK(max_principal_angle(plain.q_basis, shifted.q_basis) <= 1e-8);
    }
}

TEST_CASE("apply_block validates the operand dimension") {
    MatVecOperator op = synthetic_spectrum_operator({1.0, 2.0});
    CHECK_THROWS_AS(op.apply_block(DenseMatrix(3, 1)), ValidationError);
}

}  // TEST_SUITE
