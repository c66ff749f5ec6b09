#include <benchmark/benchmark.h>

#include "krylow/block_lanczos.hpp"
#include "krylow/linalg.hpp"
#include "krylow/operators.hpp"
#include "krylow/probe.hpp"
#include "krylow/rng.hpp"

using namespace krylow;

static void BM_SymEigJacobi(benchmark::State& state) {
    RngStream rng(1, 0);
    DenseMatrix m = random_symmetric(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) {
        auto dec = sym_eig(m, EigMethod::jacobi);
        benchmark::DoNotOptimize(dec.eigenvalues.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SymEigJacobi)->RangeMultiplier(2)->Range(32, 256)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_SymEigTridiagonal(benchmark::State& state) {
    RngStream rng(1, 0);
    DenseMatrix m = random_symmetric(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) {
        auto dec = sym_eig(m, EigMethod::tridiagonal_ql);
        benchmark::DoNotOptimize(dec.eigenvalues.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SymEigTridiagonal)->RangeMultiplier(2)->Range(64, 1024)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_SpinChainMatvec(benchmark::State& state) {
    const int sites = static_cast<int>(state.range(0));
    MatVecOperator op = spin_chain_operator(sites, 10.0);
    RngStream rng(2, 0);
    DenseMatrix x = gaussian_matrix(static_cast<int>(op.dim()), 8, rng);
    for (auto _ : state) {
        DenseMatrix y = op.apply_block(x);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_SpinChainMatvec)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

static void BM_LaplacianMatvec(benchmark::State& state) {
    const int grid = static_cast<int>(state.range(0));
    MatVecOperator op = laplacian2d_operator(grid, 0.01, 1.0);
    RngStream rng(3, 0);
    DenseMatrix x = gaussian_matrix(static_cast<int>(op.dim()), 8, rng);
    for (auto _ : state) {
        DenseMatrix y = op.apply_block(x);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_LaplacianMatvec)->RangeMultiplier(2)->Range(25, 100)->Unit(benchmark::kMillisecond);

static void BM_BlockLanczos(benchmark::State& state) {
    MatVecOperator op = spin_chain_operator(10, 10.0);
    RngStream rng(4, 0);
    DenseMatrix omega = gaussian_matrix(1024, static_cast<int>(state.range(0)), rng);
    for (auto _ : state) {
        BlockLanczosResult res = block_lanczos(op, omega, 8);
        benchmark::DoNotOptimize(res.t_proj.data());
    }
}
BENCHMARK(BM_BlockLanczos)->Arg(1)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_GaussianSampling(benchmark::State& state) {
    RngStream rng(5, 0);
    for (auto _ : state) {
        DenseMatrix m = gaussian_matrix(static_cast<int>(state.range(0)), 16, rng);
        benchmark::DoNotOptimize(m.data());
    }
}
BENCHMARK(BM_GaussianSampling)->Range(1024, 16384)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
