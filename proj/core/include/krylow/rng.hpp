#pragma once

#include <cstdint>

#include "krylow/dense_matrix.hpp"

namespace krylow {

/// Counter-based Gaussian stream. A draw at position i is a pure function of
/// (seed, stream_index, i), so identical (seed, stream_index) replays the
/// same sequence regardless of how samples are batched, and distinct stream
/// indices give independent streams for parallel trials.
///
/// Generator: SplitMix64 finalizer over a Weyl counter keyed by
/// (seed, stream_index); normals via Box-Muller, one normal per uniform pair.
/// The integer stream is bit-stable everywhere; the double stream is
/// bit-stable for a fixed libm.
struct RngStream {
    uint64_t seed = 0;
    uint64_t stream_index = 0;
    uint64_t counter = 0;  // index of the next normal sample

    RngStream() = default;
    RngStream(uint64_t seed_, uint64_t stream_index_) : seed(seed_), stream_index(stream_index_) {}

    /// Raw 64-bit word at absolute position i (stateless).
    uint64_t word_at(uint64_t i) const;

    /// Next standard normal sample; advances the counter.
    double normal();

    /// Uniform in [0,1); advances the counter.
    double uniform();
};

/// n x l matrix of independent N(0,1) samples drawn from rng (column-major
/// fill order). Deterministic under a fixed stream state.
DenseMatrix gaussian_matrix(int n, int l, RngStream& rng);

}  // namespace krylow
