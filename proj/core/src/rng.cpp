#include "krylow/rng.hpp"

#include <cmath>

#include "krylow/errors.hpp"

namespace krylow {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

inline uint64_t derive_key(uint64_t seed, uint64_t stream) {
    uint64_t k = mix64(seed + kGolden);
    k = mix64(k ^ (stream * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL));
    return k;
}

}  // namespace

uint64_t RngStream::word_at(uint64_t i) const {
    return mix64(derive_key(seed, stream_index) + i * kGolden);
}

double RngStream::uniform() {
    const uint64_t w = word_at(2 * counter);
    ++counter;
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    // Two words per sample keeps every sample independent of batching.
    const uint64_t a = word_at(2 * counter);
    const uint64_t b = word_at(2 * counter + 1);
    ++counter;
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;          // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

DenseMatrix gaussian_matrix(int n, int l, RngStream& rng) {
    if (n < 1 || l < 1) throw ValidationError("gaussian_matrix: dimensions must be >= 1");
    DenseMatrix m(n, l);
    for (size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

}  // namespace krylow
