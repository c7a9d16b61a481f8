#pragma once

#include <cstdint>

namespace orbitsense {

/*
 * Counter-based deterministic randomness. Every draw is a pure function of
 * (seed, stream, counter), so parallel partitions reproduce serial output
 * and reports can reference samples by index.
 */
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// Stateless uniform in [0,1) with 53 significant bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(hash_draw(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline std::uint64_t uniform_below(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t counter, std::uint64_t n) {
    return hash_draw(seed, stream, counter) % (n == 0 ? 1 : n);
}

// Sub-seed derivation for per-region / per-task streams.
inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ (0xd1342543de82ef95ULL * (tag + 1)));
}

} // namespace orbitsense
