#pragma once

#include <cstdint>
#include <random>

namespace d3f {

// splitmix64 round; a cheap, well-mixed 64-bit permutation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent stream seed from a master seed and up to three indices
// (stream tag, outer index, chunk index). Mixing between words prevents
// (seed, a) and (seed + a, 0) collisions.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    s = splitmix64(s ^ c);
    return s;
}

// Uniform index in [0, bound) from an mt19937_64, via Lemire's multiply-shift
// with rejection. Bit-stable across platforms (the engine's output sequence is
// pinned by the standard, and this mapping is fixed arithmetic).
inline std::uint64_t bounded_index(std::mt19937_64& engine, std::uint64_t bound) {
    while (true) {
        const std::uint64_t r = engine();
        const unsigned __int128 m = (unsigned __int128)r * bound;
        const std::uint64_t low = (std::uint64_t)m;
        if (low >= bound) {
            return (std::uint64_t)(m >> 64);
        }
        // Rejection branch: only taken when low < bound, i.e. with probability
        // (2^64 mod bound) / 2^64; re-check the exact threshold.
        const std::uint64_t threshold = (0 - bound) % bound;
        if (low >= threshold) {
            return (std::uint64_t)(m >> 64);
        }
    }
}

} // namespace d3f
