#pragma once

#include <cstdint>
#include <random>

namespace qpke {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent child seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Forks a reproducible rng stream: the same (seed, stream) pair always yields
// the same sequence, and distinct streams are independent for practical use.
inline Rng fork_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed ^ splitmix64(stream)));
}

// One fair coin flip. Exactly one engine draw per flip, so consumption counts
// are predictable and generation is reproducible from a seed.
inline int coin(Rng& rng) {
    return static_cast<int>(rng() & 1u);
}

}  // namespace qpke
