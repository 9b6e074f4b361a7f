#pragma once

#include <cstdint>
#include <random>

namespace qlab {

// splitmix64; used to derive independent substream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Substream k of a master seed. Draws from different substreams are
// independent and reproducible regardless of evaluation order, which is
// what lets sweep points and restarts run concurrently.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t k) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(k + 1)));
}

}  // namespace qlab
