#pragma once

#include <cstdint>
#include <random>

namespace qlab {

/// Deterministic stream derivation: every random consumer gets its own
/// generator keyed by (seed, stream ids), so parallel and serial execution
/// of independent work items draw identical numbers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    std::uint64_t mixed = splitmix64(s);
    s ^= a * 0xd1342543de82ef95ULL;
    mixed ^= splitmix64(s);
    s ^= b * 0xaf251af3b0f025b5ULL;
    mixed ^= splitmix64(s);
    return std::mt19937_64(mixed);
}

} // namespace qlab
