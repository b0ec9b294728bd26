// Counter-based deterministic random stream (splitmix64).
// Every random value in the library is addressed by (seed, index), so results
// do not depend on evaluation order or thread scheduling.
#pragma once

#include <cstdint>

namespace doslab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Value at a given stream position. Two rounds decorrelate seed and index.
inline std::uint64_t stream_at(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform in [0,1) with 53 random bits.
inline double uniform01_at(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(stream_at(seed, index) >> 11) * 0x1.0p-53;
}

// Rademacher +-1 probe entry.
inline double sign_at(std::uint64_t seed, std::uint64_t index) {
    return (stream_at(seed, index) & 1ULL) ? 1.0 : -1.0;
}

} // namespace doslab
