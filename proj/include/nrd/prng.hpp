#ifndef NRD_PRNG_HPP
#define NRD_PRNG_HPP

#include <cmath>
#include <cstdint>

namespace nrd {

/** Counter-based PRNG: every draw is a pure function of (seed, counter),
 * so paths are reproducible under any evaluation order and windows can be
 * extended without re-seeding. Mixer is splitmix64. */
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_pair(std::uint64_t seed, std::uint64_t counter) {
    return mix64(mix64(seed) ^ counter);
}

/** Uniform in (0,1], 53-bit resolution. */
inline double uniform01(std::uint64_t bits) {
    return (double)((bits >> 11) + 1) * 0x1.0p-53;
}

/** Standard normal draw for stream position (seed, index), Box-Muller. */
inline double gaussian(std::uint64_t seed, std::uint64_t index) {
    const double u1 = uniform01(hash_pair(seed, 2 * index));
    const double u2 = uniform01(hash_pair(seed, 2 * index + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace nrd

#endif
