#pragma once

#include <cstdint>
#include <random>

namespace tailforge {

/// SplitMix64 step; used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for substream (stream, chunk) of a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk = 0) {
    std::uint64_t s = seed;
    std::uint64_t out = splitmix64(s);
    s = out ^ (stream * 0xD1B54A32D192ED03ULL);
    out = splitmix64(s);
    s = out ^ (chunk * 0x8CB92BA72F3D8DD7ULL);
    return splitmix64(s);
}

/// MT19937-64 seeded through SplitMix64; the engine's output sequence is fixed by the C++ standard.
inline std::mt19937_64 make_engine(std::uint64_t seed) {
    std::uint64_t s = seed;
    return std::mt19937_64(splitmix64(s));
}

/// Uniform on (0, 1] with 53 random bits; never returns 0.
inline double uniform_open_closed(std::mt19937_64& g) {
    return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace tailforge
