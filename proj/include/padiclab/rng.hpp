#pragma once

#include <cstdint>
#include <random>

namespace padiclab {

// splitmix64, used to derive independent child seeds from a master seed.
// Fixtures are generated from (seed, stream) pairs so that any failing
// fixture can be replayed from the report alone.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 child_rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xa5a5a5a5a5a5a5a5ULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<unsigned>(a), static_cast<unsigned>(a >> 32),
                      static_cast<unsigned>(b), static_cast<unsigned>(b >> 32)};
    return std::mt19937_64(seq);
}

} // namespace padiclab
