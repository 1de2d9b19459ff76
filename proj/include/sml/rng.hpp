#pragma once
// Seed derivation for reproducible parallel Monte Carlo.
//
// Every random quantity in the project is drawn from an std::mt19937_64
// seeded through derive_seed(), so results depend only on the master seed
// and the logical index of the work item, never on thread scheduling.

#include <cstdint>
#include <random>

namespace sml {

// SplitMix64 finalizer (Steele, Lea, Flood; public-domain constants).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed-tree tags. The hierarchy is
//   master -> training set -> run -> agent stream,
// with separate branches for mean estimation and Rademacher draws.
enum class SeedTag : std::uint64_t {
    training_set = 1,
    run          = 2,
    agent        = 3,
    stream       = 4,
    means        = 5,
    rademacher   = 6,
    init         = 7,
    shuffle      = 8,
    block        = 9,
};

inline std::uint64_t derive_seed(std::uint64_t parent, SeedTag tag, std::uint64_t index) {
    ::std::uint64_t x = splitmix64(parent ^ splitmix64(static_cast<std::uint64_t>(tag)));
    return splitmix64(x ^ splitmix64(index));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

}  // namespace sml
