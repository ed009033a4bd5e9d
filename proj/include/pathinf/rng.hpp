#pragma once

#include <cstdint>
#include <random>

namespace pathinf {

using Rng = std::mt19937_64;

// Named sub-streams derived from one master seed. Every random draw in the
// pipeline flows through derive_seed so that per-item generation can be
// parallelized while reproducing the serial output exactly.
enum class SeedStream : std::uint64_t {
    Dag = 1,
    Sample = 2,
    Solver = 3,
    Subsample = 4,
    Sweep = 5,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, SeedStream stream,
                                    std::uint64_t index = 0) {
    std::uint64_t s = splitmix64(master ^ (0xa0761d6478bd642fULL *
                                           (static_cast<std::uint64_t>(stream) + 1)));
    return splitmix64(s + 0x9e3779b97f4a7c15ULL * (index + 1));
}

inline Rng make_rng(std::uint64_t master, SeedStream stream, std::uint64_t index = 0) {
    return Rng(derive_seed(master, stream, index));
}

}  // namespace pathinf
