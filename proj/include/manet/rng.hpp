#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace manet {

// Labeled deterministic stream: same (label, seed) yields the same draw
// sequence on every run and platform. mt19937_64 output is fully specified
// by the standard; the distributions are hand-rolled because std::uniform_*
// distributions are not portable across library implementations.
class DeterministicRng {
public:
    DeterministicRng(std::string_view label, std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [lo, hi); degenerate lo == hi returns lo exactly.
    double uniform_double(double lo, double hi);

    // Uniform integer on [lo, hi] inclusive.
    std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi);

private:
    std::mt19937_64 engine_;
};

inline DeterministicRng rng_stream(std::string_view label, std::uint64_t seed) {
    return DeterministicRng(label, seed);
}

} // namespace manet
