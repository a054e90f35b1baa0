#include "manet/rng.hpp"

namespace manet {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

DeterministicRng::DeterministicRng(std::string_view label, std::uint64_t seed)
    : engine_(splitmix64(seed ^ fnv1a64(label))) {}

std::uint64_t DeterministicRng::next_u64() { return engine_(); }

double DeterministicRng::uniform_double(double lo, double hi) {
    // 53-bit mantissa in [0,1)
    double u = static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * u;
}

std::uint64_t DeterministicRng::uniform_u64(std::uint64_t lo, std::uint64_t hi) {
    // Lemire multiply-shift; bias is negligible for the ranges used here.
    std::uint64_t range = hi - lo + 1;
    if (range == 0) return next_u64(); // full 64-bit range
    unsigned __int128 wide = static_cast<unsigned __int128>(next_u64()) * range;
    return lo + static_cast<std::uint64_t>(wide >> 64);
}

} // namespace manet
