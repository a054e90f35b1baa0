#pragma once

#include <compare>
#include <cstdint>

namespace manet {

// Integer microsecond ticks. Event ordering and trace hashes must be
// platform-stable, so no floating-point time anywhere in the engine.
struct Duration {
    std::uint64_t us = 0;

    static constexpr Duration from_seconds(double s) {
        return Duration{static_cast<std::uint64_t>(s * 1e6 + 0.5)};
    }
    static constexpr Duration from_ms(double ms) {
        return Duration{static_cast<std::uint64_t>(ms * 1e3 + 0.5)};
    }
    constexpr double seconds() const { return static_cast<double>(us) / 1e6; }
    auto operator<=>(const Duration&) const = default;
};

struct SimTime {
    std::uint64_t us = 0;

    static constexpr SimTime from_seconds(double s) {
        return SimTime{static_cast<std::uint64_t>(s * 1e6 + 0.5)};
    }
    constexpr double seconds() const { return static_cast<double>(us) / 1e6; }
    auto operator<=>(const SimTime&) const = default;
};

constexpr SimTime operator+(SimTime t, Duration d) { return SimTime{t.us + d.us}; }
constexpr Duration operator-(SimTime a, SimTime b) { return Duration{a.us - b.us}; }
constexpr Duration operator+(Duration a, Duration b) { return Duration{a.us + b.us}; }

} // namespace manet
