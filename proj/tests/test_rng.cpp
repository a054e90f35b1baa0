#include "manet/rng.hpp"

#include <doctest.h>

using namespace manet;

TEST_CASE("same label and seed reproduce the same draws") {
    auto a = rng_stream("mobility", 42);
    auto b = rng_stream("mobility", 42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different labels with the same seed give independent streams") {
    auto a = rng_stream("mobility", 42);
    auto b = rng_stream("traffic", 42);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("different seeds diverge") {
    auto a = rng_stream("mobility", 1);
    auto b = rng_stream("mobility", 2);
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("uniform_double stays in [lo, hi) and covers the interval") {
    auto g = rng_stream("u", 9);
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 10000; ++i) {
        double v = g.uniform_double(-3.0, 7.0);
        CHECK(v >= -3.0);
        CHECK(v < 7.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo < -2.5);
    CHECK(hi > 6.5);
}

TEST_CASE("degenerate uniform_double interval returns the bound exactly") {
    auto g = rng_stream("u", 9);
    for (int i = 0; i < 10; ++i) CHECK(g.uniform_double(5.0, 5.0) == 5.0);
}

TEST_CASE("uniform_u64 respects inclusive bounds") {
    auto g = rng_stream("i", 3);
    bool saw_lo = false, saw_hi = false;
    for (int i = 0; i < 5000; ++i) {
        auto v = g.uniform_u64(10, 17);
        CHECK(v >= 10);
        CHECK(v <= 17);
        saw_lo |= v == 10;
        saw_hi |= v == 17;
    }
    CHECK(saw_lo);
    CHECK(saw_hi);
}
