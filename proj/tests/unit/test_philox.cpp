#include <cmath>

#include "core/philox.hpp"

#include "doctest.h"

using namespace retire::rng;

// Known-answer vectors from the Random123 distribution (philox4x32, 10 rounds).
TEST_CASE("philox4x32-10 known answers") {
    auto r0 = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(r0[0] == 0x6627e8d5u);
    CHECK(r0[1] == 0xe169c58du);
    CHECK(r0[2] == 0xbc57ac4cu);
    CHECK(r0[3] == 0x9b00dbd8u);

    auto r1 = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                         {0xffffffffu, 0xffffffffu});
    CHECK(r1[0] == 0x408f276du);
    CHECK(r1[1] == 0x41c83b0eu);
    CHECK(r1[2] == 0xa20bc7c6u);
    CHECK(r1[3] == 0x6d5451fdu);

    auto r2 = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                         {0xa4093822u, 0x299f31d0u});
    CHECK(r2[0] == 0xd16cfe09u);
    CHECK(r2[1] == 0x94fdccebu);
    CHECK(r2[2] == 0x5001e420u);
    CHECK(r2[3] == 0x24126ea1u);
}

TEST_CASE("uniforms live strictly inside (0,1)") {
    CHECK(uniform_open01(0u, 0u) > 0.0);
    CHECK(uniform_open01(0xffffffffu, 0xffffffffu) < 1.0);
}

TEST_CASE("counter stream is a pure function of (seed, substream, path, step)") {
    const CounterRng a(42, 0);
    const CounterRng b(42, 0);
    CHECK(a.normal(7, 13) == b.normal(7, 13));
    CHECK(a.normal(7, 13) == a.normal(7, 13));
    CHECK(a.normal(7, 13) != a.normal(7, 14));
    CHECK(a.normal(7, 13) != a.normal(8, 13));
    CHECK(a.normal(7, 13) != CounterRng(43, 0).normal(7, 13));
    CHECK(a.normal(7, 13) != CounterRng(42, 1).normal(7, 13));
}

TEST_CASE("normal draws have roughly standard moments") {
    const CounterRng g(2024, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = g.normal(static_cast<std::uint64_t>(i), 0);
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}
