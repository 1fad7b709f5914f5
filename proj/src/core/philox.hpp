#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

// Philox4x32-10 counter-based generator.
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.

namespace retire::rng {

namespace detail {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        detail::mulhilo(kM0, ctr[0], lo0, hi0);
        detail::mulhilo(kM1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

// Uniform in the open interval (0,1) from 64 random bits (top 52 used; the
// +0.5 offset stays exactly representable, so neither endpoint is reachable).
inline double uniform_open01(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Stateless stream: every draw is a pure function of (seed, substream, path,
// step), so path simulation can be scheduled in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint32_t substream) : seed_(seed), substream_(substream) {}

    std::pair<double, double> uniform_pair(std::uint64_t path, std::uint64_t step) const {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
            static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
        const std::array<std::uint32_t, 2> key = {
            static_cast<std::uint32_t>(seed_),
            static_cast<std::uint32_t>(seed_ >> 32) ^ (0x6A09E667u * substream_)};
        const auto r = philox4x32(ctr, key);
        return {uniform_open01(r[0], r[1]), uniform_open01(r[2], r[3])};
    }

    double uniform(std::uint64_t path, std::uint64_t step) const {
        return uniform_pair(path, step).first;
    }

    // One standard normal per (path, step) by Box-Muller.
    double normal(std::uint64_t path, std::uint64_t step) const {
        const auto [u1, u2] = uniform_pair(path, step);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::uint64_t seed_;
    std::uint32_t substream_;
};

// Substream allocation for the simulator.
inline constexpr std::uint32_t kSubstreamIncrements = 0;
inline constexpr std::uint32_t kSubstreamBridge = 1;
inline constexpr std::uint32_t kSubstreamExact = 2;

}  // namespace retire::rng
