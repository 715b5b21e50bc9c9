#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace calband {

using Rng = std::mt19937_64;

/// Named substreams derived from one run seed, so that the environment, each
/// agent's schedule and each agent's forecaster can be replayed in isolation.
enum class Stream : std::uint32_t {
    Environment = 1,
    Schedule = 2,
    Forecaster = 3,
    Baseline = 4,
    Oracle = 5,
};

inline Rng make_stream(std::uint64_t seed, Stream stream, std::uint32_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), index};
    return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace calband
