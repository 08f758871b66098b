#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rqm {

using rng_t = std::mt19937_64;

inline constexpr std::string_view rng_algorithm =
    "mt19937_64 seeded by std::seed_seq{seed_lo, seed_hi, stream_lo, stream_hi}";

// Stream tags keep data generation and solver trials on disjoint streams.
inline constexpr std::uint64_t data_stream = 0x64617461;  // "data"
inline constexpr std::uint64_t trial_stream = 1;
inline constexpr std::uint64_t verify_stream = 0x76657269;  // "veri"

inline rng_t make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return rng_t(seq);
}

// Trial t of an experiment seeded with `seed` runs on seed + t.
inline rng_t make_trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return make_stream(seed + trial, trial_stream);
}

}  // namespace rqm
