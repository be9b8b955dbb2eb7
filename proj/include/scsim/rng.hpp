// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random number plumbing. The generator (mt19937_64), the
// uniform extraction, and the stream-splitting rule are pinned here so that
// runs reproduce bit-exactly across platforms; the README documents them as
// part of the output format.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scsim {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` derived from a run seed: mix64(seed XOR index).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ index);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF exponential sample with the given mean: -mean * ln(1 - U).
inline double exponential_sample(std::mt19937_64& engine, double mean) {
  return -mean * std::log1p(-uniform_unit(engine));
}

}  // namespace scsim
