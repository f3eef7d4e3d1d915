// Copyright 2026 The qcube Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace qcube {

/// SplitMix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Counter-based generator: every draw is a pure function of (seed, keys),
/// so parallel sweeps are deterministic regardless of evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t at(std::uint64_t k0, std::uint64_t k1 = 0,
                   std::uint64_t k2 = 0) const {
    std::uint64_t h = mix64(seed_ ^ 0x5851f42d4c957f2dull);
    h = mix64(h ^ k0);
    h = mix64(h ^ k1);
    h = mix64(h ^ k2);
    return h;
  }

  /// Substream generator for coordinate (k0,...); substreams never collide
  /// with direct draws of the parent (domain tag differs).
  CounterRng split(std::uint64_t k0, std::uint64_t k1 = 0) const {
    std::uint64_t h = mix64(seed_ ^ 0x94d049bb133111ebull);
    h = mix64(h ^ k0);
    h = mix64(h ^ k1);
    return CounterRng(h);
  }

  double uniform01(std::uint64_t k0, std::uint64_t k1 = 0,
                   std::uint64_t k2 = 0) const {
    return static_cast<double>(at(k0, k1, k2) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace qcube
