#pragma once

#include <cstdint>
#include <random>

#include "isac/types.hpp"

namespace isac {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `master`. Streams depend only on the pair, so
/// a trial draws the same numbers no matter which worker runs it.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Named sub-streams of one trial.
enum class Substream : std::uint64_t { kChannel = 1, kGaussianTx = 2, kDeterministicTx = 3, kNoise = 4 };

constexpr std::uint64_t substream_seed(std::uint64_t trial_seed, Substream s) {
  return stream_seed(trial_seed, static_cast<std::uint64_t>(s));
}

using Rng = std::mt19937_64;

/// Standard circularly-symmetric complex Gaussian sample, E|z|² = 1.
inline Complex draw_cn(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace isac
