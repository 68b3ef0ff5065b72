#pragma once

#include <cstdint>
#include <random>

namespace fominlab {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser; used only to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent engine for Monte Carlo task `stream` under user seed `seed`.
inline Engine make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Engine(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform direction index 0..3 from the top two bits.
inline int uniform_direction(Engine& rng) { return static_cast<int>(rng() >> 62); }

using NormalSampler = std::normal_distribution<double>;

}  // namespace fominlab
