#pragma once

#include <bit>
#include <cstdint>

namespace cubespec {

// splitmix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t Mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Sequential splitmix64 stream. Output depends only on integer arithmetic,
// so streams are identical on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    return Mix64(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double Uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

// Seed for one Monte Carlo trial. Inputs are absorbed one word at a time, each
// followed by a full avalanche round; p enters through its IEEE-754 bit
// pattern so that nearby probabilities never share a stream.
constexpr std::uint64_t DeriveSeed(std::uint64_t master_seed, int n, double p,
                                   std::uint64_t trial_index) noexcept {
  constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  std::uint64_t h = Mix64(master_seed + kGamma);
  h = Mix64(h ^ (static_cast<std::uint64_t>(n) + 2 * kGamma));
  h = Mix64(h ^ (std::bit_cast<std::uint64_t>(p) + 3 * kGamma));
  h = Mix64(h ^ (trial_index + 4 * kGamma));
  return h;
}

}  // namespace cubespec
