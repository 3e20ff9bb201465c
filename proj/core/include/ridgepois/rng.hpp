#pragma once

#include <cstdint>
#include <limits>

namespace ridgepois {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Stateless stream derivation: hash(master, a, b).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ (a + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (b + 0xbb67ae8584caa73bULL));
  return h;
}

/// Sub-stream tags so the pieces of one trial never share random numbers.
enum class Stream : std::uint64_t {
  Features = 1,
  Labels = 2,
  Poison = 3,
  TestPoints = 4,
  Trigger = 5,
  Subsample = 6,
  Probe = 7,
};

constexpr std::uint64_t derive_seed(std::uint64_t trial_seed, Stream s) noexcept {
  return derive_seed(trial_seed, static_cast<std::uint64_t>(s));
}

/// Counter-based SplitMix64: the i-th output is mix64(key + (i+1) * gamma).
/// Satisfies UniformRandomBitGenerator. Normal variates come from a fixed
/// Box-Muller transform so every platform produces the same bits.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard normal.
  double normal() noexcept;

  /// Uniform on {-1, +1}.
  double sign() noexcept { return ((*this)() >> 63) != 0 ? 1.0 : -1.0; }

  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ridgepois
