#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lgtbids {

// splitmix64 finalizer; used only for seed derivation, never as a stream.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based seed split: the seed for stream `index` under `parent` is a
/// pure function of both, so trials can run in any order or on any thread.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

/// Named sub-streams within a trial.
enum class Stream : std::uint64_t {
  ChannelSampling = 1,
  AttackDraws = 2,
  Remediation = 3,
};

constexpr std::uint64_t derive_seed(std::uint64_t parent, Stream s) noexcept {
  return derive_seed(parent, static_cast<std::uint64_t>(s) << 48);
}

/// mt19937_64 engine with hand-rolled conversions. The standard
/// distributions are implementation-defined, which would make outputs differ
/// between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // Lemire-style rejection keeps the draw unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Unit-mean exponential (power gain of a Rayleigh-faded channel).
  double exponential() { return -std::log1p(-uniform01()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lgtbids
