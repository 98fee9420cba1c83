#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace collapse {

__extension__ typedef unsigned __int128 Uint128;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Substream seed for (base, i0, i1, ...): h = splitmix64(base), then
/// h = splitmix64(h ^ splitmix64(i_k)) for each index in order. A trial's
/// stream depends only on its coordinates, never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t idx : path) h = splitmix64(h ^ splitmix64(idx));
  return h;
}

/// Reproducible random source: std::mt19937_64 plus distributions written out
/// here, because the standard library's distribution algorithms differ between
/// implementations and would break bit-identical results across toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, bound), bound > 0. Lemire's nearly-divisionless rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    Uint128 m = static_cast<Uint128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<Uint128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Poisson(mean) by sequential inversion; intended for mean below ~50.
  std::uint32_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double u = uniform01();
    double pmf = std::exp(-mean);
    double cdf = pmf;
    std::uint32_t k = 0;
    while (u >= cdf) {
      ++k;
      pmf *= mean / k;
      const double next = cdf + pmf;
      if (next == cdf) break;  // tail below double resolution
      cdf = next;
    }
    return k;
  }

  /// Failures before the first success in Bernoulli(p) trials, 0 < p < 1.
  std::uint64_t geometric(double p) {
    const double u = 1.0 - uniform01();  // (0, 1]
    const double skip = std::floor(std::log(u) / std::log1p(-p));
    if (!(skip < 1.8e19)) return UINT64_MAX;
    return static_cast<std::uint64_t>(skip);
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace collapse
