#pragma once

#include <cstdint>

#include "collapse/complex.hpp"

namespace collapse {

/// Parameters of X_d(n, p).
struct ModelParams {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  double p = 0.0;
  std::uint64_t seed = 0;

  /// p = c / n, clamped to 1.
  static ModelParams from_density(std::uint32_t n, std::uint32_t d, double c, std::uint64_t seed);

  /// InputError unless n > d >= 1 and 0 <= p <= 1.
  void validate() const;
};

/// Includes each of the C(n, d+1) candidate facets independently with
/// probability p. Geometric skips over the rank space keep the cost
/// proportional to the number of facets drawn.
Complex sample_complex(const ModelParams& params);

}  // namespace collapse
