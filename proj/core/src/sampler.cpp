#include "collapse/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "collapse/errors.hpp"
#include "collapse/rng.hpp"

namespace collapse {

ModelParams ModelParams::from_density(std::uint32_t n, std::uint32_t d, double c, std::uint64_t seed) {
  if (!(c >= 0.0)) throw InputError("density c must be nonnegative");
  if (n == 0) throw InputError("vertex count must be positive");
  return ModelParams{n, d, std::min(1.0, c / n), seed};
}

void ModelParams::validate() const {
  if (d < 1) throw InputError("dimension must be at least 1");
  if (n <= d) throw InputError("vertex count n=" + std::to_string(n) + " must exceed d=" + std::to_string(d));
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("inclusion probability must lie in [0, 1]");
}

Complex sample_complex(const ModelParams& params) {
  params.validate();
  Complex complex(params.n, params.d);
  const std::uint64_t space = complex.facet_space();
  if (params.p == 0.0) return complex;
  if (params.p == 1.0) {
    for (std::uint64_t f = 0; f < space; ++f) complex.add_facet(FacetId{f});
    return complex;
  }
  Rng rng(params.seed);
  std::uint64_t next = rng.geometric(params.p);
  while (next < space) {
    complex.add_facet(FacetId{next});
    const std::uint64_t skip = rng.geometric(params.p);
    if (skip >= space - next - 1) break;
    next += skip + 1;
  }
  return complex;
}

}  // namespace collapse
