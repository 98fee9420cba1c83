#include "collapse/combinatorics.hpp"

#include <limits>
#include <string>

#include "collapse/errors.hpp"
#include "collapse/rng.hpp"

namespace collapse {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Uint128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral: it is C(n - k + i, i).
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw InputError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                       ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

ColexCodec::ColexCodec(std::uint32_t n, std::uint32_t max_size)
    : n_(n), max_size_(max_size), table_((static_cast<std::size_t>(max_size) + 1) * (n + 1)) {
  for (std::uint32_t k = 0; k <= max_size_; ++k) {
    for (std::uint32_t v = 0; v <= n_; ++v) {
      std::uint64_t value = 0;
      if (k == 0) {
        value = 1;
      } else if (v >= k) {
        // Pascal: C(v, k) = C(v-1, k) + C(v-1, k-1).
        const std::uint64_t a = table_[static_cast<std::size_t>(k) * (n_ + 1) + v - 1];
        const std::uint64_t b = table_[static_cast<std::size_t>(k - 1) * (n_ + 1) + v - 1];
        if (a > std::numeric_limits<std::uint64_t>::max() - b) {
          throw InputError("C(" + std::to_string(n) + ", " + std::to_string(max_size) +
                           ") overflows 64 bits");
        }
        value = a + b;
      }
      table_[static_cast<std::size_t>(k) * (n_ + 1) + v] = value;
    }
  }
}

void ColexCodec::check_size(std::uint32_t size) const {
  if (size > max_size_) {
    throw InputError("subset size " + std::to_string(size) + " exceeds codec limit " +
                     std::to_string(max_size_));
  }
}

std::uint64_t ColexCodec::count(std::uint32_t size) const {
  check_size(size);
  return choose(n_, size);
}

std::uint64_t ColexCodec::rank(std::span<const Vertex> vertices) const {
  check_size(static_cast<std::uint32_t>(vertices.size()));
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= n_) {
      throw InputError("vertex " + std::to_string(vertices[i]) + " out of range [0, " +
                       std::to_string(n_) + ")");
    }
    if (i > 0 && vertices[i] <= vertices[i - 1]) {
      throw InputError("face vertices must be strictly increasing");
    }
    r += choose(vertices[i], static_cast<std::uint32_t>(i + 1));
  }
  return r;
}

void ColexCodec::unrank_into(std::uint64_t rank, std::uint32_t size, std::span<Vertex> out) const {
  check_size(size);
  if (out.size() != size) throw InputError("unrank output span has the wrong length");
  if (rank >= choose(n_, size)) {
    throw InputError("rank " + std::to_string(rank) + " out of range for " + std::to_string(size) +
                     "-subsets of " + std::to_string(n_) + " vertices");
  }
  std::uint32_t hi = n_;  // exclusive upper bound for the current vertex
  for (std::uint32_t i = size; i-- > 0;) {
    // Largest v in [i, hi) with C(v, i + 1) <= rank.
    std::uint32_t lo = i;
    std::uint32_t top = hi - 1;
    while (lo < top) {
      const std::uint32_t mid = lo + (top - lo + 1) / 2;
      if (choose(mid, i + 1) <= rank) {
        lo = mid;
      } else {
        top = mid - 1;
      }
    }
    out[i] = lo;
    rank -= choose(lo, i + 1);
    hi = lo;
  }
}

std::vector<Vertex> ColexCodec::unrank(std::uint64_t rank, std::uint32_t size) const {
  std::vector<Vertex> out(size);
  unrank_into(rank, size, out);
  return out;
}

std::uint64_t rank_face(std::span<const Vertex> vertices, std::uint32_t n) {
  return ColexCodec(n, static_cast<std::uint32_t>(vertices.size())).rank(vertices);
}

std::vector<Vertex> unrank_face(std::uint64_t rank, std::uint32_t size, std::uint32_t n) {
  return ColexCodec(n, size).unrank(rank, size);
}

}  // namespace collapse
