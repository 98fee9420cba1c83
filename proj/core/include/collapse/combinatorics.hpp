#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace collapse {

using Vertex = std::uint32_t;

/// C(n, k) in 64 bits; throws InputError on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Colexicographic combinatorial number system over subsets of {0..n-1}.
///
/// The rank of {v_0 < v_1 < ... < v_{k-1}} is sum_i C(v_i, i + 1). Ranks of
/// k-subsets form a bijection onto [0, C(n, k)), and ordering by rank is the
/// same as comparing the reversed vertex tuples lexicographically.
class ColexCodec {
 public:
  /// Supports subsets of size up to max_size drawn from n vertices.
  ColexCodec(std::uint32_t n, std::uint32_t max_size);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t max_size() const noexcept { return max_size_; }

  /// Number of subsets of the given size.
  std::uint64_t count(std::uint32_t size) const;

  std::uint64_t rank(std::span<const Vertex> vertices) const;
  std::vector<Vertex> unrank(std::uint64_t rank, std::uint32_t size) const;
  void unrank_into(std::uint64_t rank, std::uint32_t size, std::span<Vertex> out) const;

  /// C(v, k) from the table, for 0 <= v <= n and k <= max_size.
  std::uint64_t choose(std::uint32_t v, std::uint32_t k) const {
    return table_[static_cast<std::size_t>(k) * (n_ + 1) + v];
  }

 private:
  void check_size(std::uint32_t size) const;

  std::uint32_t n_;
  std::uint32_t max_size_;
  std::vector<std::uint64_t> table_;  // (max_size + 1) rows of n + 1 entries
};

/// rank_face / unrank_face: convenience wrappers building a temporary codec.
std::uint64_t rank_face(std::span<const Vertex> vertices, std::uint32_t n);
std::vector<Vertex> unrank_face(std::uint64_t rank, std::uint32_t size, std::uint32_t n);

}  // namespace collapse
