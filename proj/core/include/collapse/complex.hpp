#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "collapse/combinatorics.hpp"

namespace collapse {

/// Colex rank of a (d-1)-face (d vertices) among all d-subsets of the vertex set.
enum class RidgeId : std::uint64_t {};
/// Colex rank of a d-face (d+1 vertices) among all (d+1)-subsets of the vertex set.
enum class FacetId : std::uint64_t {};

constexpr std::uint64_t to_index(RidgeId id) noexcept { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t to_index(FacetId id) noexcept { return static_cast<std::uint64_t>(id); }

/// Outcome of one elementary collapse. The two sets are disjoint subsets of the
/// d affected ridges (all (d-1)-subfaces of the removed facet other than tau).
struct CollapseResult {
  RidgeId tau;
  FacetId sigma;
  std::vector<RidgeId> newly_free;      // degree dropped 2 -> 1
  std::vector<RidgeId> newly_isolated;  // degree dropped 1 -> 0
};

/// An n-vertex d-complex with full (d-1)-skeleton.
///
/// Only d-faces (facets) are stored explicitly. Every (d-1)-face (ridge) is
/// implicitly present; per-ridge degree and the XOR of the containing facet
/// ranks are kept in dense arrays indexed by ridge rank, so the unique coface
/// of a free ridge is available in O(1). The set of free ridges is maintained
/// incrementally.
class Complex {
 public:
  /// Empty complex. Requires n > d >= 1.
  Complex(std::uint32_t n, std::uint32_t d);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t d() const noexcept { return d_; }
  const ColexCodec& codec() const noexcept { return codec_; }

  /// C(n, d), the number of (d-1)-faces.
  std::uint64_t ridge_count() const noexcept { return degree_.size(); }
  /// C(n, d+1), the number of candidate d-faces.
  std::uint64_t facet_space() const noexcept { return facet_space_; }
  std::size_t facet_count() const noexcept { return facets_.size(); }
  bool empty() const noexcept { return facets_.empty(); }

  bool contains(FacetId sigma) const { return facets_.contains(to_index(sigma)); }
  /// Present facets in ascending rank.
  std::vector<FacetId> facets() const;

  void add_facet(FacetId sigma);
  void add_facet(std::span<const Vertex> vertices) { add_facet(facet_id(vertices)); }
  void remove_facet(FacetId sigma);

  std::uint32_t degree(RidgeId tau) const;
  std::vector<FacetId> cofaces(RidgeId tau) const;
  /// The containing facet of a free ridge. PreconditionError unless degree(tau) == 1.
  FacetId unique_coface(RidgeId tau) const;

  /// Free ridges in ascending rank.
  std::vector<RidgeId> free_ridges() const;
  std::size_t free_count() const noexcept { return free_list_.size(); }
  /// Ridges with positive degree.
  std::uint64_t nonisolated_count() const noexcept { return nonisolated_; }

  /// Removes tau and its unique coface sigma. PreconditionError if tau is not free.
  CollapseResult elementary_collapse(RidgeId tau);

  RidgeId ridge_id(std::span<const Vertex> vertices) const;
  FacetId facet_id(std::span<const Vertex> vertices) const;
  std::vector<Vertex> vertices(RidgeId tau) const;
  std::vector<Vertex> vertices(FacetId sigma) const;
  /// The d+1 ridges of sigma; entry i omits the i-th vertex.
  std::vector<RidgeId> boundary(FacetId sigma) const;

  friend bool operator==(const Complex& a, const Complex& b);

 private:
  void boundary_into(FacetId sigma, std::span<RidgeId> out) const;
  void bump(RidgeId tau, FacetId sigma, int delta);
  void set_free(std::uint64_t ridge, bool is_free);

  static constexpr std::uint32_t kNotFree = UINT32_MAX;

  std::uint32_t n_;
  std::uint32_t d_;
  ColexCodec codec_;
  std::uint64_t facet_space_;
  std::unordered_set<std::uint64_t> facets_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::uint64_t> coface_xor_;
  std::vector<std::uint64_t> free_list_;
  std::vector<std::uint32_t> free_pos_;
  std::uint64_t nonisolated_ = 0;
};

std::uint32_t degree(const Complex& complex, RidgeId tau);
std::vector<RidgeId> free_faces(const Complex& complex);
CollapseResult elementary_collapse(Complex& complex, RidgeId tau);

enum class OrderPolicy { kDeterministic, kSeededRandom };

/// The d-core: the maximal sub-collection of facets with no free ridge. The
/// result does not depend on collapse order; `seed` only matters for
/// kSeededRandom.
Complex d_core(const Complex& complex, OrderPolicy policy = OrderPolicy::kDeterministic,
               std::uint64_t seed = 0);

/// True iff the d-core is empty. The empty complex is collapsible.
bool is_collapsible(const Complex& complex);

/// Some (d+2)-vertex set whose (d+1)-subsets are all present facets, if any.
std::optional<std::vector<Vertex>> contains_simplex_boundary(const Complex& complex);

/// Acyclicity of a 1-complex by disjoint-set union. InputError unless d == 1.
bool is_forest(const Complex& complex);

}  // namespace collapse
