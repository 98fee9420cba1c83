#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "collapse/rng.hpp"

namespace collapse {

/// Rooted d-tree stored as parent-pointer arrays.
///
/// Ridges ((d-1)-faces) are numbered from the root (0) in insertion order.
/// Each facet hangs below a parent ridge and owns d contiguous child ridges
/// one level deeper. Vertex labels are not represented.
class DTree {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  /// A bare root; no ridge may be deeper than radius.
  DTree(std::uint32_t d, std::uint32_t radius);

  std::uint32_t d() const noexcept { return d_; }
  std::uint32_t radius() const noexcept { return radius_; }
  std::size_t ridge_count() const noexcept { return ridge_depth_.size(); }
  std::size_t facet_count() const noexcept { return facet_parent_.size(); }

  std::uint32_t depth(std::uint32_t ridge) const { return ridge_depth_.at(ridge); }
  /// kNone for the root.
  std::uint32_t parent_facet(std::uint32_t ridge) const { return ridge_parent_.at(ridge); }
  std::uint32_t parent_ridge(std::uint32_t facet) const { return facet_parent_.at(facet); }
  std::uint32_t first_child_ridge(std::uint32_t facet) const { return facet_first_child_.at(facet); }
  std::uint32_t child_facet_count(std::uint32_t ridge) const { return ridge_children_.at(ridge); }

  /// Adds a facet under `ridge` with d new child ridges; returns the facet index.
  /// InputError if the new ridges would exceed the radius.
  std::uint32_t attach(std::uint32_t ridge);

 private:
  std::uint32_t d_;
  std::uint32_t radius_;
  std::vector<std::uint32_t> ridge_depth_;
  std::vector<std::uint32_t> ridge_parent_;
  std::vector<std::uint32_t> ridge_children_;
  std::vector<std::uint32_t> facet_parent_;
  std::vector<std::uint32_t> facet_first_child_;
};

/// Draws from T(c, t): grown level by level, every ridge at depth < t gets
/// Poisson(c) child facets.
DTree sample_dtree(double c, std::uint32_t d, std::uint32_t radius, Rng& rng);
DTree sample_dtree(double c, std::uint32_t d, std::uint32_t radius, std::uint64_t seed);

struct TauCollapseResult {
  /// Phase after which the root became isolated (0 = isolated from the start);
  /// nullopt when it survived the budget.
  std::optional<std::uint32_t> isolated_after;
  std::uint32_t root_degree = 0;  // after the phases that ran
};

/// Phased collapsing with snapshot semantics where the root is never collapsed.
TauCollapseResult tau_collapse(const DTree& tree, std::uint32_t phases);

/// How Monte Carlo estimators obtain trees.
enum class TreeSampling {
  /// Materialise each tree with sample_dtree and run tau_collapse.
  kFullTree,
  /// Draw only the Poisson counts the root's outcome depends on, in
  /// depth-first order. Same law as kFullTree, far cheaper for deep trees.
  kLazy,
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Fraction of T(c, t) samples whose root isolates in fewer than t phases.
/// Trial k uses the substream derive_seed(seed, {t, k}).
Estimate estimate_gamma(double c, std::uint32_t d, std::uint32_t t, std::uint64_t trials, std::uint64_t seed,
                        TreeSampling sampling = TreeSampling::kLazy);

/// 1 - estimate_gamma(t + 1).
Estimate estimate_beta(double c, std::uint32_t d, std::uint32_t t, std::uint64_t trials, std::uint64_t seed,
                       TreeSampling sampling = TreeSampling::kLazy);

/// Distribution of the root degree after r root-forbidden phases on T(c, r+1).
/// Entry k is the fraction of trials with degree k; sums to 1. InputError if r < 1.
std::vector<double> root_degree_after_epoch1(double c, std::uint32_t d, std::uint32_t r, std::uint64_t trials,
                                             std::uint64_t seed, TreeSampling sampling = TreeSampling::kLazy);

}  // namespace collapse
