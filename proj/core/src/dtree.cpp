#include "collapse/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "collapse/errors.hpp"

namespace collapse {
namespace {

// Lazily sampled T(c, radius). Each call draws the child count of one ridge,
// so a query reads exactly the random variables its answer depends on.
class LazyTree {
 public:
  LazyTree(double c, std::uint32_t d, std::uint32_t radius, Rng& rng) : c_(c), d_(d), radius_(radius), rng_(rng) {}

  std::uint32_t child_count(std::uint32_t depth) { return depth < radius_ ? rng_.poisson(c_) : 0; }

  // Does a ridge at `depth` become isolated within `phases` phases of its own
  // subtree's root-forbidden process? A child facet is removed one phase after
  // its first child ridge isolates.
  bool isolates_within(std::uint32_t depth, std::uint32_t phases) {
    const std::uint32_t children = child_count(depth);
    if (children == 0) return true;
    if (phases == 0) return false;
    for (std::uint32_t f = 0; f < children; ++f) {
      if (!facet_removed_within(depth + 1, phases)) return false;
    }
    return true;
  }

  // Facet whose child ridges sit at child_depth; removed within `phases` phases.
  bool facet_removed_within(std::uint32_t child_depth, std::uint32_t phases) {
    for (std::uint32_t j = 0; j < d_; ++j) {
      if (isolates_within(child_depth, phases - 1)) return true;
    }
    return false;
  }

 private:
  double c_;
  std::uint32_t d_;
  std::uint32_t radius_;
  Rng& rng_;
};

void check_density(double c) {
  if (!(c >= 0.0)) throw InputError("c must be nonnegative");
}

}  // namespace

DTree::DTree(std::uint32_t d, std::uint32_t radius) : d_(d), radius_(radius) {
  if (d < 1) throw InputError("dimension must be at least 1");
  ridge_depth_.push_back(0);
  ridge_parent_.push_back(kNone);
  ridge_children_.push_back(0);
}

std::uint32_t DTree::attach(std::uint32_t ridge) {
  if (ridge >= ridge_count()) throw InputError("no such ridge");
  const std::uint32_t depth = ridge_depth_[ridge] + 1;
  if (depth > radius_) throw InputError("attaching here would exceed the tree radius");
  if (ridge_count() + d_ >= kNone) throw InputError("tree too large");
  const auto facet = static_cast<std::uint32_t>(facet_parent_.size());
  facet_parent_.push_back(ridge);
  facet_first_child_.push_back(static_cast<std::uint32_t>(ridge_count()));
  ++ridge_children_[ridge];
  for (std::uint32_t j = 0; j < d_; ++j) {
    ridge_depth_.push_back(depth);
    ridge_parent_.push_back(facet);
    ridge_children_.push_back(0);
  }
  return facet;
}

DTree sample_dtree(double c, std::uint32_t d, std::uint32_t radius, Rng& rng) {
  check_density(c);
  DTree tree(d, radius);
  // Ridges are appended behind the cursor, so this visits them level by level.
  for (std::uint32_t ridge = 0; ridge < tree.ridge_count(); ++ridge) {
    if (tree.depth(ridge) >= radius) break;
    const std::uint32_t children = rng.poisson(c);
    for (std::uint32_t k = 0; k < children; ++k) tree.attach(ridge);
  }
  return tree;
}

DTree sample_dtree(double c, std::uint32_t d, std::uint32_t radius, std::uint64_t seed) {
  Rng rng(seed);
  return sample_dtree(c, d, radius, rng);
}

TauCollapseResult tau_collapse(const DTree& tree, std::uint32_t phases) {
  const auto ridges = static_cast<std::uint32_t>(tree.ridge_count());
  const std::uint32_t d = tree.d();
  std::vector<std::uint32_t> degree(ridges);
  std::vector<std::uint32_t> incident_xor(ridges, 0);
  for (std::uint32_t r = 0; r < ridges; ++r) degree[r] = tree.child_facet_count(r);
  for (std::uint32_t f = 0; f < tree.facet_count(); ++f) {
    incident_xor[tree.parent_ridge(f)] ^= f;
    for (std::uint32_t j = 0; j < d; ++j) {
      const std::uint32_t child = tree.first_child_ridge(f) + j;
      ++degree[child];
      incident_xor[child] ^= f;
    }
  }

  TauCollapseResult result;
  if (degree[0] == 0) {
    result.isolated_after = 0;
    return result;
  }
  std::vector<std::uint32_t> snapshot;
  for (std::uint32_t r = 1; r < ridges; ++r) {
    if (degree[r] == 1) snapshot.push_back(r);
  }
  const auto remove_facet = [&](std::uint32_t f, std::vector<std::uint32_t>& freed) {
    const auto touch = [&](std::uint32_t r) {
      --degree[r];
      incident_xor[r] ^= f;
      if (r != 0 && degree[r] == 1) freed.push_back(r);
    };
    touch(tree.parent_ridge(f));
    for (std::uint32_t j = 0; j < d; ++j) touch(tree.first_child_ridge(f) + j);
  };
  for (std::uint32_t phase = 1; phase <= phases && !snapshot.empty(); ++phase) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t r : snapshot) {
      if (degree[r] != 1) continue;
      remove_facet(incident_xor[r], next);
    }
    if (degree[0] == 0) {
      result.isolated_after = phase;
      return result;
    }
    std::erase_if(next, [&](std::uint32_t r) { return degree[r] != 1; });
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    snapshot = std::move(next);
  }
  result.root_degree = degree[0];
  return result;
}

Estimate estimate_gamma(double c, std::uint32_t d, std::uint32_t t, std::uint64_t trials, std::uint64_t seed,
                        TreeSampling sampling) {
  check_density(c);
  if (d < 1) throw InputError("dimension must be at least 1");
  if (trials < 1) throw InputError("trials must be at least 1");
  Estimate est;
  est.trials = trials;
  if (t == 0) return est;  // nothing isolates in fewer than zero phases
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, {t, k}));
    bool isolated = false;
    if (sampling == TreeSampling::kFullTree) {
      const DTree tree = sample_dtree(c, d, t, rng);
      isolated = tau_collapse(tree, t - 1).isolated_after.has_value();
    } else {
      isolated = LazyTree(c, d, t, rng).isolates_within(0, t - 1);
    }
    hits += isolated ? 1 : 0;
  }
  est.value = static_cast<double>(hits) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(trials));
  return est;
}

Estimate estimate_beta(double c, std::uint32_t d, std::uint32_t t, std::uint64_t trials, std::uint64_t seed,
                       TreeSampling sampling) {
  Estimate est = estimate_gamma(c, d, t + 1, trials, seed, sampling);
  est.value = 1.0 - est.value;
  return est;
}

std::vector<double> root_degree_after_epoch1(double c, std::uint32_t d, std::uint32_t r, std::uint64_t trials,
                                             std::uint64_t seed, TreeSampling sampling) {
  check_density(c);
  if (r < 1) throw InputError("root_degree_after_epoch1 needs r >= 1");
  if (trials < 1) throw InputError("trials must be at least 1");
  std::vector<std::uint64_t> counts;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, {r, k}));
    std::uint32_t remaining = 0;
    if (sampling == TreeSampling::kFullTree) {
      remaining = tau_collapse(sample_dtree(c, d, r + 1, rng), r).root_degree;
    } else {
      LazyTree tree(c, d, r + 1, rng);
      const std::uint32_t children = tree.child_count(0);
      for (std::uint32_t f = 0; f < children; ++f) {
        if (!tree.facet_removed_within(1, r)) ++remaining;
      }
    }
    if (counts.size() <= remaining) counts.resize(remaining + 1, 0);
    ++counts[remaining];
  }
  std::vector<double> dist(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    dist[k] = static_cast<double>(counts[k]) / static_cast<double>(trials);
  }
  return dist;
}

}  // namespace collapse
