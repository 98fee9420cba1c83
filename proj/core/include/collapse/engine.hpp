#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "collapse/complex.hpp"
#include "collapse/rng.hpp"

namespace collapse {

/// Degree histograms are exact for k <= kDegreeCap; the final bucket counts k > kDegreeCap.
inline constexpr std::uint32_t kDegreeCap = 20;

/// Degree statistics of a complex at the start of the one-by-one epoch.
struct TimeZeroStats {
  std::uint64_t nonisolated = 0;    // L: ridges of positive degree
  std::uint64_t free = 0;           // X_0: ridges of degree 1
  std::vector<std::uint64_t> degree_counts;  // D_k, k = 0..kDegreeCap, then overflow
};

TimeZeroStats time_zero_stats(const Complex& complex);

struct Epoch1Trace {
  std::uint32_t phases = 0;
  std::vector<std::uint64_t> collapses;    // per phase
  std::vector<std::uint64_t> skipped;      // snapshot ridges already isolated when reached
  std::vector<std::uint64_t> nonisolated;  // B_j after phase j
  TimeZeroStats time_zero;
};

/// Runs `phases` parallel phases. Each phase snapshots the free ridges and
/// collapses them in ascending rank, skipping any whose coface is already gone.
Epoch1Trace run_epoch1(Complex& complex, std::uint32_t phases);

/// One marking stage: greedily keeps free ridges in uniformly random order as
/// long as they share no facet with an already kept ridge, then returns the
/// kept ridges in a fresh uniform permutation.
///
/// Two free ridges are neighbors exactly when they are free in the same facet,
/// so this keeps one uniformly chosen free ridge per facet that has any.
std::vector<RidgeId> mark_round(const Complex& complex, Rng& rng);

struct Epoch2Step {
  std::uint64_t index = 0;  // i, 1-based
  std::uint32_t mark = 0;   // k, 1-based round
  RidgeId tau{};
  FacetId sigma{};
  std::uint32_t newly_free = 0;      // Y_i
  std::uint32_t lost_isolated = 0;   // W_i
  std::uint64_t free_after = 0;      // X_i
};

struct Epoch2Options {
  /// Track whether every affected ridge of a step is affected for the first time.
  bool record_first_affected = false;
};

struct Epoch2Trace {
  std::uint64_t initial_free = 0;  // X_0
  std::vector<Epoch2Step> steps;
  std::vector<std::uint64_t> new_free_histogram;  // S^j counts, j = 0..d
  std::uint32_t rounds = 0;
  /// Marked ridges that stopped being free before their turn. Always 0.
  std::uint64_t skipped_marked = 0;
  std::optional<std::uint64_t> first_affected_steps;
  std::uint64_t core_facets = 0;
  bool collapsible = false;
};

/// Repeats mark rounds until no ridge is free, collapsing marked ridges in
/// permutation order. Leaves the complex at its d-core.
Epoch2Trace run_epoch2(Complex& complex, Rng& rng, const Epoch2Options& options = {});

/// Degree of tau with sigma discounted. InputError if sigma is absent.
std::uint32_t degree_excluding(const Complex& complex, RidgeId tau, FacetId sigma);

/// Checks X_i = X_{i-1} - 1 + Y_i - W_i, 0 <= Y_i <= d, nondecreasing marks,
/// and the S^j totals. Throws InvariantError naming the first failing step.
void verify_accounting(const Epoch2Trace& trace, std::uint32_t d);

}  // namespace collapse
