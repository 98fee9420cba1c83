#include "collapse/engine.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "collapse/errors.hpp"

namespace collapse {

TimeZeroStats time_zero_stats(const Complex& complex) {
  TimeZeroStats stats;
  stats.degree_counts.assign(kDegreeCap + 2, 0);
  for (std::uint64_t t = 0; t < complex.ridge_count(); ++t) {
    const std::uint32_t k = complex.degree(RidgeId{t});
    ++stats.degree_counts[std::min(k, kDegreeCap + 1)];
  }
  stats.nonisolated = complex.nonisolated_count();
  stats.free = complex.free_count();
  return stats;
}

Epoch1Trace run_epoch1(Complex& complex, std::uint32_t phases) {
  Epoch1Trace trace;
  trace.phases = phases;
  std::vector<RidgeId> snapshot = complex.free_ridges();
  for (std::uint32_t phase = 0; phase < phases; ++phase) {
    std::uint64_t collapsed = 0;
    std::uint64_t skipped = 0;
    std::vector<RidgeId> next;
    for (RidgeId tau : snapshot) {
      if (complex.degree(tau) != 1) {
        ++skipped;
        continue;
      }
      auto result = complex.elementary_collapse(tau);
      ++collapsed;
      next.insert(next.end(), result.newly_free.begin(), result.newly_free.end());
    }
    trace.collapses.push_back(collapsed);
    trace.skipped.push_back(skipped);
    trace.nonisolated.push_back(complex.nonisolated_count());
    // Every ridge free now became free during this phase.
    std::erase_if(next, [&](RidgeId r) { return complex.degree(r) != 1; });
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    snapshot = std::move(next);
  }
  trace.time_zero = time_zero_stats(complex);
  return trace;
}

std::vector<RidgeId> mark_round(const Complex& complex, Rng& rng) {
  std::vector<RidgeId> candidates = complex.free_ridges();
  rng.shuffle(std::span(candidates));
  std::unordered_set<std::uint64_t> used;
  std::vector<RidgeId> marked;
  for (RidgeId tau : candidates) {
    if (used.insert(to_index(complex.unique_coface(tau))).second) marked.push_back(tau);
  }
  rng.shuffle(std::span(marked));
  return marked;
}

Epoch2Trace run_epoch2(Complex& complex, Rng& rng, const Epoch2Options& options) {
  Epoch2Trace trace;
  trace.initial_free = complex.free_count();
  trace.new_free_histogram.assign(complex.d() + 1, 0);
  std::vector<bool> affected_before;
  if (options.record_first_affected) {
    affected_before.assign(complex.ridge_count(), false);
    trace.first_affected_steps = 0;
  }
  std::uint64_t step_index = 0;
  for (;;) {
    const std::vector<RidgeId> marked = mark_round(complex, rng);
    if (marked.empty()) break;
    ++trace.rounds;
    for (RidgeId tau : marked) {
      if (complex.degree(tau) != 1) {
        ++trace.skipped_marked;
        continue;
      }
      const FacetId sigma = complex.unique_coface(tau);
      if (options.record_first_affected) {
        bool first = true;
        for (RidgeId r : complex.boundary(sigma)) {
          if (r == tau) continue;
          if (affected_before[to_index(r)]) first = false;
          affected_before[to_index(r)] = true;
        }
        if (first) ++*trace.first_affected_steps;
      }
      const auto result = complex.elementary_collapse(tau);
      Epoch2Step step;
      step.index = ++step_index;
      step.mark = trace.rounds;
      step.tau = tau;
      step.sigma = result.sigma;
      step.newly_free = static_cast<std::uint32_t>(result.newly_free.size());
      step.lost_isolated = static_cast<std::uint32_t>(result.newly_isolated.size());
      step.free_after = complex.free_count();
      ++trace.new_free_histogram[step.newly_free];
      trace.steps.push_back(step);
    }
  }
  trace.core_facets = complex.facet_count();
  trace.collapsible = complex.empty();
  return trace;
}

std::uint32_t degree_excluding(const Complex& complex, RidgeId tau, FacetId sigma) {
  if (!complex.contains(sigma)) {
    throw InputError("facet " + std::to_string(to_index(sigma)) + " is not in the complex");
  }
  const std::uint32_t deg = complex.degree(tau);
  const auto ridges = complex.boundary(sigma);
  const bool inside = std::find(ridges.begin(), ridges.end(), tau) != ridges.end();
  return inside ? deg - 1 : deg;
}

void verify_accounting(const Epoch2Trace& trace, std::uint32_t d) {
  std::uint64_t previous = trace.initial_free;
  std::uint32_t previous_mark = 0;
  for (const Epoch2Step& step : trace.steps) {
    const std::string where = "step " + std::to_string(step.index) + ": ";
    if (step.newly_free > d) throw InvariantError(where + "Y exceeds d");
    const auto expected = static_cast<std::int64_t>(previous) - 1 + step.newly_free - step.lost_isolated;
    if (expected != static_cast<std::int64_t>(step.free_after)) {
      throw InvariantError(where + "X_i != X_{i-1} - 1 + Y_i - W_i");
    }
    if (step.mark < previous_mark) throw InvariantError(where + "marks decreased");
    previous = step.free_after;
    previous_mark = step.mark;
  }
  std::uint64_t total = 0;
  for (std::uint64_t count : trace.new_free_histogram) total += count;
  if (total != trace.steps.size()) throw InvariantError("S^j histogram does not sum to the step count");
  if (trace.skipped_marked != 0) throw InvariantError("a marked ridge lost its freeness within its round");
}

}  // namespace collapse
