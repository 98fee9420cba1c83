#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace collapse {

struct ExperimentConfig {
  std::uint32_t d = 2;
  std::uint32_t n = 100;
  /// Epoch-1 phases; when unset, theory::choose_r(c, d, delta) per grid point.
  std::optional<std::uint32_t> r;
  std::vector<double> c_grid;
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 0;
  double delta = 0.01;
  bool record_first_affected = false;
  /// 0 = hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct RowKey {
  std::uint32_t d = 0;
  std::uint32_t n = 0;
  double c = 0.0;
  std::uint32_t r = 0;

  friend bool operator==(const RowKey&, const RowKey&) = default;
};

/// Everything recorded about one sampled complex.
struct TrialResult {
  std::uint64_t seed = 0;
  std::uint64_t facets = 0;
  bool collapsible = false;
  bool has_simplex_boundary = false;
  std::optional<bool> forest;  // d = 1 only
  std::uint64_t x0 = 0;
  std::uint64_t nonisolated = 0;
  std::vector<std::uint64_t> degree_counts;
  std::uint64_t steps = 0;
  std::uint64_t y_sum = 0;
  std::uint64_t prefix_steps = 0;
  std::uint64_t prefix_y_sum = 0;
  std::uint64_t lossy_steps = 0;  // steps with W_i > 0
  std::uint32_t max_mark = 0;
  std::uint64_t core_facets = 0;
  std::optional<std::uint64_t> first_affected_steps;
};

/// Averages over the trials of one grid point. Fractions are of C(n, d)
/// unless named otherwise; Y means are pooled over steps.
struct EmpiricalRow {
  std::uint64_t trials = 0;
  double collapsible_frac = 0.0;
  double boundary_frac = 0.0;
  double dichotomy_frac = 0.0;  // collapsible or containing a (d+1)-simplex boundary
  std::optional<double> forest_frac;
  double mean_facets = 0.0;
  double mean_x0_frac = 0.0;
  double mean_l_frac = 0.0;
  std::vector<double> degree_frac;  // k = 0..kDegreeCap, then overflow
  double mean_steps = 0.0;
  double mean_y = 0.0;
  double mean_y_prefix = 0.0;
  std::uint64_t prefix_steps = 0;
  std::uint32_t max_mark = 0;
  double lossy_step_frac = 0.0;
  std::optional<double> first_affected_frac;
};

struct TheoryRow {
  RowKey key;
  double c_d = 0.0;
  /// Present only when r >= 2.
  std::optional<double> exp_x0_frac;
  std::optional<double> exp_l_frac;
  std::vector<double> exp_dk_frac;         // root-forbidden degree law, k = 0..kDegreeCap
  std::vector<double> exp_time_zero_frac;  // ordinary-process degree law, k = 0..kDegreeCap
  std::optional<double> drift;             // d x
};

TheoryRow theory_row(const RowKey& key);

struct ReportRow {
  RowKey key;
  EmpiricalRow empirical;
  TheoryRow theory;
  std::vector<std::uint64_t> seeds;
};

struct ExperimentReport {
  std::string version;
  std::uint64_t base_seed = 0;
  std::vector<ReportRow> rows;
  double wall_seconds = 0.0;  // not serialized unless asked, so reports stay reproducible
};

/// Seed of trial `trial` at grid index `grid`: derive_seed(base, {grid, trial}).
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t grid, std::uint64_t trial);

/// Sample, peel with both epochs, and cross-check one complex. Throws
/// InvariantError when any engine invariant fails.
TrialResult run_trial(std::uint32_t n, std::uint32_t d, double c, std::uint32_t r, std::uint64_t seed,
                      bool record_first_affected = false);

EmpiricalRow aggregate(std::uint32_t d, std::uint32_t n, std::span<const TrialResult> trials);

/// Phases used at a grid point when the config leaves r unset. Falls back to
/// the smallest r >= 2 with E[X_0] <= delta C(n,d) for subcritical c.
std::uint32_t default_phases(double c, std::uint32_t d, double delta);

/// Runs every trial of every grid point; deterministic in the config alone.
ExperimentReport run_mc_sweep(const ExperimentConfig& config);

struct Tolerances {
  double x0_rel = 0.10;
  double l_rel = 0.05;
  double dk_rel = 0.10;
  std::uint32_t dk_max = 5;
  double y_slack = 0.15;
};

struct RowComparison {
  RowKey key;
  bool compared = false;  // false when the row has no expectation columns (r < 2)
  double x0_rel = 0.0;
  double l_rel = 0.0;
  std::vector<double> dk_rel;
  bool y_ok = true;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

struct ComparisonTable {
  std::vector<RowComparison> rows;
  bool pass = true;
};

/// Relative errors of X_0, L and D_k (k <= dk_max) against theory, and the
/// bound mean Y <= d x (1 + slack). InputError if a theory row's key differs
/// from its empirical row.
ComparisonTable compare_report(const ExperimentReport& report, const Tolerances& tolerances = {});

nlohmann::json report_to_json(const ExperimentReport& report, bool include_timing = false);
ExperimentReport report_from_json(const nlohmann::json& json);
void write_report_csv(const ExperimentReport& report, std::ostream& out);
nlohmann::json comparison_to_json(const ComparisonTable& table);

}  // namespace collapse
