#include "collapse/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "collapse/complex.hpp"
#include "collapse/engine.hpp"
#include "collapse/errors.hpp"
#include "collapse/rng.hpp"
#include "collapse/sampler.hpp"
#include "collapse/theory.hpp"

#ifndef COLLAPSE_LAB_VERSION
#define COLLAPSE_LAB_VERSION "0.0.0"
#endif

namespace collapse {
namespace {

// Substream index of the epoch-2 permutation source, under each trial's seed.
constexpr std::uint64_t kEpoch2Stream = 2;

double beta_before(double c, std::uint32_t d, std::uint32_t r) {
  if (r == 0) return 1.0;  // 1 - gamma_0
  return theory::gamma_beta_seq(c, d, r - 1).beta[r - 1];
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // Report the lowest failing index so diagnostics do not depend on scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double relative_error(double empirical, double expected) {
  if (expected == 0.0) return std::abs(empirical);
  return std::abs(empirical - expected) / std::abs(expected);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d < 1) throw InputError("d must be at least 1");
  if (n <= d) throw InputError("n must exceed d");
  if (trials < 1) throw InputError("trials must be at least 1");
  if (c_grid.empty()) throw InputError("c grid must not be empty");
  for (double c : c_grid) {
    if (!(c >= 0.0)) throw InputError("grid values must be nonnegative");
  }
  if (!(delta > 0.0)) throw InputError("delta must be positive");
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t grid, std::uint64_t trial) {
  return derive_seed(base_seed, {grid, trial});
}

TheoryRow theory_row(const RowKey& key) {
  TheoryRow row;
  row.key = key;
  row.c_d = theory::c_threshold(key.d).c_d;
  if (key.r >= 2) {
    const theory::TheoryProfile p = theory::expectations(key.c, key.d, key.r);
    row.exp_x0_frac = p.exp_X0_frac;
    row.exp_l_frac = p.exp_L_frac;
    row.exp_dk_frac = p.exp_Dk_frac;
    for (std::uint32_t k = 0; k <= kDegreeCap; ++k) row.exp_time_zero_frac.push_back(p.time_zero_degree_frac(k));
    row.drift = p.exp_Y_bound;
  }
  return row;
}

TrialResult run_trial(std::uint32_t n, std::uint32_t d, double c, std::uint32_t r, std::uint64_t seed,
                      bool record_first_affected) {
  const Complex original = sample_complex(ModelParams::from_density(n, d, c, seed));
  TrialResult out;
  out.seed = seed;
  out.facets = original.facet_count();
  out.has_simplex_boundary = contains_simplex_boundary(original).has_value();
  const Complex core = d_core(original);
  out.collapsible = core.empty();
  if (d == 1) {
    out.forest = is_forest(original);
    if (*out.forest != out.collapsible) {
      throw InvariantError("seed " + std::to_string(seed) + ": forest oracle disagrees with collapsing");
    }
  }

  Complex work = original;
  const Epoch1Trace epoch1 = run_epoch1(work, r);
  Rng rng(derive_seed(seed, {kEpoch2Stream}));
  const Epoch2Trace epoch2 = run_epoch2(work, rng, Epoch2Options{record_first_affected});
  try {
    verify_accounting(epoch2, d);
  } catch (const InvariantError& e) {
    throw InvariantError("seed " + std::to_string(seed) + ": " + e.what());
  }
  if (epoch2.collapsible != out.collapsible || !(work == core)) {
    throw InvariantError("seed " + std::to_string(seed) + ": two-epoch process did not end at the d-core");
  }

  out.x0 = epoch1.time_zero.free;
  out.nonisolated = epoch1.time_zero.nonisolated;
  out.degree_counts = epoch1.time_zero.degree_counts;
  out.steps = epoch2.steps.size();
  const double horizon = beta_before(c, d, r) * static_cast<double>(original.ridge_count()) / 2.0;
  const auto prefix = static_cast<std::uint64_t>(std::min<double>(static_cast<double>(out.steps), std::floor(horizon)));
  for (const Epoch2Step& step : epoch2.steps) {
    out.y_sum += step.newly_free;
    if (step.index <= prefix) {
      out.prefix_y_sum += step.newly_free;
      ++out.prefix_steps;
    }
    if (step.lost_isolated > 0) ++out.lossy_steps;
    out.max_mark = std::max(out.max_mark, step.mark);
  }
  out.core_facets = epoch2.core_facets;
  out.first_affected_steps = epoch2.first_affected_steps;
  return out;
}

EmpiricalRow aggregate(std::uint32_t d, std::uint32_t n, std::span<const TrialResult> trials) {
  EmpiricalRow row;
  row.trials = trials.size();
  if (trials.empty()) return row;
  const auto ridges = static_cast<double>(binomial(n, d));
  const auto count = static_cast<double>(trials.size());
  row.degree_frac.assign(kDegreeCap + 2, 0.0);
  std::uint64_t steps = 0, y_sum = 0, prefix_y = 0, lossy = 0, forests = 0, first_affected = 0;
  bool have_forest = false, have_first = false;
  for (const TrialResult& t : trials) {
    row.collapsible_frac += t.collapsible ? 1.0 : 0.0;
    row.boundary_frac += t.has_simplex_boundary ? 1.0 : 0.0;
    row.dichotomy_frac += (t.collapsible || t.has_simplex_boundary) ? 1.0 : 0.0;
    row.mean_facets += static_cast<double>(t.facets);
    row.mean_x0_frac += static_cast<double>(t.x0) / ridges;
    row.mean_l_frac += static_cast<double>(t.nonisolated) / ridges;
    for (std::size_t k = 0; k < t.degree_counts.size() && k < row.degree_frac.size(); ++k) {
      row.degree_frac[k] += static_cast<double>(t.degree_counts[k]) / ridges;
    }
    steps += t.steps;
    y_sum += t.y_sum;
    row.prefix_steps += t.prefix_steps;
    prefix_y += t.prefix_y_sum;
    lossy += t.lossy_steps;
    row.max_mark = std::max(row.max_mark, t.max_mark);
    if (t.forest) {
      have_forest = true;
      forests += *t.forest ? 1 : 0;
    }
    if (t.first_affected_steps) {
      have_first = true;
      first_affected += *t.first_affected_steps;
    }
  }
  row.collapsible_frac /= count;
  row.boundary_frac /= count;
  row.dichotomy_frac /= count;
  row.mean_facets /= count;
  row.mean_x0_frac /= count;
  row.mean_l_frac /= count;
  for (double& f : row.degree_frac) f /= count;
  row.mean_steps = static_cast<double>(steps) / count;
  row.mean_y = steps ? static_cast<double>(y_sum) / static_cast<double>(steps) : 0.0;
  row.mean_y_prefix = row.prefix_steps ? static_cast<double>(prefix_y) / static_cast<double>(row.prefix_steps) : 0.0;
  row.lossy_step_frac = steps ? static_cast<double>(lossy) / static_cast<double>(steps) : 0.0;
  if (have_forest) row.forest_frac = static_cast<double>(forests) / count;
  if (have_first) row.first_affected_frac = steps ? static_cast<double>(first_affected) / static_cast<double>(steps) : 0.0;
  return row;
}

std::uint32_t default_phases(double c, std::uint32_t d, double delta) {
  if (c > theory::c_threshold(d).c_d) return theory::choose_r(c, d, delta);
  for (std::uint32_t r = 2; r <= 100000; ++r) {
    if (theory::expectations(c, d, r).exp_X0_frac <= delta) return r;
  }
  throw InputError("no phase count brings E[X_0] below delta");
}

ExperimentReport run_mc_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.version = COLLAPSE_LAB_VERSION;
  report.base_seed = config.base_seed;

  std::vector<std::uint32_t> phases;
  for (double c : config.c_grid) phases.push_back(config.r ? *config.r : default_phases(c, config.d, config.delta));

  const std::size_t per_point = config.trials;
  std::vector<TrialResult> results(config.c_grid.size() * per_point);
  parallel_for(results.size(), config.threads, [&](std::size_t task) {
    const std::size_t grid = task / per_point;
    const std::size_t trial = task % per_point;
    results[task] = run_trial(config.n, config.d, config.c_grid[grid], phases[grid],
                              trial_seed(config.base_seed, grid, trial), config.record_first_affected);
  });

  for (std::size_t grid = 0; grid < config.c_grid.size(); ++grid) {
    ReportRow row;
    row.key = RowKey{config.d, config.n, config.c_grid[grid], phases[grid]};
    const std::span<const TrialResult> slice(results.data() + grid * per_point, per_point);
    row.empirical = aggregate(config.d, config.n, slice);
    row.theory = theory_row(row.key);
    for (const TrialResult& t : slice) row.seeds.push_back(t.seed);
    report.rows.push_back(std::move(row));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ComparisonTable compare_report(const ExperimentReport& report, const Tolerances& tol) {
  ComparisonTable table;
  for (const ReportRow& row : report.rows) {
    if (!(row.theory.key == row.key)) throw InputError("theory row key does not match its empirical row");
    RowComparison cmp;
    cmp.key = row.key;
    const EmpiricalRow& emp = row.empirical;
    const TheoryRow& th = row.theory;
    if (th.exp_x0_frac && th.exp_l_frac && th.drift) {
      cmp.compared = true;
      cmp.x0_rel = relative_error(emp.mean_x0_frac, *th.exp_x0_frac);
      if (cmp.x0_rel > tol.x0_rel) cmp.failures.push_back("X0");
      cmp.l_rel = relative_error(emp.mean_l_frac, *th.exp_l_frac);
      if (cmp.l_rel > tol.l_rel) cmp.failures.push_back("L");
      for (std::uint32_t k = 0; k <= tol.dk_max; ++k) {
        if (k >= th.exp_time_zero_frac.size() || k >= emp.degree_frac.size()) {
          throw InputError("degree histogram shorter than dk_max");
        }
        const double rel = relative_error(emp.degree_frac[k], th.exp_time_zero_frac[k]);
        cmp.dk_rel.push_back(rel);
        if (rel > tol.dk_rel) cmp.failures.push_back("D" + std::to_string(k));
      }
      cmp.y_ok = emp.prefix_steps == 0 || emp.mean_y_prefix <= *th.drift * (1.0 + tol.y_slack);
      if (!cmp.y_ok) cmp.failures.push_back("Y");
    }
    table.pass = table.pass && cmp.pass();
    table.rows.push_back(std::move(cmp));
  }
  return table;
}

namespace {

nlohmann::json key_json(const RowKey& key) {
  return {{"d", key.d}, {"n", key.n}, {"c", key.c}, {"r", key.r}};
}

RowKey key_from(const nlohmann::json& j) {
  return RowKey{j.at("d").get<std::uint32_t>(), j.at("n").get<std::uint32_t>(), j.at("c").get<double>(),
                j.at("r").get<std::uint32_t>()};
}

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const nlohmann::json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return j.at(name).get<T>();
}

}  // namespace

nlohmann::json report_to_json(const ExperimentReport& report, bool include_timing) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : report.rows) {
    const EmpiricalRow& e = row.empirical;
    const TheoryRow& t = row.theory;
    rows.push_back({{"key", key_json(row.key)},
                    {"empirical",
                     {{"trials", e.trials},
                      {"collapsible_frac", e.collapsible_frac},
                      {"boundary_frac", e.boundary_frac},
                      {"dichotomy_frac", e.dichotomy_frac},
                      {"forest_frac", opt(e.forest_frac)},
                      {"mean_facets", e.mean_facets},
                      {"mean_X0_frac", e.mean_x0_frac},
                      {"mean_L_frac", e.mean_l_frac},
                      {"D_frac", e.degree_frac},
                      {"mean_steps", e.mean_steps},
                      {"mean_Y", e.mean_y},
                      {"mean_Y_prefix", e.mean_y_prefix},
                      {"prefix_steps", e.prefix_steps},
                      {"max_mark", e.max_mark},
                      {"lossy_step_frac", e.lossy_step_frac},
                      {"first_affected_frac", opt(e.first_affected_frac)}}},
                    {"theory",
                     {{"key", key_json(t.key)},
                      {"c_d", t.c_d},
                      {"exp_X0_frac", opt(t.exp_x0_frac)},
                      {"exp_L_frac", opt(t.exp_l_frac)},
                      {"exp_Dk_frac", t.exp_dk_frac},
                      {"exp_time_zero_frac", t.exp_time_zero_frac},
                      {"dx", opt(t.drift)}}},
                    {"seeds", row.seeds}});
  }
  nlohmann::json provenance = {{"version", report.version}, {"base_seed", report.base_seed}};
  if (include_timing) provenance["wall_seconds"] = report.wall_seconds;
  return {{"provenance", std::move(provenance)}, {"rows", std::move(rows)}};
}

ExperimentReport report_from_json(const nlohmann::json& json) {
  try {
    ExperimentReport report;
    const auto& prov = json.at("provenance");
    report.version = prov.at("version").get<std::string>();
    report.base_seed = prov.at("base_seed").get<std::uint64_t>();
    report.wall_seconds = prov.value("wall_seconds", 0.0);
    for (const auto& r : json.at("rows")) {
      ReportRow row;
      row.key = key_from(r.at("key"));
      const auto& e = r.at("empirical");
      EmpiricalRow& emp = row.empirical;
      emp.trials = e.at("trials").get<std::uint64_t>();
      emp.collapsible_frac = e.at("collapsible_frac").get<double>();
      emp.boundary_frac = e.at("boundary_frac").get<double>();
      emp.dichotomy_frac = e.at("dichotomy_frac").get<double>();
      emp.forest_frac = opt_from<double>(e, "forest_frac");
      emp.mean_facets = e.at("mean_facets").get<double>();
      emp.mean_x0_frac = e.at("mean_X0_frac").get<double>();
      emp.mean_l_frac = e.at("mean_L_frac").get<double>();
      emp.degree_frac = e.at("D_frac").get<std::vector<double>>();
      emp.mean_steps = e.at("mean_steps").get<double>();
      emp.mean_y = e.at("mean_Y").get<double>();
      emp.mean_y_prefix = e.at("mean_Y_prefix").get<double>();
      emp.prefix_steps = e.at("prefix_steps").get<std::uint64_t>();
      emp.max_mark = e.at("max_mark").get<std::uint32_t>();
      emp.lossy_step_frac = e.at("lossy_step_frac").get<double>();
      emp.first_affected_frac = opt_from<double>(e, "first_affected_frac");
      const auto& t = r.at("theory");
      TheoryRow& th = row.theory;
      th.key = key_from(t.at("key"));
      th.c_d = t.at("c_d").get<double>();
      th.exp_x0_frac = opt_from<double>(t, "exp_X0_frac");
      th.exp_l_frac = opt_from<double>(t, "exp_L_frac");
      th.exp_dk_frac = t.at("exp_Dk_frac").get<std::vector<double>>();
      th.exp_time_zero_frac = t.at("exp_time_zero_frac").get<std::vector<double>>();
      th.drift = opt_from<double>(t, "dx");
      row.seeds = r.at("seeds").get<std::vector<std::uint64_t>>();
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  constexpr std::uint32_t kColumns = 6;  // D_0 .. D_5
  out << "d,n,c,r,trials,collapsible_frac,boundary_frac,dichotomy_frac,mean_X0_frac,mean_L_frac";
  for (std::uint32_t k = 0; k < kColumns; ++k) out << ",D" << k << "_frac";
  out << ",mean_Y,mean_Y_prefix,max_mark,lossy_step_frac,exp_X0_frac,exp_L_frac";
  for (std::uint32_t k = 0; k < kColumns; ++k) out << ",exp_D" << k << "_frac";
  out << ",dx,c_d\n";
  const auto field = [&out](const std::optional<double>& v) {
    out << ',';
    if (v) out << *v;
  };
  out.precision(17);
  for (const ReportRow& row : report.rows) {
    const EmpiricalRow& e = row.empirical;
    const TheoryRow& t = row.theory;
    out << row.key.d << ',' << row.key.n << ',' << row.key.c << ',' << row.key.r << ',' << e.trials << ','
        << e.collapsible_frac << ',' << e.boundary_frac << ',' << e.dichotomy_frac << ',' << e.mean_x0_frac << ','
        << e.mean_l_frac;
    for (std::uint32_t k = 0; k < kColumns; ++k) out << ',' << (k < e.degree_frac.size() ? e.degree_frac[k] : 0.0);
    out << ',' << e.mean_y << ',' << e.mean_y_prefix << ',' << e.max_mark << ',' << e.lossy_step_frac;
    field(t.exp_x0_frac);
    field(t.exp_l_frac);
    for (std::uint32_t k = 0; k < kColumns; ++k) {
      field(k < t.exp_time_zero_frac.size() ? std::optional<double>(t.exp_time_zero_frac[k]) : std::nullopt);
    }
    field(t.drift);
    out << ',' << t.c_d << '\n';
  }
}

nlohmann::json comparison_to_json(const ComparisonTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RowComparison& r : table.rows) {
    rows.push_back({{"key", key_json(r.key)},
                    {"compared", r.compared},
                    {"X0_rel", r.x0_rel},
                    {"L_rel", r.l_rel},
                    {"D_rel", r.dk_rel},
                    {"Y_ok", r.y_ok},
                    {"failures", r.failures},
                    {"pass", r.pass()}});
  }
  return {{"pass", table.pass}, {"rows", std::move(rows)}};
}

}  // namespace collapse
