// collapse_lab: sample random d-complexes, run the two-epoch collapsing
// process, evaluate threshold theory and run Monte Carlo sweeps.
//
// Exit codes: 0 success, 1 comparison failure, 2 bad input or I/O, 3 internal
// invariant violation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "collapse/complex.hpp"
#include "collapse/complex_io.hpp"
#include "collapse/dtree.hpp"
#include "collapse/engine.hpp"
#include "collapse/errors.hpp"
#include "collapse/experiments.hpp"
#include "collapse/sampler.hpp"
#include "collapse/theory.hpp"
#include "collapse/trace_io.hpp"

namespace {

using collapse::InputError;
using collapse::IoError;
namespace theory = collapse::theory;

constexpr int kExitPass = 0;
constexpr int kExitCompareFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

// Writes to `path`, or stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write(out);
  if (!out) throw IoError("write failed for " + path);
}

void emit_json(const std::string& path, const nlohmann::json& j) {
  emit(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

nlohmann::json profile_json(const theory::TheoryProfile& p) {
  return {{"c", p.c},
          {"d", p.d},
          {"r", p.r},
          {"gamma", p.gamma},
          {"beta", p.beta},
          {"lambda", p.lambda},
          {"x", p.x},
          {"exp_L_frac", p.exp_L_frac},
          {"exp_X0_frac", p.exp_X0_frac},
          {"exp_Dk_frac", p.exp_Dk_frac},
          {"exp_B_frac", p.exp_B_frac},
          {"exp_Y_bound", p.exp_Y_bound}};
}

nlohmann::json threshold_json(const theory::ThresholdData& t) {
  return {{"d", t.d},
          {"c_d", t.c_d},
          {"t_star", t.t_star},
          {"f_residual", t.f_residual},
          {"branch_residual", t.branch_residual}};
}

struct GenArgs {
  std::uint32_t n = 0, d = 2;
  std::optional<double> p, c;
  std::uint64_t seed = 0;
  std::string output;
};

int run_gen(const GenArgs& a) {
  if (a.p.has_value() == a.c.has_value()) throw InputError("gen needs exactly one of --p or --c");
  auto params = a.c ? collapse::ModelParams::from_density(a.n, a.d, *a.c, a.seed)
                    : collapse::ModelParams{a.n, a.d, *a.p, a.seed};
  const auto complex = collapse::sample_complex(params);
  emit(a.output, [&](std::ostream& out) { collapse::write_complex(complex, out); });
  return kExitPass;
}

struct CollapseArgs {
  std::string input, output, format = "json";
  std::uint32_t r = 0;
  std::uint64_t seed = 0;
  bool record_q = false;
};

int run_collapse(const CollapseArgs& a) {
  collapse::Complex complex = collapse::read_complex(std::filesystem::path(a.input));
  const std::uint32_t n = complex.n(), d = complex.d();
  const auto epoch1 = collapse::run_epoch1(complex, a.r);
  collapse::Rng rng(a.seed);
  const auto epoch2 = collapse::run_epoch2(complex, rng, collapse::Epoch2Options{a.record_q});
  collapse::verify_accounting(epoch2, d);
  if (a.format == "csv") {
    emit(a.output, [&](std::ostream& out) { collapse::write_trace_csv(epoch2, out); });
  } else {
    emit_json(a.output, collapse::trace_to_json({n, d, a.r, a.seed}, epoch1, epoch2));
  }
  return kExitPass;
}

struct TheoryArgs {
  std::uint32_t d = 2;
  std::optional<double> c;
  std::optional<std::uint32_t> r, n;
  double delta = 0.01;
  bool threshold = false, grid = false;
  double c_min = 0.5, c_max = 5.0, c_step = 0.1;
  std::string output;
};

int run_theory(const TheoryArgs& a) {
  if (a.threshold) {
    emit_json(a.output, threshold_json(theory::c_threshold(a.d)));
    return kExitPass;
  }
  if (a.grid) {
    if (!(a.c_step > 0.0) || a.c_max < a.c_min) throw InputError("invalid grid range");
    emit(a.output, [&](std::ostream& out) {
      out.precision(12);
      out << "c,d,b,B,h\n";
      const auto steps = static_cast<long>(std::floor((a.c_max - a.c_min) / a.c_step + 1e-9));
      for (long i = 0; i <= steps; ++i) {
        const double c = a.c_min + i * a.c_step;
        out << c << ',' << a.d;
        const auto roots = theory::roots_bB(c, a.d);
        if (roots) {
          out << ',' << roots->lower << ',' << roots->upper << ',' << theory::h_of_root(roots->upper, a.d) << '\n';
        } else {
          out << ",,,\n";
        }
      }
    });
    return kExitPass;
  }
  if (!a.c) throw InputError("theory needs --c (or --threshold / --grid)");
  const std::uint32_t r = a.r ? *a.r : theory::choose_r(*a.c, a.d, a.delta);
  nlohmann::json j = profile_json(theory::expectations(*a.c, a.d, r));
  j["c_d"] = theory::c_threshold(a.d).c_d;
  if (a.n) {
    const auto drift = theory::drift_estimate(*a.c, a.d, r, *a.n);
    j["drift"] = {{"n", *a.n},
                  {"expected_X0", drift.expected_x0},
                  {"slope", drift.slope},
                  {"delta", drift.delta},
                  {"epsilon", drift.epsilon},
                  {"stop_index", drift.stop_index},
                  {"tail_bound", drift.tail_bound}};
  }
  emit_json(a.output, j);
  return kExitPass;
}

struct DtreeArgs {
  double c = 3.0;
  std::uint32_t d = 2, t = 6;
  std::optional<std::uint32_t> root_degree_r;
  std::uint64_t trials = 10000, seed = 0;
  std::string method = "lazy", output;
};

int run_dtree(const DtreeArgs& a) {
  const auto sampling = a.method == "full" ? collapse::TreeSampling::kFullTree : collapse::TreeSampling::kLazy;
  nlohmann::json rows = nlohmann::json::array();
  if (a.root_degree_r) {
    const std::uint32_t r = *a.root_degree_r;
    const auto dist = collapse::root_degree_after_epoch1(a.c, a.d, r, a.trials, a.seed, sampling);
    const auto seq = theory::gamma_beta_seq(a.c, a.d, r);
    const double lambda = std::pow(seq.beta[r - 1], a.d) * a.c;
    double pmf = std::exp(-lambda);
    for (std::size_t k = 0; k < std::max<std::size_t>(dist.size(), 10); ++k) {
      if (k > 0) pmf *= lambda / static_cast<double>(k);
      const double est = k < dist.size() ? dist[k] : 0.0;
      rows.push_back({{"c", a.c},
                      {"d", a.d},
                      {"r", r},
                      {"k", k},
                      {"trials", a.trials},
                      {"estimate", est},
                      {"stderr", std::sqrt(est * (1.0 - est) / static_cast<double>(a.trials))},
                      {"theory_value", pmf}});
    }
  } else {
    const auto seq = theory::gamma_beta_seq(a.c, a.d, a.t);
    for (std::uint32_t t = 1; t <= a.t; ++t) {
      const auto est = collapse::estimate_gamma(a.c, a.d, t, a.trials, a.seed, sampling);
      rows.push_back({{"c", a.c},
                      {"d", a.d},
                      {"t", t},
                      {"trials", a.trials},
                      {"estimate", est.value},
                      {"stderr", est.std_error},
                      {"theory_value", seq.gamma[t]}});
    }
  }
  emit_json(a.output, rows);
  return kExitPass;
}

struct SweepArgs {
  collapse::ExperimentConfig config;
  std::optional<std::uint32_t> r;
  std::string json_path, csv_path;
  bool timing = false;
};

int run_sweep(SweepArgs a) {
  a.config.r = a.r;
  const auto report = collapse::run_mc_sweep(a.config);
  if (!a.csv_path.empty()) {
    emit(a.csv_path, [&](std::ostream& out) { collapse::write_report_csv(report, out); });
  }
  if (!a.json_path.empty() || a.csv_path.empty()) emit_json(a.json_path, collapse::report_to_json(report, a.timing));
  return kExitPass;
}

struct CompareArgs {
  std::string report, output;
  collapse::Tolerances tolerances;
};

int run_compare(const CompareArgs& a) {
  std::ifstream in(a.report);
  if (!in) throw InputError("cannot open " + a.report);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
  auto report = collapse::report_from_json(j);
  // Theory columns come from the current theory module, not from the file.
  for (auto& row : report.rows) {
    if (!(row.theory.key == row.key)) throw InputError("theory row key does not match its empirical row");
    row.theory = collapse::theory_row(row.key);
  }
  const auto table = collapse::compare_report(report, a.tolerances);
  emit_json(a.output, collapse::comparison_to_json(table));
  return table.pass ? kExitPass : kExitCompareFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random simplicial complex collapsing laboratory"};
  app.set_config("--config", "", "Read option values from a key = value config file");
  app.require_subcommand(1);
  int exit_code = kExitPass;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample X_d(n, p) and write the complex file");
  gen_cmd->add_option("--n", gen.n, "Vertex count")->required();
  gen_cmd->add_option("--d", gen.d, "Dimension");
  auto* p_opt = gen_cmd->add_option("--p", gen.p, "Facet inclusion probability");
  gen_cmd->add_option("--c", gen.c, "Density; p = c / n")->excludes(p_opt);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("-o,--output", gen.output, "Output path (default stdout)");
  gen_cmd->callback([&] { exit_code = run_gen(gen); });

  CollapseArgs col;
  auto* col_cmd = app.add_subcommand("collapse", "Run both epochs on a complex file and emit the trace");
  col_cmd->add_option("-i,--input", col.input, "Complex file")->required();
  col_cmd->add_option("--r", col.r, "Epoch-1 phase count");
  col_cmd->add_option("--seed", col.seed, "Seed for the marking permutations");
  col_cmd->add_option("--format", col.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  col_cmd->add_flag("--record-q", col.record_q, "Count steps whose affected faces are all affected for the first time");
  col_cmd->add_option("-o,--output", col.output, "Output path (default stdout)");
  col_cmd->callback([&] { exit_code = run_collapse(col); });

  TheoryArgs th;
  auto* th_cmd = app.add_subcommand("theory", "Print a theory profile, the threshold, or a root grid");
  th_cmd->add_option("--d", th.d, "Dimension");
  th_cmd->add_option("--c", th.c, "Density parameter");
  th_cmd->add_option("--r", th.r, "Epoch-1 phases (default: smallest admissible for --delta)");
  th_cmd->add_option("--n", th.n, "Vertex count; adds the drift estimate");
  th_cmd->add_option("--delta", th.delta, "Target E[X_0] fraction when choosing r");
  th_cmd->add_flag("--threshold", th.threshold, "Print c_d and t_star");
  th_cmd->add_flag("--grid", th.grid, "CSV rows c,d,b,B,h over a c range");
  th_cmd->add_option("--c-min", th.c_min);
  th_cmd->add_option("--c-max", th.c_max);
  th_cmd->add_option("--c-step", th.c_step);
  th_cmd->add_option("-o,--output", th.output, "Output path (default stdout)");
  th_cmd->callback([&] { exit_code = run_theory(th); });

  DtreeArgs dt;
  auto* dt_cmd = app.add_subcommand("dtree", "Monte Carlo estimates on the Poisson d-tree");
  dt_cmd->add_option("--c", dt.c, "Poisson parameter");
  dt_cmd->add_option("--d", dt.d, "Dimension");
  dt_cmd->add_option("--t", dt.t, "Largest t for gamma_t estimates");
  dt_cmd->add_option("--root-degree", dt.root_degree_r, "Estimate the root degree law after this many phases");
  dt_cmd->add_option("--trials", dt.trials, "Trees per estimate");
  dt_cmd->add_option("--seed", dt.seed, "Base seed");
  dt_cmd->add_option("--method", dt.method, "lazy or full")->check(CLI::IsMember({"lazy", "full"}));
  dt_cmd->add_option("-o,--output", dt.output, "Output path (default stdout)");
  dt_cmd->callback([&] { exit_code = run_dtree(dt); });

  SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over a c grid");
  sw_cmd->add_option("--d", sw.config.d, "Dimension");
  sw_cmd->add_option("--n", sw.config.n, "Vertex count")->required();
  sw_cmd->add_option("--r", sw.r, "Epoch-1 phases (default: chosen per c from --delta)");
  sw_cmd->add_option("--c", sw.config.c_grid, "Density grid")->required();
  sw_cmd->add_option("--trials", sw.config.trials, "Trials per grid point");
  sw_cmd->add_option("--seed", sw.config.base_seed, "Base seed");
  sw_cmd->add_option("--delta", sw.config.delta, "Target E[X_0] fraction when choosing r");
  sw_cmd->add_option("--threads", sw.config.threads, "Worker threads (0 = all cores)");
  sw_cmd->add_flag("--record-q", sw.config.record_first_affected, "Record first-time-affected diagnostics");
  sw_cmd->add_option("--json", sw.json_path, "Full report path");
  sw_cmd->add_option("--csv", sw.csv_path, "Flat report path");
  sw_cmd->add_flag("--timing", sw.timing, "Include wall time in the JSON provenance");
  sw_cmd->callback([&] { exit_code = run_sweep(sw); });

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare a sweep report against theory");
  cmp_cmd->add_option("--report", cmp.report, "Report JSON from sweep")->required();
  cmp_cmd->add_option("--x0-rel", cmp.tolerances.x0_rel);
  cmp_cmd->add_option("--l-rel", cmp.tolerances.l_rel);
  cmp_cmd->add_option("--dk-rel", cmp.tolerances.dk_rel);
  cmp_cmd->add_option("--dk-max", cmp.tolerances.dk_max);
  cmp_cmd->add_option("--y-slack", cmp.tolerances.y_slack);
  cmp_cmd->add_option("-o,--output", cmp.output, "Output path (default stdout)");
  cmp_cmd->callback([&] { exit_code = run_compare(cmp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  } catch (const collapse::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInternal;
  } catch (const collapse::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return exit_code;
}
