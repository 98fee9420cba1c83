#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace collapse::theory {

/// Isolation probabilities of the root of the Poisson(c) d-tree under
/// root-forbidden phased collapsing.
struct GammaBeta {
  std::vector<double> gamma;  // gamma_0 .. gamma_{r+1}
  std::vector<double> beta;   // beta_0 .. beta_r, beta_t = 1 - gamma_{t+1}
};

/// gamma_0 = 0 and gamma_{t+1} = exp(-c (1 - gamma_t)^d).
GammaBeta gamma_beta_seq(double c, std::uint32_t d, std::uint32_t r);

/// f_c(t) = 1 - exp(-c t^d) - t.
double f_eval(double c, std::uint32_t d, double t);
/// g(t) = -ln(1 - t) / t^d on (0, 1); f_{g(t)}(t) = 0.
double g_eval(std::uint32_t d, double t);

struct RootPair {
  double lower;  // b(c)
  double upper;  // B(c), the limit of beta_t
};

/// The two roots of f_c in (0, 1), or nullopt when c is subcritical (c <= c_d).
/// InputError if c <= 0 or d < 2.
std::optional<RootPair> roots_bB(double c, std::uint32_t d);

/// The collapsibility threshold c_d and the double root t_star of f_{c_d}.
struct ThresholdData {
  std::uint32_t d = 0;
  double c_d = 0.0;
  double t_star = 0.0;
  double f_residual = 0.0;      // f_{c_d}(t_star)
  double branch_residual = 0.0; // d t^{d-1} c_d (1 - t) - 1 at t_star

  std::optional<RootPair> roots(double c) const { return roots_bB(c, d); }
};

/// Solves -d (1 - t) ln(1 - t) / t = 1 by bisection and sets c_d = g(t_star).
/// d = 1 returns the limit c_1 = 1, t_star = 0.
ThresholdData c_threshold(std::uint32_t d, double tol = 1e-12);

/// h(c) = d B^{d-1} c (1 - B) with B = B(c). InputError for subcritical c.
double h_eval(double c, std::uint32_t d);
/// h written in terms of the root alone: -d (1 - B) ln(1 - B) / B.
double h_of_root(double upper_root, std::uint32_t d);
/// ln(1 - B) / B^2 + 1/B, which is dh/dB divided by d. Negative on (0, 1).
double hdot_eval(double upper_root);

struct TheoryProfile {
  double c = 0.0;
  std::uint32_t d = 0;
  std::uint32_t r = 0;
  std::vector<double> gamma;
  std::vector<double> beta;
  double lambda = 0.0;  // (beta_{r-1})^d c, Poisson parameter of the root degree
  double x = 0.0;       // (beta_{r-1})^{d-1} c gamma_{r+1}
  double exp_L_frac = 0.0;
  double exp_X0_frac = 0.0;
  std::vector<double> exp_Dk_frac;  // k = 0 .. kDegreeCap, root-forbidden degree law
  std::vector<double> exp_B_frac;   // B_j / C(n,d) for j = 0..r
  double exp_Y_bound = 0.0;          // d x

  /// Expected fraction of ridges with degree k at time zero of the ordinary
  /// process: k = 0 is 1 - E[L], k = 1 is E[X_0], k >= 2 follows exp_Dk_frac.
  double time_zero_degree_frac(std::uint32_t k) const;
};

/// All expectation fractions of C(n, d) after r phases. InputError if r < 2.
TheoryProfile expectations(double c, std::uint32_t d, std::uint32_t r);

/// Smallest r >= 2 with exp_X0_frac <= delta and d x < 1.
/// InputError("drift condition unattainable") when c <= c_d.
std::uint32_t choose_r(double c, std::uint32_t d, double delta);

struct DriftEstimate {
  double expected_x0 = 0.0;  // E[Z_0] = E[X_0]
  double slope = 0.0;        // -(1 - d x)
  double delta = 0.0;        // E[X_0] / C(n, d)
  double epsilon = 0.0;      // 1 - d x
  std::uint64_t stop_index = 0;  // ceil(2 delta / epsilon * C(n, d))
  double tail_bound = 0.0;       // McDiarmid bound at l = delta C(n, d), i = stop_index

  double expected_z(double i) const { return expected_x0 + slope * i; }
};

/// InputError if d x >= 1.
DriftEstimate drift_estimate(double c, std::uint32_t d, std::uint32_t r, std::uint32_t n);

/// 2 exp(-2 l^2 / sum eps_k^2), reported as at most 1.
double mcdiarmid_tail(double deviation, std::span<const double> bounds);
/// Same bound with `count` equal coordinates of width `bound`.
double mcdiarmid_tail_uniform(double deviation, double bound, std::uint64_t count);

}  // namespace collapse::theory
