#include "collapse/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "collapse/combinatorics.hpp"
#include "collapse/engine.hpp"
#include "collapse/errors.hpp"

namespace collapse::theory {
namespace {

constexpr std::uint32_t kMaxPhases = 100000;

template <typename F>
double bisect(F&& fn, double lo, double hi, double tol) {
  // fn(lo) and fn(hi) have opposite signs.
  const bool lo_negative = fn(lo) < 0.0;
  for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((fn(mid) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_dimension(std::uint32_t d) {
  if (d < 1) throw InputError("dimension must be at least 1");
}

}  // namespace

GammaBeta gamma_beta_seq(double c, std::uint32_t d, std::uint32_t r) {
  if (!(c >= 0.0)) throw InputError("c must be nonnegative");
  require_dimension(d);
  GammaBeta seq;
  seq.gamma.reserve(r + 2);
  seq.gamma.push_back(0.0);
  for (std::uint32_t t = 0; t <= r; ++t) {
    seq.gamma.push_back(std::exp(-c * std::pow(1.0 - seq.gamma.back(), d)));
  }
  seq.beta.reserve(r + 1);
  for (std::uint32_t t = 0; t <= r; ++t) seq.beta.push_back(1.0 - seq.gamma[t + 1]);
  return seq;
}

double f_eval(double c, std::uint32_t d, double t) {
  return -std::expm1(-c * std::pow(t, d)) - t;
}

double g_eval(std::uint32_t d, double t) {
  if (!(t > 0.0 && t < 1.0)) throw InputError("g(t) is defined for t in (0, 1)");
  return -std::log1p(-t) / std::pow(t, d);
}

ThresholdData c_threshold(std::uint32_t d, double tol) {
  require_dimension(d);
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  ThresholdData data;
  data.d = d;
  if (d == 1) {
    // g(t) = -ln(1-t)/t decreases to its infimum 1 as t -> 0.
    data.c_d = 1.0;
    data.t_star = 0.0;
    return data;
  }
  const auto reduced = [d](double t) { return -static_cast<double>(d) * (1.0 - t) * std::log1p(-t) / t - 1.0; };
  // reduced -> d - 1 > 0 as t -> 0 and -> -1 as t -> 1.
  data.t_star = bisect(reduced, 1e-12, 1.0 - 1e-16, 1e-16);
  data.c_d = g_eval(d, data.t_star);
  data.f_residual = f_eval(data.c_d, d, data.t_star);
  data.branch_residual =
      d * std::pow(data.t_star, d - 1) * data.c_d * (1.0 - data.t_star) - 1.0;
  if (std::abs(data.f_residual) > tol || std::abs(data.branch_residual) > tol) {
    throw InvariantError("threshold solve missed tolerance for d=" + std::to_string(d));
  }
  return data;
}

std::optional<RootPair> roots_bB(double c, std::uint32_t d) {
  if (!(c > 0.0)) throw InputError("roots_bB requires c > 0");
  if (d < 2) throw InputError("roots_bB requires d >= 2");
  // f_c > 0 exactly where g < c, and g has a single minimum at t_star.
  const ThresholdData threshold = c_threshold(d);
  const auto f = [c, d](double t) { return f_eval(c, d, t); };
  if (!(f(threshold.t_star) > 0.0)) return std::nullopt;
  double lo = 1e-9;
  while (f(lo) >= 0.0 && lo > 1e-300) lo *= 1e-3;
  RootPair roots;
  roots.lower = bisect(f, lo, threshold.t_star, 1e-17);
  roots.upper = bisect(f, threshold.t_star, 1.0, 1e-17);
  return roots;
}

double h_of_root(double upper_root, std::uint32_t d) {
  if (!(upper_root > 0.0 && upper_root < 1.0)) throw InputError("root must lie in (0, 1)");
  return -static_cast<double>(d) * (1.0 - upper_root) * std::log1p(-upper_root) / upper_root;
}

double h_eval(double c, std::uint32_t d) {
  const auto roots = roots_bB(c, d);
  if (!roots) throw InputError("c=" + std::to_string(c) + " is subcritical; B(c) does not exist");
  const double b = roots->upper;
  return d * std::pow(b, d - 1) * c * (1.0 - b);
}

double hdot_eval(double upper_root) {
  if (!(upper_root > 0.0 && upper_root < 1.0)) throw InputError("hdot_eval requires B in (0, 1)");
  return std::log1p(-upper_root) / (upper_root * upper_root) + 1.0 / upper_root;
}

double TheoryProfile::time_zero_degree_frac(std::uint32_t k) const {
  if (k == 0) return 1.0 - exp_L_frac;
  if (k == 1) return exp_X0_frac;
  return k < exp_Dk_frac.size() ? exp_Dk_frac[k] : 0.0;
}

TheoryProfile expectations(double c, std::uint32_t d, std::uint32_t r) {
  if (r < 2) throw InputError("expectations need r >= 2");
  const GammaBeta seq = gamma_beta_seq(c, d, r);
  TheoryProfile p;
  p.c = c;
  p.d = d;
  p.r = r;
  p.gamma = seq.gamma;
  p.beta = seq.beta;
  const double beta_prev = seq.beta[r - 1];
  const double g_r = seq.gamma[r];
  const double g_next = seq.gamma[r + 1];
  p.lambda = std::pow(beta_prev, d) * c;
  p.x = std::pow(beta_prev, d - 1) * c * g_next;
  p.exp_L_frac = 1.0 - (g_next + c * g_r * std::pow(beta_prev, d));
  p.exp_X0_frac = p.lambda * (g_next - g_r);
  p.exp_Dk_frac.resize(kDegreeCap + 1);
  double term = g_next;  // lambda^k / k! * gamma_{r+1}
  for (std::uint32_t k = 0; k <= kDegreeCap; ++k) {
    if (k > 0) term *= p.lambda / k;
    p.exp_Dk_frac[k] = term;
  }
  p.exp_B_frac = seq.beta;
  p.exp_Y_bound = d * p.x;
  return p;
}

std::uint32_t choose_r(double c, std::uint32_t d, double delta) {
  require_dimension(d);
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (!(c > c_threshold(d).c_d)) {
    throw InputError("drift condition unattainable: c=" + std::to_string(c) + " is not above c_d");
  }
  // Incremental gamma: gamma[t] for t <= r + 1.
  std::vector<double> gamma{0.0};
  for (std::uint32_t r = 2; r <= kMaxPhases; ++r) {
    while (gamma.size() < r + 2) gamma.push_back(std::exp(-c * std::pow(1.0 - gamma.back(), d)));
    const double beta_prev = 1.0 - gamma[r];
    const double x0 = std::pow(beta_prev, d) * c * (gamma[r + 1] - gamma[r]);
    const double drift = d * std::pow(beta_prev, d - 1) * c * gamma[r + 1];
    if (x0 <= delta && drift < 1.0) return r;
  }
  throw InputError("drift condition not reached within " + std::to_string(kMaxPhases) + " phases");
}

DriftEstimate drift_estimate(double c, std::uint32_t d, std::uint32_t r, std::uint32_t n) {
  const TheoryProfile profile = expectations(c, d, r);
  if (!(profile.exp_Y_bound < 1.0)) throw InputError("drift condition d*x < 1 fails");
  const auto ridges = static_cast<double>(binomial(n, d));
  DriftEstimate est;
  est.delta = profile.exp_X0_frac;
  est.epsilon = 1.0 - profile.exp_Y_bound;
  est.expected_x0 = est.delta * ridges;
  est.slope = -est.epsilon;
  est.stop_index = static_cast<std::uint64_t>(std::ceil(2.0 * est.delta / est.epsilon * ridges));
  est.tail_bound = est.stop_index == 0
                       ? 1.0
                       : mcdiarmid_tail_uniform(est.delta * ridges, static_cast<double>(d), est.stop_index);
  return est;
}

double mcdiarmid_tail(double deviation, std::span<const double> bounds) {
  if (bounds.empty()) throw InputError("McDiarmid bound needs at least one coordinate");
  if (!(deviation >= 0.0)) throw InputError("deviation must be nonnegative");
  double sum_sq = 0.0;
  for (double eps : bounds) {
    if (!(eps > 0.0)) throw InputError("coordinate bounds must be positive");
    sum_sq += eps * eps;
  }
  return std::min(1.0, 2.0 * std::exp(-2.0 * deviation * deviation / sum_sq));
}

double mcdiarmid_tail_uniform(double deviation, double bound, std::uint64_t count) {
  if (count == 0) throw InputError("McDiarmid bound needs at least one coordinate");
  if (!(bound > 0.0)) throw InputError("coordinate bounds must be positive");
  if (!(deviation >= 0.0)) throw InputError("deviation must be nonnegative");
  const double sum_sq = static_cast<double>(count) * bound * bound;
  return std::min(1.0, 2.0 * std::exp(-2.0 * deviation * deviation / sum_sq));
}

}  // namespace collapse::theory
