#include <gtest/gtest.h>

#include <cmath>

#include "collapse/errors.hpp"
#include "collapse/theory.hpp"
#include "oracles.hpp"

using namespace collapse;
using namespace collapse::theory;

// Reference values computed once in double precision by a separate script
// iterating the recursion and the closed forms.
namespace ref {
constexpr double gamma_c3_d2[] = {0.0, 0.049787068367863944, 0.06662243832954519, 0.0732716861760952,
                                  0.07604149484195476};
constexpr double x0_c3_d2[] = {0, 0, 0.017378347954986738, 0.007136345837271964, 0.003018035841092632,
                               0.0012920827058056005, 0.0005560543643085091};
constexpr double l_c3_d2_r5 = 0.7250106880505405;
constexpr double x_c3_d2_r5 = 0.21517119222034686;
constexpr double t_star_2 = 0.7153318629591582, c_2 = 2.4554074822841283;
constexpr double t_star_3 = 0.8510007034874917, c_3 = 3.089119359210034;
constexpr double b_3 = 0.4388488978473259, upper_3 = 0.9218908701385713;
constexpr double h_3 = 0.4320485621623149;
}  // namespace ref

TEST(GammaBeta, Values) {
  const auto s = gamma_beta_seq(3.0, 2, 3);
  ASSERT_EQ(s.gamma.size(), 5u);
  ASSERT_EQ(s.beta.size(), 4u);
  for (int t = 0; t <= 4; ++t) EXPECT_NEAR(s.gamma[t], ref::gamma_c3_d2[t], 1e-14);
  EXPECT_EQ(s.gamma[0], 0.0);
  for (int t = 0; t <= 3; ++t) EXPECT_DOUBLE_EQ(s.beta[t], 1.0 - s.gamma[t + 1]);
  for (std::uint32_t d : {1u, 2u, 5u}) EXPECT_DOUBLE_EQ(gamma_beta_seq(1.7, d, 1).gamma[1], std::exp(-1.7));
  const auto flat = gamma_beta_seq(0.0, 2, 5).gamma;
  for (std::size_t t = 1; t < flat.size(); ++t) EXPECT_EQ(flat[t], 1.0);
}

TEST(GammaBeta, MonotoneAndBounded) {
  for (double c : {0.5, 2.0, 3.0, 6.0}) {
    const auto g = gamma_beta_seq(c, 3, 50).gamma;
    for (std::size_t t = 1; t < g.size(); ++t) {
      EXPECT_GE(g[t], g[t - 1]);
      EXPECT_LE(g[t], 1.0);
    }
  }
}

TEST(Formulas, FAndG) {
  for (std::uint32_t d : {1u, 2u, 3u}) EXPECT_EQ(f_eval(2.5, d, 0.0), 0.0);
  EXPECT_NEAR(g_eval(2, 0.5), 4 * std::log(2.0), 1e-14);
  EXPECT_LT(std::abs(f_eval(2.4554, 2, 0.7153)), 1e-3);
  for (double t = 0.05; t < 1.0; t += 0.05) EXPECT_NEAR(f_eval(g_eval(3, t), 3, t), 0.0, 1e-12);
  EXPECT_THROW(g_eval(2, 0.0), InputError);
  EXPECT_THROW(g_eval(2, 1.0), InputError);
}

TEST(Roots, Supercritical) {
  const auto r = roots_bB(3.0, 2);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->lower, ref::b_3, 1e-12);
  EXPECT_NEAR(r->upper, ref::upper_3, 1e-12);
  EXPECT_LT(std::abs(f_eval(3.0, 2, r->lower)), 1e-12);
  EXPECT_LT(std::abs(f_eval(3.0, 2, r->upper)), 1e-12);
}

TEST(Roots, SubcriticalAndErrors) {
  EXPECT_FALSE(roots_bB(2.0, 2).has_value());
  // Independent check: f_2 stays negative on a fine grid.
  for (int i = 1; i < 10000; ++i) EXPECT_LT(f_eval(2.0, 2, i / 10000.0), 0.0);
  EXPECT_THROW(roots_bB(0.0, 2), InputError);
  EXPECT_THROW(roots_bB(3.0, 1), InputError);
}

TEST(Roots, UpperRootIsRecursionLimit) {
  for (auto [d, c] : {std::pair{2u, 3.0}, {2u, 4.0}, {3u, 4.0}, {3u, 3.5}, {4u, 5.0}}) {
    const auto beta = gamma_beta_seq(c, d, 200).beta;
    EXPECT_LT(std::abs(beta[200] - roots_bB(c, d)->upper), 1e-6) << d << " " << c;
  }
}

TEST(Roots, Monotone) {
  for (std::uint32_t d : {2u, 3u}) {
    const double cd = c_threshold(d).c_d;
    RootPair prev = *roots_bB(cd + 0.01, d);
    for (double c = cd + 0.02; c <= cd + 2.0; c += 0.01) {
      const auto cur = *roots_bB(c, d);
      EXPECT_GT(cur.upper, prev.upper);
      EXPECT_LT(cur.lower, prev.lower);
      prev = cur;
    }
  }
}

TEST(Threshold, Values) {
  const auto one = c_threshold(1);
  EXPECT_NEAR(one.c_d, 1.0, 1e-9);
  const auto two = c_threshold(2);
  EXPECT_NEAR(two.c_d, ref::c_2, 1e-9);
  EXPECT_NEAR(two.t_star, ref::t_star_2, 1e-9);
  const auto three = c_threshold(3);
  EXPECT_NEAR(three.c_d, ref::c_3, 1e-9);
  EXPECT_NEAR(three.t_star, ref::t_star_3, 1e-9);
  EXPECT_NEAR(two.t_star, oracle::threshold_t_star_by_scan(2, 1000000), 1e-5);
}

TEST(Threshold, DefiningIdentities) {
  for (std::uint32_t d = 2; d <= 5; ++d) {
    const auto th = c_threshold(d);
    EXPECT_LT(std::abs(f_eval(th.c_d, d, th.t_star)), 1e-9);
    const double branch = d * std::pow(th.t_star, d - 1) * th.c_d * (1 - th.t_star) - 1;
    EXPECT_LT(std::abs(branch), 1e-9);
    EXPECT_NEAR(h_of_root(th.t_star, d), 1.0, 1e-9);
    EXPECT_TRUE(th.roots(th.c_d + 0.1).has_value());
  }
}

TEST(Drift, HBelowOne) {
  EXPECT_NEAR(h_eval(3.0, 2), ref::h_3, 1e-10);
  EXPECT_THROW(h_eval(2.0, 2), InputError);
  for (std::uint32_t d : {2u, 3u}) {
    const double cd = c_threshold(d).c_d;
    EXPECT_LT(h_eval(cd + 1e-6, d), 1.0);
    for (int k = 1; k <= 20; ++k) EXPECT_LT(h_eval(cd + 0.05 * k, d), 1.0);
  }
}

TEST(Drift, HdotNegativeAndMatchesDerivative) {
  EXPECT_NEAR(hdot_eval(0.5), std::log(0.5) / 0.25 + 2, 1e-14);
  for (int i = 1; i <= 99; ++i) {
    const double b = i / 100.0;
    EXPECT_LT(hdot_eval(b), 0.0);
    for (std::uint32_t d : {2u, 3u}) {
      const double step = 1e-6;
      const double fd = (h_of_root(b + step, d) - h_of_root(b - step, d)) / (2 * step);
      EXPECT_NEAR(fd, d * hdot_eval(b), 1e-4) << b;
    }
  }
}

TEST(Expectations, Values) {
  for (std::uint32_t r = 2; r <= 6; ++r) EXPECT_NEAR(expectations(3.0, 2, r).exp_X0_frac, ref::x0_c3_d2[r], 1e-15);
  const auto p = expectations(3.0, 2, 5);
  EXPECT_NEAR(p.exp_L_frac, ref::l_c3_d2_r5, 1e-14);
  EXPECT_NEAR(p.x, ref::x_c3_d2_r5, 1e-14);
  EXPECT_DOUBLE_EQ(p.exp_Y_bound, 2 * p.x);
  EXPECT_THROW(expectations(3.0, 2, 1), InputError);
}

TEST(Expectations, InternalConsistency) {
  for (std::uint32_t d : {2u, 3u}) {
    for (double c : {1.0, 3.0, 5.0}) {
      const auto p = expectations(c, d, 4);
      const double lambda = std::pow(p.beta[3], d) * c;
      EXPECT_NEAR(p.lambda, lambda, 1e-14);
      EXPECT_NEAR(p.exp_X0_frac, lambda * (p.gamma[5] - p.gamma[4]), 1e-14);
      EXPECT_NEAR(p.exp_L_frac, 1 - (p.gamma[5] + c * p.gamma[4] * std::pow(p.beta[3], d)), 1e-14);
      EXPECT_NEAR(p.x, std::pow(p.beta[3], d - 1) * c * p.gamma[5], 1e-14);
      // gamma_{r+1} = exp(-lambda), so the degree law is exactly Poisson(lambda).
      EXPECT_NEAR(p.gamma[5], std::exp(-lambda), 1e-15);
      double total = 0.0;
      for (std::uint32_t k = 0; k < p.exp_Dk_frac.size(); ++k) {
        EXPECT_NEAR(p.exp_Dk_frac[k], oracle::poisson_pmf(lambda, k), 1e-13);
        total += p.exp_Dk_frac[k];
      }
      // Mass beyond the histogram cap comes from the oracle pmf.
      for (std::uint32_t k = static_cast<std::uint32_t>(p.exp_Dk_frac.size()); k < 80; ++k) {
        total += oracle::poisson_pmf(lambda, k);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_DOUBLE_EQ(p.time_zero_degree_frac(0), 1 - p.exp_L_frac);
      EXPECT_DOUBLE_EQ(p.time_zero_degree_frac(1), p.exp_X0_frac);
      EXPECT_DOUBLE_EQ(p.time_zero_degree_frac(3), p.exp_Dk_frac[3]);
    }
  }
  const auto zero = expectations(0.0, 2, 3);
  EXPECT_EQ(zero.exp_X0_frac, 0.0);
  EXPECT_EQ(zero.exp_L_frac, 0.0);
}

TEST(ChooseR, Examples) {
  EXPECT_EQ(choose_r(3.0, 2, 0.01), 3u);
  ASSERT_LT(expectations(3.0, 2, 2).exp_Y_bound, 1.0);
  EXPECT_EQ(choose_r(3.0, 2, 1.0), 2u);
  EXPECT_THROW(choose_r(c_threshold(2).c_d - 1e-3, 2, 0.01), InputError);
  const auto r = choose_r(2.6, 2, 1e-3);
  EXPECT_LE(expectations(2.6, 2, r).exp_X0_frac, 1e-3);
  EXPECT_LT(expectations(2.6, 2, r).exp_Y_bound, 1.0);
  EXPECT_GT(expectations(2.6, 2, r - 1).exp_X0_frac, 1e-3);
}

TEST(DriftEstimate, Line) {
  const auto e = drift_estimate(3.0, 2, 5, 200);
  const double total = 19900.0;
  EXPECT_NEAR(e.delta, ref::x0_c3_d2[5], 1e-15);
  EXPECT_NEAR(e.expected_z(0), e.delta * total, 1e-9);
  EXPECT_NEAR(e.epsilon, 1 - 2 * ref::x_c3_d2_r5, 1e-12);
  EXPECT_LT(e.slope, 0.0);
  EXPECT_EQ(e.stop_index, static_cast<std::uint64_t>(std::ceil(2 * e.delta / e.epsilon * total)));
  EXPECT_LE(e.expected_z(static_cast<double>(e.stop_index)), -e.delta * total + 1e-6);
  EXPECT_GT(e.tail_bound, 0.0);
  EXPECT_LE(e.tail_bound, 1.0);
}

TEST(McDiarmid, Examples) {
  const double i = 400, d = 2;
  EXPECT_NEAR(mcdiarmid_tail_uniform(d * std::sqrt(i), d, 400), 2 * std::exp(-2.0), 1e-12);
  EXPECT_NEAR(2 * std::exp(-2.0), 0.2707, 1e-4);
  std::vector<double> bounds(50, 3.0);
  EXPECT_NEAR(mcdiarmid_tail(40.0, bounds), 2 * std::exp(-2 * 1600.0 / (50 * 9.0)), 1e-12);
  EXPECT_EQ(mcdiarmid_tail_uniform(1e-9, 2, 10), 1.0);
  EXPECT_EQ(mcdiarmid_tail_uniform(0.0, 2, 10), 1.0);
  EXPECT_THROW(mcdiarmid_tail(1.0, std::vector<double>{}), InputError);
  EXPECT_THROW(mcdiarmid_tail(1.0, std::vector<double>{1.0, 0.0}), InputError);
}
