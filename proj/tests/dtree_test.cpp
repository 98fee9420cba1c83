#include <gtest/gtest.h>

#include <cmath>

#include "collapse/dtree.hpp"
#include "collapse/errors.hpp"
#include "collapse/theory.hpp"
#include "oracles.hpp"

using namespace collapse;

TEST(DTree, AttachRespectsRadius) {
  DTree t(2, 1);
  const auto f = t.attach(0);
  EXPECT_EQ(t.ridge_count(), 3u);
  EXPECT_EQ(t.depth(t.first_child_ridge(f)), 1u);
  EXPECT_EQ(t.parent_facet(t.first_child_ridge(f) + 1), f);
  EXPECT_THROW(t.attach(1), InputError);
}

TEST(DTree, SamplingEdgeCases) {
  EXPECT_EQ(sample_dtree(3.0, 2, 0, 1).facet_count(), 0u);
  EXPECT_EQ(sample_dtree(0.0, 2, 5, 1).facet_count(), 0u);
}

TEST(DTree, RootChildCountIsPoisson) {
  Rng rng(17);
  const int samples = 100000;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) sum += sample_dtree(3.0, 2, 1, rng).child_facet_count(0);
  EXPECT_LT(std::abs(sum / samples - 3.0), 5 * std::sqrt(3.0 / samples));
}

TEST(TauCollapse, BareRoot) {
  const auto r = tau_collapse(DTree(2, 3), 3);
  ASSERT_TRUE(r.isolated_after.has_value());
  EXPECT_EQ(*r.isolated_after, 0u);
}

TEST(TauCollapse, OneLeafyChild) {
  DTree t(2, 3);
  t.attach(0);
  EXPECT_FALSE(tau_collapse(t, 0).isolated_after.has_value());
  const auto r = tau_collapse(t, 3);
  ASSERT_TRUE(r.isolated_after.has_value());
  EXPECT_EQ(*r.isolated_after, 1u);
  EXPECT_EQ(r.root_degree, 0u);
}

TEST(TauCollapse, FullTreeSurvivesShortBudget) {
  // Every ridge above the leaves carries two facets, so each level buys one phase.
  const std::uint32_t radius = 5;
  DTree t(2, radius);
  for (std::uint32_t r = 0; r < t.ridge_count(); ++r) {
    if (t.depth(r) < radius) {
      t.attach(r);
      t.attach(r);
    }
  }
  const auto short_run = tau_collapse(t, radius - 1);
  EXPECT_FALSE(short_run.isolated_after.has_value());
  EXPECT_EQ(short_run.root_degree, 2u);
  EXPECT_EQ(tau_collapse(t, radius).isolated_after, radius);
}

// Phased simulation agrees with the bottom-up isolation recursion on random trees.
TEST(TauCollapse, MatchesRecursionOracle) {
  Rng rng(23);
  for (int k = 0; k < 3000; ++k) {
    const std::uint32_t d = 1 + k % 3;
    const double c = 0.5 + (k % 7) * 0.5;
    const std::uint32_t radius = 1 + k % 6;
    const auto tree = sample_dtree(c, d, radius, rng);
    const auto iso = oracle::subtree_isolation(tree);
    for (std::uint32_t phases = 0; phases <= radius + 1; ++phases) {
      const auto res = tau_collapse(tree, phases);
      if (iso[0] <= phases) {
        ASSERT_EQ(res.isolated_after, iso[0]) << k;
      } else {
        ASSERT_FALSE(res.isolated_after.has_value()) << k;
      }
      std::uint32_t alive = 0;
      for (std::uint32_t f = 0; f < tree.facet_count(); ++f) {
        if (tree.parent_ridge(f) != 0) continue;
        std::uint32_t best = UINT32_MAX;
        for (std::uint32_t j = 0; j < d; ++j) best = std::min(best, iso[tree.first_child_ridge(f) + j]);
        alive += best + 1 > phases;
      }
      ASSERT_EQ(res.root_degree, alive) << k;
    }
  }
}

TEST(EstimateGamma, Edges) {
  EXPECT_EQ(estimate_gamma(3.0, 2, 0, 100, 1).value, 0.0);
  for (std::uint32_t t = 1; t <= 4; ++t) EXPECT_EQ(estimate_gamma(0.0, 2, t, 100, 1).value, 1.0);
  const auto g1 = estimate_gamma(2.0, 2, 1, 20000, 5);
  EXPECT_LT(std::abs(g1.value - std::exp(-2.0)), 5 * g1.std_error);
  const auto g2 = estimate_gamma(3.0, 2, 2, 100000, 6);
  EXPECT_LT(std::abs(g2.value - 0.0666), 0.01);
}

TEST(EstimateGamma, Deterministic) {
  EXPECT_EQ(estimate_gamma(3.0, 2, 5, 500, 9).value, estimate_gamma(3.0, 2, 5, 500, 9).value);
}

TEST(EstimateGamma, AgreesWithRecursionOnGrid) {
  for (std::uint32_t d : {1u, 2u, 3u}) {
    for (double c : {0.5, 1.0, 2.0, 3.0}) {
      const auto exact = theory::gamma_beta_seq(c, d, 8).gamma;
      for (std::uint32_t t = 1; t <= 8; ++t) {
        const auto est = estimate_gamma(c, d, t, 4000, derive_seed(77, {d, t}));
        const double se = std::max(est.std_error, 1.0 / 4000);
        EXPECT_LT(std::abs(est.value - exact[t]), 5 * se) << "d=" << d << " c=" << c << " t=" << t;
      }
    }
  }
}

TEST(EstimateGamma, LazyAndFullTreesAgree) {
  for (std::uint32_t t = 1; t <= 5; ++t) {
    const auto lazy = estimate_gamma(2.0, 2, t, 5000, 31, TreeSampling::kLazy);
    const auto full = estimate_gamma(2.0, 2, t, 5000, 32, TreeSampling::kFullTree);
    const double se = std::hypot(lazy.std_error, full.std_error) + 1e-4;
    EXPECT_LT(std::abs(lazy.value - full.value), 5 * se) << t;
  }
}

TEST(EstimateBeta, Complement) {
  const auto b = estimate_beta(3.0, 2, 2, 1000, 4);
  const auto g = estimate_gamma(3.0, 2, 3, 1000, 4);
  EXPECT_DOUBLE_EQ(b.value, 1.0 - g.value);
}

TEST(RootDegree, Distribution) {
  const auto zero = root_degree_after_epoch1(0.0, 2, 3, 200, 1);
  ASSERT_FALSE(zero.empty());
  EXPECT_EQ(zero[0], 1.0);
  EXPECT_THROW(root_degree_after_epoch1(3.0, 2, 0, 10, 1), InputError);

  const auto dist = root_degree_after_epoch1(3.0, 2, 6, 20000, 3);
  double total = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    total += dist[k];
    mean += k * dist[k];
    second += k * k * dist[k];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto beta = theory::gamma_beta_seq(3.0, 2, 6).beta;
  const double lambda = beta[5] * beta[5] * 3.0;
  const double se = std::sqrt((second - mean * mean) / 20000);
  EXPECT_LT(std::abs(mean - lambda), 5 * se);
}
