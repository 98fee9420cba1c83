#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "collapse/engine.hpp"
#include "collapse/errors.hpp"
#include "collapse/sampler.hpp"
#include "collapse/trace_io.hpp"
#include "helpers.hpp"

using namespace collapse;
using namespace testing_helpers;

TEST(TimeZero, Examples) {
  const auto tet = time_zero_stats(tetrahedron_boundary());
  EXPECT_EQ(tet.nonisolated, 6u);
  EXPECT_EQ(tet.free, 0u);
  EXPECT_EQ(tet.degree_counts[2], 6u);
  const auto tri = time_zero_stats(make_complex(5, 2, {{0, 1, 2}}));
  EXPECT_EQ(tri.nonisolated, 3u);
  EXPECT_EQ(tri.free, 3u);
  EXPECT_EQ(tri.degree_counts[0], 7u);
  const auto empty = time_zero_stats(Complex(5, 2));
  EXPECT_EQ(empty.nonisolated, 0u);
  EXPECT_EQ(empty.free, 0u);
}

TEST(Epoch1, ZeroPhasesLeavesComplex) {
  auto x = sample_complex(ModelParams::from_density(30, 2, 3.0, 2));
  const auto before = x;
  const auto t = run_epoch1(x, 0);
  EXPECT_EQ(x, before);
  EXPECT_EQ(t.time_zero.free, free_faces(before).size());
}

TEST(Epoch1, SingleTriangleOnePhase) {
  auto x = make_complex(5, 2, {{0, 1, 2}});
  const auto t = run_epoch1(x, 1);
  EXPECT_TRUE(x.empty());
  ASSERT_EQ(t.collapses.size(), 1u);
  EXPECT_EQ(t.collapses[0], 1u);
  EXPECT_EQ(t.skipped[0], 2u);
}

TEST(Epoch1, PendantFaceRemoved) {
  auto x = make_complex(5, 2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {0, 1, 4}});
  const auto t = run_epoch1(x, 1);
  EXPECT_EQ(x, tetrahedron_boundary(5));
  EXPECT_EQ(t.nonisolated.back(), 6u);
}

// Snapshot semantics: ridges freed during a phase wait for the next one.
TEST(Epoch1, TailShrinksOneEdgePerPhase) {
  // A triangle graph with a pendant path 2-3-4.
  auto x = make_complex(5, 1, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}});
  const auto t = run_epoch1(x, 3);
  EXPECT_EQ(t.collapses, (std::vector<std::uint64_t>{1, 1, 0}));
  EXPECT_EQ(x, make_complex(5, 1, {{0, 1}, {0, 2}, {1, 2}}));
}

TEST(MarkRound, Examples) {
  Rng rng(1);
  EXPECT_TRUE(mark_round(tetrahedron_boundary(), rng).empty());
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(mark_round(make_complex(5, 2, {{0, 1, 2}}), rng).size(), 1u);
    auto two = make_complex(5, 2, {{0, 1, 2}, {0, 1, 3}});
    const auto marked = mark_round(two, rng);
    ASSERT_EQ(marked.size(), 2u);
    EXPECT_NE(two.unique_coface(marked[0]), two.unique_coface(marked[1]));
  }
}

// Every facet with a free ridge gets exactly one mark, and each conditional
// choice looks uniform.
TEST(MarkRound, OnePerFacetUniformly) {
  auto x = sample_complex(ModelParams::from_density(40, 2, 3.0, 3));
  std::set<FacetId> with_free;
  for (auto r : x.free_ridges()) with_free.insert(x.unique_coface(r));
  Rng rng(7);
  std::map<std::uint64_t, int> hits;
  const int rounds = 3000;
  for (int k = 0; k < rounds; ++k) {
    const auto marked = mark_round(x, rng);
    std::set<FacetId> seen;
    for (auto r : marked) {
      ASSERT_EQ(x.degree(r), 1u);
      ASSERT_TRUE(seen.insert(x.unique_coface(r)).second);
      ++hits[to_index(r)];
    }
    ASSERT_EQ(seen, with_free);
  }
  // A facet with m free ridges marks each with probability 1/m.
  std::map<FacetId, int> free_in;
  for (auto r : x.free_ridges()) ++free_in[x.unique_coface(r)];
  for (auto r : x.free_ridges()) {
    const double p = 1.0 / free_in[x.unique_coface(r)];
    const double sd = std::sqrt(rounds * p * (1 - p)) + 1e-9;
    EXPECT_LT(std::abs(hits[to_index(r)] - rounds * p), 5 * sd + 1e-9);
  }
}

TEST(DegreeExcluding, Examples) {
  auto tri = make_complex(5, 2, {{0, 1, 2}});
  const auto s012 = tri.facet_id(std::vector<Vertex>{0, 1, 2});
  EXPECT_EQ(degree_excluding(tri, ridge(tri, {0, 1}), s012), 0u);
  auto two = make_complex(5, 2, {{0, 1, 2}, {0, 1, 3}});
  EXPECT_EQ(degree_excluding(two, ridge(two, {0, 1}), s012), 1u);
  EXPECT_EQ(degree_excluding(two, ridge(two, {0, 3}), s012), 1u);
  EXPECT_THROW(degree_excluding(two, ridge(two, {0, 1}), two.facet_id(std::vector<Vertex>{0, 1, 4})), InputError);
}

TEST(Epoch2, SingleTriangle) {
  auto x = make_complex(5, 2, {{0, 1, 2}});
  Rng rng(3);
  const auto t = run_epoch2(x, rng);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.initial_free, 3u);
  EXPECT_EQ(t.steps[0].newly_free, 0u);
  EXPECT_EQ(t.steps[0].lost_isolated, 2u);
  EXPECT_EQ(t.steps[0].free_after, 0u);
  EXPECT_TRUE(t.collapsible);
  EXPECT_NO_THROW(verify_accounting(t, 2));
}

TEST(Epoch2, CoreStaysPut) {
  auto x = tetrahedron_boundary();
  Rng rng(3);
  const auto t = run_epoch2(x, rng);
  EXPECT_TRUE(t.steps.empty());
  EXPECT_EQ(t.core_facets, 4u);
  EXPECT_FALSE(t.collapsible);
  EXPECT_EQ(t.rounds, 0u);
}

// Replays each trace on a copy and recomputes Y, W and X from degrees.
TEST(Epoch2, TraceReplaysExactly) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::uint32_t d = 2 + static_cast<std::uint32_t>(seed % 2);
    const auto start = sample_complex(ModelParams::from_density(30, d, d == 2 ? 2.5 : 3.5, seed));
    auto x = start;
    run_epoch1(x, static_cast<std::uint32_t>(seed % 3));
    auto replay = x;
    Rng rng(seed);
    const auto t = run_epoch2(x, rng, {.record_first_affected = true});
    ASSERT_NO_THROW(verify_accounting(t, d));
    EXPECT_EQ(t.initial_free, replay.free_count());
    std::uint32_t round = 0;
    std::set<std::uint64_t> round_marks;
    for (const auto& s : t.steps) {
      ASSERT_EQ(replay.degree(s.tau), 1u) << "marked ridge no longer free";
      ASSERT_EQ(replay.unique_coface(s.tau), s.sigma);
      std::uint32_t y = 0, w = 0;
      for (auto b : replay.boundary(s.sigma)) {
        if (b == s.tau) continue;
        y += replay.degree(b) == 2;
        w += replay.degree(b) == 1;
      }
      replay.remove_facet(s.sigma);
      EXPECT_EQ(s.newly_free, y);
      EXPECT_EQ(s.lost_isolated, w);
      EXPECT_EQ(s.free_after, replay.free_count());
      if (s.mark != round) {
        round = s.mark;
        round_marks.clear();
      }
      EXPECT_TRUE(round_marks.insert(to_index(s.tau)).second);
    }
    EXPECT_EQ(replay, d_core(start));
    EXPECT_EQ(x, replay);
  }
}

TEST(VerifyAccounting, RejectsBrokenTrace) {
  auto x = sample_complex(ModelParams::from_density(40, 2, 2.0, 1));
  Rng rng(1);
  auto t = run_epoch2(x, rng);
  ASSERT_FALSE(t.steps.empty());
  t.steps[0].free_after += 1;
  EXPECT_THROW(verify_accounting(t, 2), InvariantError);
}

TEST(TraceIo, JsonAndCsv) {
  auto x = make_complex(5, 2, {{0, 1, 2}, {0, 1, 3}});
  const auto e1 = run_epoch1(x, 0);
  Rng rng(4);
  const auto e2 = run_epoch2(x, rng);
  const auto j = trace_to_json({5, 2, 0, 4}, e1, e2);
  EXPECT_EQ(j["params"]["n"], 5);
  EXPECT_EQ(j["epoch1"]["X0"], 4);
  EXPECT_EQ(j["epoch2"]["steps"].size(), e2.steps.size());
  EXPECT_EQ(j["epoch2"]["steps"][0]["tau"].size(), 2u);
  EXPECT_EQ(j["epoch2"]["steps"][0]["sigma"].size(), 3u);
  EXPECT_TRUE(j["epoch2"]["collapsible"].get<bool>());
  std::ostringstream csv;
  write_trace_csv(e2, csv);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "i,mark,Y,W,X");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(e2.steps.size() + 1));
}
