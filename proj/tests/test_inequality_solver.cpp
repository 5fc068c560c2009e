#include <gtest/gtest.h>

#include <random>

#include "polyccd/inequality_solver.hpp"
#include "test_support.hpp"

using namespace polyccd;

namespace {

const TimeWindow kW03(0, 3);

}  // namespace


void expect_sets_near(const IntervalSet& got, const IntervalSet& want, double tol = 1e-9) {
  ASSERT_EQ(got.size(), want.size()) << got << " vs " << want;
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].lo, want[i].lo, tol);
    EXPECT_NEAR(got[i].hi, want[i].hi, tol);
  }
}

TEST(SolveConjunction, SingleLinear) { expect_sets_near(solve_conjunction({Polynomial{-1, 1}}, kW03), IntervalSet{{1, 3}}); }

TEST(SolveConjunction, NegativeConstantIsEmpty) {
  SolveStats stats;
  EXPECT_TRUE(solve_conjunction({Polynomial{-1}}, kW03, &stats).empty());
  EXPECT_EQ(stats.sturm_early_exits, 1u);
}

TEST(SolveConjunction, Band) {
  expect_sets_near(solve_conjunction({Polynomial{-1, 1}, Polynomial{2, -1}}, kW03), IntervalSet{{1, 2}});
}

TEST(SolveConjunction, ZeroAtStartFallsThroughToEndSign) {
  // t^2 on (0, 3] has no roots; start sign is zero, end sign positive.
  EXPECT_EQ(solve_conjunction({Polynomial{0, 0, 1}}, kW03), (IntervalSet{{0, 3}}));
  // -t^2: zero at start, negative at end: Alg. 1 returns empty.
  EXPECT_TRUE(solve_conjunction({Polynomial{0, 0, -1}}, kW03).empty());
}

TEST(SolveConjunction, PositiveStartWithoutRootsAcceptsWindow) {
  SolveStats stats;
  const auto r = solve_conjunction({Polynomial{1, 0, 1}, Polynomial{-1, 1}}, kW03, &stats);
  expect_sets_near(r, IntervalSet{{1, 3}});
  EXPECT_EQ(stats.roots_refined, 1u);
}

TEST(SolveConjunction, TangentRootKeepsBothSides) {
  const IntervalSet r = solve_conjunction({oracle::from_roots({1.5, 1.5})}, kW03);
  EXPECT_EQ(r, (IntervalSet{{0, 3}}));
}

TEST(SolveConjunction, EmptyInputRejected) {
  EXPECT_THROW(solve_conjunction(std::span<const Polynomial>{}, kW03), Error);
}

namespace {

struct RandomCase {
  std::vector<Polynomial> gs;
  TimeWindow w{0, 1};
};

RandomCase random_case(std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<int> deg(1, 16);
  std::uniform_real_distribution<double> start(0.0, 1.0);
  std::uniform_real_distribution<double> length(0.5, 3.0);
  RandomCase c;
  const double a = start(rng);
  c.w = TimeWindow(a, a + length(rng));
  for (int k = 0; k < count; ++k) {
    // Random polynomial in the window's unit variable, so it has roots inside.
    c.gs.push_back(from_unit_variable(oracle::random_polynomial(rng, deg(rng)), c.w));
  }
  return c;
}

}  // namespace

TEST(SolveConjunction, MatchesDenseSignSampling) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomCase c = random_case(rng, 5);
    const IntervalSet got = solve_conjunction(c.gs, c.w);
    const int n = 100000;
    for (int i = 0; i <= n; ++i) {
      const double t = c.w.start() + c.w.length() * i / n;
      bool sat = true;
      for (const auto& g : c.gs) sat = sat && oracle::power_sum(g, t) >= 0.0;
      if (sat != got.contains(t)) {
        ASSERT_LT(oracle::distance_to_boundary(got, t), 1e-6) << "trial " << trial << " t=" << t;
      }
    }
  }
}

TEST(SolveConjunction, AddingConstraintNeverEnlarges) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    RandomCase c = random_case(rng, 4);
    const IntervalSet fewer = solve_conjunction(std::span<const Polynomial>(c.gs.data(), 3), c.w);
    const IntervalSet more = solve_conjunction(c.gs, c.w);
    EXPECT_TRUE(more.subset_of(fewer, 1e-9)) << more << " vs " << fewer;
  }
}

TEST(SolveConjunction, ComplementCoversWindow) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomCase c = random_case(rng, 1);
    const IntervalSet pos = solve_conjunction({c.gs[0]}, c.w);
    const IntervalSet neg = solve_conjunction({-c.gs[0]}, c.w);
    const double uncovered = c.w.length() - pos.unite(neg).measure();
    EXPECT_LT(uncovered, 1e-8 * c.w.length());
  }
}

TEST(SolveConjunction, Deterministic) {
  std::mt19937_64 rng(53);
  const RandomCase c = random_case(rng, 5);
  EXPECT_EQ(solve_conjunction(c.gs, c.w), solve_conjunction(c.gs, c.w));
}
