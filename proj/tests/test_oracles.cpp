#include <gtest/gtest.h>

#include "brute.hpp"
#include "ocf/ocf.hpp"

using namespace ocf;

TEST(OptimalPartition, MatchesBruteForceOnRandomGames) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const Game g = brute::random_game(n, seed);
    const OptimalPartition opt = optimal_partition(g);
    EXPECT_EQ(opt.welfare, brute::best_partition_welfare(g)) << "seed " << seed;
    EXPECT_EQ(social_welfare(g, opt.partition), opt.welfare);
    EXPECT_EQ(opt.partition.agent_count(), n);
  }
}

TEST(OptimalPartition, RationalFallbackBeyondInt64) {
  // Denominators whose common multiple overflows the scaled fast path.
  mpz_class p1("1000000000000000003"), p2("1000000000000000009"), p3("1000000000000000031");
  GameBuilder b(4);
  b.set(0, 1, Weight(mpz_class(1), p1)).set(1, 2, Weight(mpz_class(1), p2));
  b.set(0, 2, Weight(mpz_class(-1), p3)).set(2, 3, Weight(mpz_class(2), p1));
  const Game g = b.build();
  EXPECT_EQ(optimal_partition(g).welfare, brute::best_partition_welfare(g));
  EXPECT_EQ(max_weight_matching(g).weight, brute::best_matching_weight(g));
}

TEST(OptimalPartition, CapacityLimit) {
  EXPECT_THROW(optimal_partition(Game(14)), CapacityError);
  OracleLimits bigger;
  bigger.partition_n = 14;
  GameBuilder b(14);
  b.set(0, 13, Weight(1));
  EXPECT_EQ(optimal_partition(b.build(), bigger).welfare, Weight(2));
  bigger.partition_n = 99;
  EXPECT_THROW(optimal_partition(b.build(), bigger), PreconditionError);
}

TEST(MaxMatching, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t n = 1 + seed % 9;
    const Game g = brute::random_game(n, seed + 500);
    const MaxMatching m = max_weight_matching(g);
    EXPECT_EQ(m.weight, brute::best_matching_weight(g)) << "seed " << seed;
    EXPECT_EQ(matching_weight(g, m.matching.partition()), m.weight);
  }
}

TEST(MaxMatching, SinglePositiveEdge) {
  GameBuilder b(5);
  b.set(1, 3, Weight(4)).set(0, 2, Weight(-1));
  const MaxMatching m = max_weight_matching(b.build());
  EXPECT_EQ(m.weight, Weight(4));
  EXPECT_EQ(m.matching.pairs(), (std::vector<std::pair<AgentId, AgentId>>{{1, 3}}));
}

TEST(MaxMatching, AverageBound) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EXPECT_TRUE(check_avgmat_bound(brute::random_game(2 + seed % 9, seed)));
  }
  EXPECT_TRUE(check_avgmat_bound(Game(1)));
}

TEST(Enumeration, ExactExpectationMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Game g = brute::random_game(5, seed);
    EXPECT_EQ(exact_expected_welfare(g, gdy(), Mode::kStandard), brute::mean_welfare(g, gdy(), Mode::kStandard));
    EXPECT_EQ(exact_expected_welfare(g, dta_default(), Mode::kDissolution, {}, 3),
              brute::mean_welfare(g, dta_default(), Mode::kDissolution));
  }
  EXPECT_THROW(exact_expected_welfare(Game(10), gdy(), Mode::kStandard), CapacityError);
}

TEST(Enumeration, OrderCount) {
  const std::uint64_t count = fold_orders(
      5, 2, std::uint64_t{0}, [](std::uint64_t& a, const ArrivalOrder&) { ++a; },
      [](std::uint64_t& a, std::uint64_t&& b) { a += b; });
  EXPECT_EQ(count, 120u);
  EXPECT_EQ(factorial(6), Weight(720));
}

TEST(MonteCarlo, DeterministicAcrossJobCounts) {
  const Game g = gen_star_pair(4);
  const RatioEstimate a = mc_expected_welfare(g, iwa(), Mode::kStandard, 3000, 42, 1);
  const RatioEstimate b = mc_expected_welfare(g, iwa(), Mode::kStandard, 3000, 42, 3);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NEAR(a.half_width, 1.96 * a.std_error, 1e-3 * a.std_error);
  EXPECT_EQ(trial_order(6, 9, 4), trial_order(6, 9, 4));
}

TEST(MonteCarlo, AgreesWithExactWithinError) {
  const Game g = gen_star_pair(2);
  const Weight exact = exact_expected_welfare(g, wgdy(), Mode::kStandard);
  const RatioEstimate mc = mc_expected_welfare(g, wgdy(), Mode::kStandard, 20000, 7);
  EXPECT_NEAR(mc.point, exact.to_double(), 5 * mc.std_error);
}

TEST(Ratio, ZeroConventions) {
  EXPECT_EQ(welfare_ratio(Weight(0), Weight(0)), Weight(1));
  EXPECT_EQ(welfare_ratio(Weight(-2), Weight(0)), Weight(0));
  EXPECT_EQ(welfare_ratio(Weight(3), Weight(6)), Weight(1, 2));
}

TEST(Ratio, WorstCaseTrapValue) {
  const Instance trap = gen_dissolution_trap(4);
  const RatioEstimate r = competitive_ratio(trap.game, gdy(), Mode::kDissolution, Arrival::kWorst);
  ASSERT_TRUE(r.exact.has_value());
  EXPECT_EQ(*r.exact, Weight(1, 8));
  RatioBudget fixed;
  fixed.fixed_order = trap.order;
  EXPECT_EQ(*competitive_ratio(trap.game, gdy(), Mode::kDissolution, Arrival::kFixed, fixed).exact, Weight(1, 8));
}
