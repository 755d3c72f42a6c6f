#include <gtest/gtest.h>

#include "brute.hpp"
#include "ocf/ocf.hpp"

using namespace ocf;

namespace {

auto pair_formed(AgentId a, AgentId b) {
  return [a, b](const Partition& p) { return p.coalition_of(a) == Coalition{a, b}; };
}

}  // namespace

// Expected values below come from the brute-force enumerator in brute.hpp.

TEST(Gdy, StarPairProbabilities) {
  EXPECT_EQ(brute::probability(gen_star_pair(2), gdy(), Mode::kStandard, pair_formed(0, 1)), Weight(1, 6));
  EXPECT_EQ(brute::probability(gen_star_pair(3), gdy(), Mode::kStandard, pair_formed(0, 1)), Weight(1, 10));
}

TEST(Gdy, PrefersLargestGainThenSmallestAnchor) {
  GameBuilder b(3);
  b.set(0, 2, Weight(1)).set(1, 2, Weight(1));
  const RunTrace t = run_online(b.build(), ArrivalOrder::identity(3), gdy(), Mode::kStandard);
  EXPECT_EQ(t.final_partition.str(), "{{0,2},{1}}");
}

TEST(Gdy, StandardVariantNeverDissolves) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Game g = brute::random_game(6, seed);
    for (const auto& s : run_online(g, ArrivalOrder::identity(6), make_algorithm("gdy-std"), Mode::kDissolution).steps) {
      EXPECT_NE(s.move.kind, Move::Kind::kDissolveAndPair);
    }
  }
}

TEST(Gdy, MatchingVariantBuildsMatchings) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Game g = brute::random_game(7, seed);
    const RunTrace t = run_online(g, ArrivalOrder::identity(7), make_algorithm("gdy-m"), Mode::kDissolution);
    EXPECT_LE(t.final_partition.max_coalition_size(), 2u);
  }
}

TEST(Wgdy, StarPairProbabilities) {
  EXPECT_EQ(brute::probability(gen_star_pair(2), wgdy(), Mode::kStandard, pair_formed(0, 1)), Weight(1, 3));
  EXPECT_EQ(brute::probability(gen_star_pair(3), wgdy(), Mode::kStandard, pair_formed(0, 1)), Weight(1, 4));
}

TEST(Wgdy, NeedsEvenHorizon) {
  const Game g = brute::random_game(5, 1);
  EXPECT_THROW(run_online(g, ArrivalOrder::identity(5), wgdy(), Mode::kStandard), PreconditionError);
  EXPECT_THROW(run_online(g, ArrivalOrder::identity(5), gma(), Mode::kStandard), PreconditionError);
}

TEST(Gma, SingleEdgeProbability) {
  for (long n : {4L, 6L}) {
    GameBuilder b(static_cast<std::size_t>(n));
    b.set(0, 1, Weight(1));
    EXPECT_EQ(brute::probability(b.build(), gma(), Mode::kStandard, pair_formed(0, 1)), Weight(1, n - 1));
  }
}

TEST(Iwa, PhasesDoubleAndStayInside) {
  const Game g = brute::random_game(14, 3, 1, 5);  // all positive
  const RunTrace t = run_online(g, ArrivalOrder::identity(14), iwa(), Mode::kStandard);
  // Phases cover arrivals 0-1, 2-5, 6-13, so no coalition crosses those blocks.
  for (const auto& c : t.final_partition.coalitions()) {
    auto block = [](AgentId a) { return a < 2 ? 0 : a < 6 ? 1 : 2; };
    for (AgentId a : c) EXPECT_EQ(block(a), block(c.front()));
  }
}

TEST(Dta, DefaultThresholdRoundsUp) {
  const Weight t = dta_default_threshold();
  const Weight excess = t - Weight(1);
  EXPECT_GT(excess * excess * Weight(2), Weight(1));  // t - 1 > sqrt(2)/2
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 30);
  const Weight below = excess - Weight(mpz_class(1), scale);
  EXPECT_LT(below * below * Weight(2), Weight(1));
  EXPECT_TRUE(scale % t.denominator() == 0);
  EXPECT_THROW(DtaThreshold(Weight(1, 2)), PreconditionError);
}

TEST(Dta, DissolvesOnlyPastThreshold) {
  GameBuilder b(3);
  b.set(0, 1, Weight(2)).set(1, 2, Weight(3));
  const Game g = b.build();
  // 3 < 2t for t = 1.7, so the pair stays; t = 1.5 allows the swap.
  EXPECT_EQ(run_online(g, ArrivalOrder::identity(3), make_algorithm("dta:1.7"), Mode::kDissolution)
                .final_partition.str(),
            "{{0,1},{2}}");
  EXPECT_EQ(run_online(g, ArrivalOrder::identity(3), make_algorithm("dta:3/2"), Mode::kDissolution)
                .final_partition.str(),
            "{{0},{1,2}}");
}

TEST(Dta, LadderKeepsOnlyLastRung) {
  for (unsigned k = 1; k <= 6; ++k) {
    const Instance inst = gen_dta_ladder(k);
    const RunTrace t = run_online(inst.game, *inst.order, dta_default(), Mode::kDissolution);
    EXPECT_EQ(t.final_partition.max_coalition_size(), 2u);
    EXPECT_EQ(matching_weight(inst.game, t.final_partition), Weight::pow(dta_default_threshold(), k));
    EXPECT_EQ(t.final_partition.coalition_of(k), (Coalition{k, k + 1}));
  }
}

TEST(Maxe, OddsRule) {
  EXPECT_EQ(odds_stopping_time(10).s, 7u);
  EXPECT_EQ(odds_stopping_time(6).success_probability(), Weight(7, 15));
  EXPECT_EQ(odds_stopping_time(2).s, 2u);
  EXPECT_THROW(odds_stopping_time(1), PreconditionError);
}

TEST(Maxe, SuccessProbabilityMatchesEnumeration) {
  const Game g = perturb_distinct(brute::random_game(6, 11, 1, 9));
  AgentId a = 0, b = 1;
  for (AgentId i = 0; i < 6; ++i) {
    for (AgentId j = i + 1; j < 6; ++j) {
      if (g.at(i, j) > g.at(a, b)) a = i, b = j;
    }
  }
  const Weight p = brute::probability(g, maxe(), Mode::kStandard, pair_formed(a, b));
  EXPECT_GE(p, odds_stopping_time(6).success_probability());
}

TEST(Perturb, MakesWeightsDistinctAndPreservesOrder) {
  const Game g = brute::random_game(7, 5, -2, 2);
  const Game d = perturb_distinct(g);
  std::vector<Weight> seen;
  for (AgentId i = 0; i < 7; ++i) {
    for (AgentId j = i + 1; j < 7; ++j) {
      seen.push_back(d.at(i, j));
      for (AgentId x = 0; x < 7; ++x) {
        for (AgentId y = x + 1; y < 7; ++y) {
          if (g.at(i, j) < g.at(x, y)) EXPECT_LT(d.at(i, j), d.at(x, y));
        }
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
}

TEST(Registry, KnownAndUnknownNames) {
  for (const char* name : {"gdy", "gdy-std", "gdy-m", "gma", "wgdy", "iwa", "dta", "dta:2", "maxe",
                           "i-maxe", "singletons", "guard:wgdy", "i:gdy"}) {
    EXPECT_NO_THROW(make_algorithm(name)()) << name;
  }
  EXPECT_EQ(make_algorithm("i:gdy")()->name(), "i:gdy");
  EXPECT_THROW(make_algorithm("oracle"), ParseError);
  EXPECT_THROW(make_algorithm("dta:x"), ParseError);
}

TEST(Singletons, AlwaysAlone) {
  const Game g = brute::random_game(6, 2, 1, 3);
  EXPECT_EQ(run_online(g, ArrivalOrder::identity(6), singletons(), Mode::kDissolution).final_welfare, Weight(0));
}
