#include <gtest/gtest.h>

#include "ocf/game.hpp"

using namespace ocf;

namespace {
Game triangle() {
  GameBuilder b(3);
  b.set(0, 1, Weight(2)).set(0, 2, Weight(-1)).set(1, 2, Weight(3));
  return b.build();
}
}  // namespace

TEST(Game, SymmetricWeightsAndChecks) {
  const Game g = triangle();
  EXPECT_EQ(g.weight(1, 0), Weight(2));
  EXPECT_EQ(g.weight(2, 1), Weight(3));
  EXPECT_THROW(g.weight(0, 0), PreconditionError);
  EXPECT_THROW(g.weight(0, 3), PreconditionError);
}

TEST(Game, FromEdgesValidates) {
  std::vector<Edge> ok{{0, 1, Weight(1)}, {1, 2, Weight(-2)}};
  const Game g = Game::from_edges(3, ok);
  EXPECT_EQ(g.weight(2, 1), Weight(-2));
  EXPECT_EQ(g.edges().size(), 2u);
  std::vector<Edge> reversed{{1, 0, Weight(1)}};
  EXPECT_THROW(Game::from_edges(3, reversed), PreconditionError);
  std::vector<Edge> dup{{0, 1, Weight(1)}, {0, 1, Weight(2)}};
  EXPECT_THROW(Game::from_edges(3, dup), PreconditionError);
  std::vector<Edge> range{{0, 5, Weight(1)}};
  EXPECT_THROW(Game::from_edges(3, range), PreconditionError);
}

TEST(Partition, CanonicalOrderAndLookups) {
  const Partition p = Partition::from_coalitions({{4, 2}, {3}, {1, 0}});
  EXPECT_EQ(p.str(), "{{0,1},{2,4},{3}}");
  EXPECT_EQ(p.coalition_of(4), (Coalition{2, 4}));
  EXPECT_EQ(p.index_of(3), 2u);
  EXPECT_EQ(p.agent_count(), 5u);
  EXPECT_EQ(p.max_coalition_size(), 2u);
  EXPECT_THROW(Partition::from_coalitions({{0, 1}, {1}}), PreconditionError);
  EXPECT_THROW(Partition::from_coalitions({{}}), PreconditionError);
}

TEST(Partition, JoinSingletonAndDissolve) {
  Partition p;
  p.add_singleton(0);
  p.join(0, 1);
  p.join(0, 2);
  EXPECT_EQ(p.str(), "{{0,1,2}}");
  p.dissolve_and_pair(0, 1, 3);
  EXPECT_EQ(p.str(), "{{0},{1,3},{2}}");
  EXPECT_THROW(p.add_singleton(3), PreconditionError);
  EXPECT_THROW(p.dissolve_and_pair(0, 2, 4), PreconditionError);
}

TEST(Welfare, UtilityAndSocialWelfare) {
  const Game g = triangle();
  const Partition all = Partition::from_coalitions({{0, 1, 2}});
  EXPECT_EQ(utility(g, 0, Coalition{0, 1, 2}), Weight(1));
  EXPECT_EQ(utility(g, 1, Coalition{0, 1, 2}), Weight(5));
  EXPECT_EQ(social_welfare(g, all), Weight(8));
  EXPECT_EQ(coalition_welfare(g, Coalition{1, 2}), Weight(6));
  EXPECT_EQ(positive_edge_sum(g), Weight(5));
  EXPECT_THROW(utility(g, 2, Coalition{0, 1}), PreconditionError);
}

TEST(Matching, ViewRejectsLargeCoalitions) {
  const Game g = triangle();
  const Partition m = Partition::from_coalitions({{1, 2}, {0}});
  EXPECT_EQ(matching_weight(g, m), Weight(3));
  EXPECT_TRUE(is_matching(m).has_value());
  const Partition big = Partition::from_coalitions({{0, 1, 2}});
  EXPECT_FALSE(is_matching(big).has_value());
  EXPECT_THROW(MatchingView{big}, InvalidMatchingError);
}

TEST(Subgame, RestrictionKeepsWeightsAndMapping) {
  const Game g = triangle();
  std::vector<AgentId> subset{2, 1};
  const Subgame s = induced_subgame(g, subset);
  EXPECT_EQ(s.game.size(), 2u);
  EXPECT_EQ(s.original, (std::vector<AgentId>{1, 2}));
  EXPECT_EQ(s.game.weight(0, 1), Weight(3));
  const Partition p = Partition::from_coalitions({{0, 2}, {1}});
  EXPECT_EQ(restrict_partition(p, subset).str(), "{{1},{2}}");
}
