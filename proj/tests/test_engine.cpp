#include <gtest/gtest.h>

#include <sstream>

#include "ocf/ocf.hpp"

using namespace ocf;

namespace {

class Scripted final : public OnlineAlgorithm {
 public:
  explicit Scripted(std::vector<Move> script) : script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  Move decide(const StepContext&) override { return script_.at(next_++); }

 private:
  std::vector<Move> script_;
  std::size_t next_ = 0;
};

class Peeker final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "peeker"; }
  Move decide(const StepContext& ctx) override {
    (void)ctx.game.weight(ctx.arriving, 3);
    return Move::singleton();
  }
};

Game path4() {
  GameBuilder b(4);
  b.set(0, 1, Weight(1)).set(1, 2, Weight(2)).set(2, 3, Weight(3));
  return b.build();
}

}  // namespace

TEST(Moves, CountsMatchDefinition) {
  const Partition p = Partition::from_coalitions({{0, 1, 2}, {3}, {5, 6}});
  EXPECT_EQ(legal_moves_standard(p, 4).size(), p.size() + 1);
  EXPECT_EQ(legal_moves_dissolution(p, 4).size(), p.size() + 1 + 6);
  EXPECT_EQ(legal_moves(p, 4, Mode::kStandard).size(), 4u);
  EXPECT_THROW(legal_moves_standard(p, 3), PreconditionError);
}

TEST(Moves, JsonRoundTrip) {
  for (const Move& m : {Move::join(3), Move::singleton(), Move::dissolve(2, 7)}) {
    EXPECT_EQ(move_from_json(move_to_json(m)), m);
  }
  EXPECT_THROW(move_from_json(nlohmann::json{{"type", "teleport"}}), ParseError);
  EXPECT_THROW(move_from_json(nlohmann::json::array()), ParseError);
}

TEST(Moves, WelfareDeltaMatchesRecomputation) {
  const Game g = path4();
  const Partition before = Partition::from_coalitions({{0, 1, 2}});
  for (const Move& m : legal_moves_dissolution(before, 3)) {
    Partition after = before;
    apply_move(after, 3, m);
    EXPECT_EQ(social_welfare(g, before) + move_welfare_delta(g, before, 3, m), social_welfare(g, after))
        << to_string(m);
  }
}

TEST(Order, MustBePermutation) {
  EXPECT_THROW(ArrivalOrder({0, 0, 1}), PreconditionError);
  EXPECT_THROW(ArrivalOrder({0, 3}), PreconditionError);
  EXPECT_EQ(ArrivalOrder::identity(3).sequence(), (std::vector<AgentId>{0, 1, 2}));
}

TEST(Engine, RunsScriptAndRecordsWelfare) {
  const Game g = path4();
  Scripted alg({Move::singleton(), Move::join(0), Move::join(0), Move::dissolve(0, 2)});
  const RunTrace t = run_online(g, ArrivalOrder::identity(4), alg, Mode::kDissolution);
  ASSERT_EQ(t.steps.size(), 4u);
  EXPECT_EQ(t.steps[2].welfare, Weight(6));
  EXPECT_EQ(t.final_partition.str(), "{{0},{1},{2,3}}");
  EXPECT_EQ(t.final_welfare, Weight(6));
  EXPECT_TRUE(validate_trace(g, ArrivalOrder::identity(4), t, Mode::kDissolution).ok);
}

TEST(Engine, IllegalMoveIsContractViolation) {
  const Game g = path4();
  Scripted dissolve_in_standard({Move::singleton(), Move::dissolve(0, 0)});
  EXPECT_THROW(run_online(g, ArrivalOrder::identity(4), dissolve_in_standard, Mode::kStandard),
               ContractViolation);
  Scripted bad_anchor({Move::singleton(), Move::join(3)});
  EXPECT_THROW(run_online(g, ArrivalOrder::identity(4), bad_anchor, Mode::kStandard), ContractViolation);
}

TEST(Engine, HiddenWeightReadIsContractViolation) {
  Peeker p;
  try {
    run_online(path4(), ArrivalOrder::identity(4), p, Mode::kStandard);
    FAIL() << "expected a violation";
  } catch (const ContractViolation& e) {
    ASSERT_FALSE(e.report().empty());
    EXPECT_NE(e.report()[0].find("step 1"), std::string::npos);
  }
}

TEST(Engine, StepperRejectsRepeatedArrival) {
  const Game g = path4();
  auto alg = make_algorithm("gdy")();
  OnlineStepper s(*alg, Mode::kStandard, 4);
  s.step(g, 2);
  EXPECT_THROW(s.step(g, 2), PreconditionError);
  EXPECT_THROW(s.step(g, 9), PreconditionError);
}

TEST(Trace, JsonLinesRoundTripAndTamperDetection) {
  const Game g = path4();
  const ArrivalOrder order({2, 0, 3, 1});
  const RunTrace t = run_online(g, order, gdy(), Mode::kDissolution);
  std::stringstream buf;
  write_trace_jsonl(buf, t);
  const std::string text = buf.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);

  std::stringstream in(text);
  const RunTrace back = replay_trace(g, read_trace_jsonl(in, Mode::kDissolution), Mode::kDissolution);
  EXPECT_EQ(back.final_partition, t.final_partition);
  EXPECT_TRUE(validate_trace(g, order_of_trace(back, 4), back, Mode::kDissolution).ok);

  RunTrace forged = back;
  forged.steps[1].welfare += Weight(1);
  const TraceValidation v = validate_trace(g, order, forged, Mode::kDissolution);
  EXPECT_FALSE(v.ok);
  EXPECT_FALSE(v.violations.empty());

  std::stringstream junk("{not json\n");
  EXPECT_THROW(read_trace_jsonl(junk, Mode::kStandard), ParseError);
}

TEST(Guard, StopsBeforeThirdMember) {
  GameBuilder b(3);
  b.set(0, 1, Weight(1)).set(0, 2, Weight(1)).set(1, 2, Weight(1));
  const Game g = b.build();
  EXPECT_EQ(run_online(g, ArrivalOrder::identity(3), gdy(), Mode::kStandard).final_partition.str(),
            "{{0,1,2}}");
  const RunTrace guarded = run_online(g, ArrivalOrder::identity(3), make_algorithm("guard:gdy"), Mode::kStandard);
  EXPECT_EQ(guarded.final_partition.str(), "{{0,1},{2}}");
  EXPECT_EQ(guarded.algorithm, "guard:gdy");
}

TEST(Modes, ParseAndPrint) {
  EXPECT_EQ(parse_mode("dissolution"), Mode::kDissolution);
  EXPECT_EQ(to_string(Mode::kStandard), "standard");
  EXPECT_THROW(parse_mode("free"), ParseError);
}
