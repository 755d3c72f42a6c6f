#pragma once

#include <chrono>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocf/game.hpp"

namespace ocf {

enum class Mode { kStandard, kDissolution };

inline std::string to_string(Mode m) {
  return m == Mode::kStandard ? "standard" : "dissolution";
}
inline Mode parse_mode(std::string_view s) {
  if (s == "standard") return Mode::kStandard;
  if (s == "dissolution") return Mode::kDissolution;
  throw ParseError("unknown mode '" + std::string(s) + "' (expected standard or dissolution)");
}

class ArrivalOrder {
 public:
  ArrivalOrder() = default;
  explicit ArrivalOrder(std::vector<AgentId> seq) : seq_(std::move(seq)) {
    std::vector<char> seen(seq_.size(), 0);
    for (AgentId a : seq_) {
      if (a >= seq_.size() || seen[a]) {
        throw PreconditionError("arrival order is not a permutation of 0.." +
                                std::to_string(seq_.size() == 0 ? 0 : seq_.size() - 1));
      }
      seen[a] = 1;
    }
  }
  static ArrivalOrder identity(std::size_t n) {
    std::vector<AgentId> s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = static_cast<AgentId>(k);
    return ArrivalOrder(std::move(s));
  }
  std::size_t size() const { return seq_.size(); }
  AgentId operator[](std::size_t k) const { return seq_[k]; }
  const std::vector<AgentId>& sequence() const { return seq_; }
  friend bool operator==(const ArrivalOrder&, const ArrivalOrder&) = default;

 private:
  std::vector<AgentId> seq_;
};

// Read-only window on a game: only pairs among revealed agents may be queried.
class RevealedGame {
 public:
  RevealedGame(const Game& game, const std::vector<AgentId>& revealed,
               const std::vector<char>& mask)
      : game_(&game), revealed_(&revealed), mask_(&mask) {}

  const Weight& weight(AgentId i, AgentId j) const {
    if (!is_revealed(i) || !is_revealed(j)) {
      throw HiddenWeightError("weight(" + std::to_string(i) + "," + std::to_string(j) +
                              ") is not revealed yet");
    }
    if (i == j) throw PreconditionError("no self weight for agent " + std::to_string(i));
    return game_->at(i, j);
  }
  bool is_revealed(AgentId a) const { return a < mask_->size() && (*mask_)[a] != 0; }
  // Revealed agents in arrival order.
  std::span<const AgentId> revealed() const { return *revealed_; }
  std::size_t revealed_count() const { return revealed_->size(); }

  // A narrower view over a subset of the revealed agents.
  RevealedGame restrict_to(const std::vector<AgentId>& agents, const std::vector<char>& mask) const {
    for (AgentId a : agents) {
      if (!is_revealed(a)) {
        throw HiddenWeightError("cannot restrict to unrevealed agent " + std::to_string(a));
      }
    }
    return RevealedGame(*game_, agents, mask);
  }

 private:
  const Game* game_;
  const std::vector<AgentId>* revealed_;
  const std::vector<char>* mask_;
};

struct Move {
  enum class Kind : std::uint8_t { kJoin, kNewSingleton, kDissolveAndPair };
  Kind kind = Kind::kNewSingleton;
  AgentId anchor = 0;   // smallest member of the target coalition
  AgentId partner = 0;  // only for kDissolveAndPair

  static Move join(AgentId anchor) { return {Kind::kJoin, anchor, 0}; }
  static Move singleton() { return {Kind::kNewSingleton, 0, 0}; }
  static Move dissolve(AgentId anchor, AgentId partner) {
    return {Kind::kDissolveAndPair, anchor, partner};
  }
  friend bool operator==(const Move&, const Move&) = default;
};

inline std::string to_string(const Move& m) {
  switch (m.kind) {
    case Move::Kind::kJoin:
      return "join(" + std::to_string(m.anchor) + ")";
    case Move::Kind::kNewSingleton:
      return "singleton";
    case Move::Kind::kDissolveAndPair:
      return "dissolve(" + std::to_string(m.anchor) + "," + std::to_string(m.partner) + ")";
  }
  return "?";
}

inline nlohmann::json move_to_json(const Move& m) {
  switch (m.kind) {
    case Move::Kind::kJoin:
      return {{"type", "join"}, {"anchor", m.anchor}};
    case Move::Kind::kNewSingleton:
      return {{"type", "singleton"}};
    case Move::Kind::kDissolveAndPair:
      return {{"type", "dissolve"}, {"anchor", m.anchor}, {"partner", m.partner}};
  }
  return {};
}

inline Move move_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) throw ParseError("move needs a 'type' field");
  const std::string type = j["type"].get<std::string>();
  if (type == "singleton") return Move::singleton();
  if (type == "join") return Move::join(j.at("anchor").get<AgentId>());
  if (type == "dissolve") {
    return Move::dissolve(j.at("anchor").get<AgentId>(), j.at("partner").get<AgentId>());
  }
  throw ParseError("unknown move type '" + type + "'");
}

inline void require_absent(const Partition& pi, AgentId i) {
  if (pi.contains(i)) {
    throw PreconditionError("agent " + std::to_string(i) + " is already placed");
  }
}

inline std::vector<Move> legal_moves_standard(const Partition& pi, AgentId i) {
  require_absent(pi, i);
  std::vector<Move> out;
  out.reserve(pi.size() + 1);
  for (const auto& c : pi.coalitions()) out.push_back(Move::join(c.front()));
  out.push_back(Move::singleton());
  return out;
}

inline std::vector<Move> legal_moves_dissolution(const Partition& pi, AgentId i) {
  std::vector<Move> out = legal_moves_standard(pi, i);
  for (const auto& c : pi.coalitions()) {
    for (AgentId j : c) out.push_back(Move::dissolve(c.front(), j));
  }
  return out;
}

inline std::vector<Move> legal_moves(const Partition& pi, AgentId i, Mode mode) {
  return mode == Mode::kStandard ? legal_moves_standard(pi, i) : legal_moves_dissolution(pi, i);
}

inline void apply_move(Partition& pi, AgentId i, const Move& m) {
  switch (m.kind) {
    case Move::Kind::kJoin:
      pi.join(m.anchor, i);
      break;
    case Move::Kind::kNewSingleton:
      pi.add_singleton(i);
      break;
    case Move::Kind::kDissolveAndPair:
      pi.dissolve_and_pair(m.anchor, m.partner, i);
      break;
  }
}

// Change in social welfare caused by placing i with move m.
template <typename G>
Weight move_welfare_delta(const G& game, const Partition& pi, AgentId i, const Move& m) {
  Weight d;
  switch (m.kind) {
    case Move::Kind::kJoin:
      for (AgentId j : pi.coalition_of(m.anchor)) d += game.weight(i, j);
      d.mul_pow2(1);
      break;
    case Move::Kind::kNewSingleton:
      break;
    case Move::Kind::kDissolveAndPair:
      d = game.weight(i, m.partner);
      d.mul_pow2(1);
      d -= coalition_welfare(game, pi.coalition_of(m.anchor));
      break;
  }
  return d;
}

struct StepContext {
  const RevealedGame& game;
  const Partition& partition;
  AgentId arriving;
  std::span<const Move> moves;
  std::size_t step;  // 1-based arrival index
  Mode mode;
};

class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual bool knows_n() const { return false; }
  // Called once before the first arrival, and only when knows_n() is true.
  virtual void start(std::size_t /*n*/) {}
  virtual Move decide(const StepContext& ctx) = 0;
};

using AlgorithmFactory = std::function<std::unique_ptr<OnlineAlgorithm>()>;

struct TraceStep {
  std::size_t step = 0;
  AgentId agent = 0;
  Move move;
  Weight welfare;
  std::optional<Partition> snapshot;
  double decide_us = 0.0;  // wall time spent inside the algorithm
};

struct RunTrace {
  std::string algorithm;
  Mode mode = Mode::kStandard;
  std::vector<TraceStep> steps;
  Partition final_partition;
  Weight final_welfare;
};

struct RunOptions {
  bool record_steps = true;
  bool record_snapshots = true;
  bool record_timing = true;
};

// Drives one algorithm through arrivals. The caller supplies the game at each step;
// it must agree with earlier steps on every revealed pair (adaptive adversaries rely on this).
class OnlineStepper {
 public:
  OnlineStepper(OnlineAlgorithm& alg, Mode mode, std::size_t n, RunOptions opts = {})
      : alg_(alg), mode_(mode), n_(n), opts_(opts), mask_(n, 0) {
    trace_.algorithm = alg.name();
    trace_.mode = mode;
    if (alg.knows_n()) alg.start(n);
    revealed_.reserve(n);
  }

  const Move& step(const Game& game, AgentId arriving) {
    if (game.size() != n_) throw PreconditionError("game size changed during a run");
    if (arriving >= n_ || mask_[arriving]) {
      throw PreconditionError("agent " + std::to_string(arriving) + " cannot arrive now");
    }
    revealed_.push_back(arriving);
    mask_[arriving] = 1;
    moves_ = legal_moves(partition_, arriving, mode_);
    RevealedGame view(game, revealed_, mask_);
    StepContext ctx{view, partition_, arriving, moves_, revealed_.size(), mode_};

    const auto t0 = opts_.record_timing ? std::chrono::steady_clock::now()
                                        : std::chrono::steady_clock::time_point{};
    try {
      last_ = alg_.decide(ctx);
    } catch (const HiddenWeightError& e) {
      throw ContractViolation("algorithm '" + alg_.name() + "' read a hidden weight",
                              {"step " + std::to_string(revealed_.size()) + ": " + e.what()});
    }
    double us = 0.0;
    if (opts_.record_timing) {
      us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    }
    if (std::find(moves_.begin(), moves_.end(), last_) == moves_.end()) {
      throw ContractViolation(
          "algorithm '" + alg_.name() + "' returned an illegal move",
          {"step " + std::to_string(revealed_.size()) + ": agent " + std::to_string(arriving) +
           " move " + to_string(last_) + " not in the " + to_string(mode_) + " move set of " +
           partition_.str()});
    }
    welfare_ += move_welfare_delta(game, partition_, arriving, last_);
    apply_move(partition_, arriving, last_);
    if (opts_.record_steps) {
      TraceStep s{revealed_.size(), arriving, last_, welfare_, std::nullopt, us};
      if (opts_.record_snapshots) s.snapshot = partition_;
      trace_.steps.push_back(std::move(s));
    }
    return last_;
  }

  const Partition& partition() const { return partition_; }
  const Weight& welfare() const { return welfare_; }
  std::size_t arrived() const { return revealed_.size(); }

  RunTrace finish() {
    trace_.final_partition = partition_;
    trace_.final_welfare = welfare_;
    return std::move(trace_);
  }

 private:
  OnlineAlgorithm& alg_;
  Mode mode_;
  std::size_t n_;
  RunOptions opts_;
  std::vector<AgentId> revealed_;
  std::vector<char> mask_;
  Partition partition_;
  Weight welfare_;
  std::vector<Move> moves_;
  Move last_;
  RunTrace trace_;
};

inline RunTrace run_online(const Game& game, const ArrivalOrder& order, OnlineAlgorithm& alg,
                           Mode mode, RunOptions opts = {}) {
  if (order.size() != game.size()) {
    throw PreconditionError("arrival order covers " + std::to_string(order.size()) +
                            " agents but the game has " + std::to_string(game.size()));
  }
  OnlineStepper stepper(alg, mode, game.size(), opts);
  for (std::size_t k = 0; k < order.size(); ++k) stepper.step(game, order[k]);
  return stepper.finish();
}

inline RunTrace run_online(const Game& game, const ArrivalOrder& order,
                           const AlgorithmFactory& make, Mode mode, RunOptions opts = {}) {
  auto alg = make();
  return run_online(game, order, *alg, mode, opts);
}

struct FinalOutcome {
  Partition partition;
  Weight welfare;
};

// Lean variant for estimators: no per-step records.
inline FinalOutcome run_final(const Game& game, const ArrivalOrder& order,
                              const AlgorithmFactory& make, Mode mode) {
  RunTrace t = run_online(game, order, make, mode, {false, false, false});
  return {std::move(t.final_partition), std::move(t.final_welfare)};
}

struct TraceValidation {
  bool ok = true;
  std::vector<std::string> violations;
};

inline TraceValidation validate_trace(const Game& game, const ArrivalOrder& order,
                                      const RunTrace& trace, Mode mode) {
  TraceValidation v;
  auto flag = [&](std::string msg) {
    v.ok = false;
    v.violations.push_back(std::move(msg));
  };
  if (trace.mode != mode) flag("trace mode differs from declared mode");
  if (trace.steps.size() != order.size()) {
    flag("trace has " + std::to_string(trace.steps.size()) + " steps, order has " +
         std::to_string(order.size()));
  }
  Partition pi;
  const std::size_t steps = std::min(trace.steps.size(), order.size());
  for (std::size_t k = 0; k < steps; ++k) {
    const TraceStep& s = trace.steps[k];
    const std::string at = "step " + std::to_string(k + 1) + ": ";
    if (s.step != k + 1) flag(at + "step index " + std::to_string(s.step));
    if (s.agent != order[k]) {
      flag(at + "agent " + std::to_string(s.agent) + " but order says " + std::to_string(order[k]));
      return v;
    }
    if (s.agent >= game.size() || pi.contains(s.agent)) {
      flag(at + "agent " + std::to_string(s.agent) + " cannot arrive");
      return v;
    }
    const auto moves = legal_moves(pi, s.agent, mode);
    if (std::find(moves.begin(), moves.end(), s.move) == moves.end()) {
      flag(at + "move " + to_string(s.move) + " is not legal in " + to_string(mode) + " mode");
      return v;
    }
    const Partition before = pi;
    apply_move(pi, s.agent, s.move);
    if (s.snapshot && !(*s.snapshot == pi)) {
      flag(at + "snapshot " + s.snapshot->str() + " differs from replay " + pi.str());
    }
    if (mode == Mode::kStandard) {
      std::vector<AgentId> prev = before.agents();
      if (!(restrict_partition(pi, prev) == before)) flag(at + "standard step changed old coalitions");
    }
    const Weight sw = social_welfare(game, pi);
    if (!(sw == s.welfare)) {
      flag(at + "welfare " + s.welfare.str() + " but recomputed " + sw.str());
    }
  }
  if (v.ok) {
    if (!(trace.final_partition == pi)) flag("final partition differs from replay");
    if (!(trace.final_welfare == social_welfare(game, pi))) flag("final welfare differs");
  }
  return v;
}

// One JSON object per line: {"step","agent","move","sw"}.
inline void write_trace_jsonl(std::ostream& os, const RunTrace& trace) {
  for (const auto& s : trace.steps) {
    nlohmann::json line = {{"step", s.step},
                           {"agent", s.agent},
                           {"move", move_to_json(s.move)},
                           {"sw", s.welfare.str()}};
    os << line.dump() << '\n';
  }
}

inline RunTrace read_trace_jsonl(std::istream& is, Mode mode) {
  RunTrace t;
  t.mode = mode;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      TraceStep s;
      s.step = j.at("step").get<std::size_t>();
      s.agent = j.at("agent").get<AgentId>();
      s.move = move_from_json(j.at("move"));
      s.welfare = Weight::parse(j.at("sw").get<std::string>());
      t.steps.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

// Rebuilds partitions from the recorded moves; recorded welfare values are kept for validation.
inline RunTrace replay_trace(const Game& game, const RunTrace& recorded, Mode mode) {
  RunTrace t = recorded;
  t.mode = mode;
  Partition pi;
  for (auto& s : t.steps) {
    if (s.agent >= game.size() || pi.contains(s.agent)) break;
    const auto moves = legal_moves(pi, s.agent, mode);
    if (std::find(moves.begin(), moves.end(), s.move) == moves.end()) break;
    apply_move(pi, s.agent, s.move);
    s.snapshot = pi;
  }
  t.final_partition = pi;
  t.final_welfare = social_welfare(game, pi);
  return t;
}

inline ArrivalOrder order_of_trace(const RunTrace& t, std::size_t n) {
  std::vector<AgentId> seq;
  for (const auto& s : t.steps) seq.push_back(s.agent);
  if (seq.size() != n) {
    throw PreconditionError("trace lists " + std::to_string(seq.size()) + " arrivals, game has " +
                            std::to_string(n));
  }
  return ArrivalOrder(std::move(seq));
}

namespace detail {

class MatchingGuard final : public OnlineAlgorithm {
 public:
  explicit MatchingGuard(std::unique_ptr<OnlineAlgorithm> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "guard:" + inner_->name(); }
  bool knows_n() const override { return inner_->knows_n(); }
  void start(std::size_t n) override { inner_->start(n); }
  Move decide(const StepContext& ctx) override {
    if (tripped_) return Move::singleton();
    Move m = inner_->decide(ctx);
    if (m.kind == Move::Kind::kJoin && ctx.partition.coalition_of(m.anchor).size() >= 2) {
      tripped_ = true;
      return Move::singleton();
    }
    return m;
  }

 private:
  std::unique_ptr<OnlineAlgorithm> inner_;
  bool tripped_ = false;
};

}  // namespace detail

// Mirrors `inner` until it would build a coalition of three or more agents, then
// places every later arrival alone.
inline AlgorithmFactory matching_guard(AlgorithmFactory inner) {
  return [inner = std::move(inner)]() -> std::unique_ptr<OnlineAlgorithm> {
    return std::make_unique<detail::MatchingGuard>(inner());
  };
}

}  // namespace ocf
