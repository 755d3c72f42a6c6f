#pragma once

#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ocf/engine.hpp"

namespace ocf {

namespace detail {

// Tie-break key: Join < DissolveAndPair, then smaller anchor, then smaller partner.
inline std::tuple<int, AgentId, AgentId> move_rank(const Move& m) {
  const int cls = m.kind == Move::Kind::kJoin ? 0 : (m.kind == Move::Kind::kDissolveAndPair ? 1 : 2);
  return {cls, m.anchor, m.partner};
}

// Greedy selection: the admissible move with the largest strictly positive gain, else NewSingleton.
// `gain` returns std::nullopt for moves that must not be considered.
template <typename GainFn>
Move pick_best(std::span<const Move> moves, GainFn&& gain) {
  std::optional<Move> best;
  Weight best_gain;
  for (const Move& m : moves) {
    if (m.kind == Move::Kind::kNewSingleton) continue;
    std::optional<Weight> g = gain(m);
    if (!g || !g->is_positive()) continue;
    if (!best || *g > best_gain || (*g == best_gain && move_rank(m) < move_rank(*best))) {
      best = m;
      best_gain = std::move(*g);
    }
  }
  return best ? *best : Move::singleton();
}

// Per-decision cache of coalition welfare, indexed by coalition position.
class WelfareCache {
 public:
  WelfareCache(const RevealedGame& g, const Partition& pi) : g_(g), pi_(pi), cache_(pi.size()) {}
  const Weight& of(AgentId anchor) {
    const std::size_t idx = pi_.index_of(anchor);
    if (!cache_[idx]) cache_[idx] = coalition_welfare(g_, pi_.coalitions()[idx]);
    return *cache_[idx];
  }

 private:
  const RevealedGame& g_;
  const Partition& pi_;
  std::vector<std::optional<Weight>> cache_;
};

inline Weight join_gain(const RevealedGame& g, const Partition& pi, AgentId i, AgentId anchor) {
  Weight s;
  for (AgentId j : pi.coalition_of(anchor)) s += g.weight(i, j);
  return s.mul_pow2(1);
}

inline Move greedy_step(const StepContext& ctx, bool allow_dissolve, bool matching_only) {
  WelfareCache cache(ctx.game, ctx.partition);
  return pick_best(ctx.moves, [&](const Move& m) -> std::optional<Weight> {
    if (m.kind == Move::Kind::kJoin) {
      if (matching_only && ctx.partition.coalition_of(m.anchor).size() != 1) return std::nullopt;
      return join_gain(ctx.game, ctx.partition, ctx.arriving, m.anchor);
    }
    if (!allow_dissolve) return std::nullopt;
    Weight g = ctx.game.weight(ctx.arriving, m.partner);
    g.mul_pow2(1);
    g -= cache.of(m.anchor);
    return g;
  });
}

inline void require_even_horizon(const std::string& who, std::size_t n) {
  if (n == 0 || n % 2 != 0) {
    throw PreconditionError(who + " needs an even number of agents, got " + std::to_string(n));
  }
}

}  // namespace detail

struct GdyOptions {
  bool standard_moves_only = false;  // ignore DissolveAndPair even in dissolution mode
  bool matching_domain = false;      // only consider moves whose result is a matching
};

class Gdy final : public OnlineAlgorithm {
 public:
  explicit Gdy(GdyOptions opts = {}) : opts_(opts) {}
  std::string name() const override {
    if (opts_.matching_domain) return "gdy-m";
    return opts_.standard_moves_only ? "gdy-std" : "gdy";
  }
  Move decide(const StepContext& ctx) override {
    return detail::greedy_step(ctx, !opts_.standard_moves_only, opts_.matching_domain);
  }

 private:
  GdyOptions opts_;
};

class Gma final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "gma"; }
  bool knows_n() const override { return true; }
  void start(std::size_t n) override {
    detail::require_even_horizon("gma", n);
    half_ = n / 2;
  }
  Move decide(const StepContext& ctx) override {
    if (half_ == 0) throw PreconditionError("gma used without a known horizon");
    if (ctx.step <= half_ || ctx.step > 2 * half_) return Move::singleton();
    const AgentId partner = ctx.game.revealed()[ctx.step - half_ - 1];
    if (!ctx.game.weight(ctx.arriving, partner).is_positive()) return Move::singleton();
    return Move::join(ctx.partition.coalition_of(partner).front());
  }

 private:
  std::size_t half_ = 0;
};

class Wgdy final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "wgdy"; }
  bool knows_n() const override { return true; }
  void start(std::size_t n) override {
    detail::require_even_horizon("wgdy", n);
    half_ = n / 2;
  }
  Move decide(const StepContext& ctx) override {
    if (half_ == 0) throw PreconditionError("wgdy used without a known horizon");
    if (ctx.step <= half_) return Move::singleton();
    return detail::greedy_step(ctx, false, false);
  }

 private:
  std::size_t half_ = 0;
};

class Singletons final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "singletons"; }
  Move decide(const StepContext&) override { return Move::singleton(); }
};

// Runs a fresh known-horizon algorithm on each phase; phase i covers 2^{i+1} arrivals.
class IteratedDoubling final : public OnlineAlgorithm {
 public:
  IteratedDoubling(AlgorithmFactory inner, std::string name)
      : make_(std::move(inner)), name_(std::move(name)) {}
  std::string name() const override { return name_; }

  Move decide(const StepContext& ctx) override {
    if (!inner_ || consumed_ == horizon_) open_next_phase();
    ++consumed_;
    phase_agents_.push_back(ctx.arriving);
    if (ctx.arriving >= phase_mask_.size()) phase_mask_.resize(ctx.arriving + 1, 0);
    phase_mask_[ctx.arriving] = 1;

    std::vector<Move> moves;
    for (const Move& m : ctx.moves) {
      if (m.kind == Move::Kind::kNewSingleton || phase_partition_.contains(m.anchor)) {
        moves.push_back(m);
      }
    }
    RevealedGame view = ctx.game.restrict_to(phase_agents_, phase_mask_);
    StepContext inner_ctx{view, phase_partition_, ctx.arriving, moves, consumed_, ctx.mode};
    Move m = inner_->decide(inner_ctx);
    if (std::find(moves.begin(), moves.end(), m) == moves.end()) {
      throw ContractViolation("inner algorithm of " + name_ + " left its phase",
                              {"phase " + std::to_string(phase_) + ": move " + to_string(m)});
    }
    apply_move(phase_partition_, ctx.arriving, m);
    return m;
  }

  std::size_t phase() const { return phase_; }

 private:
  void open_next_phase() {
    if (inner_) ++phase_;
    horizon_ = std::size_t{2} << phase_;
    consumed_ = 0;
    inner_ = make_();
    inner_->start(horizon_);
    phase_agents_.clear();
    std::fill(phase_mask_.begin(), phase_mask_.end(), 0);
    phase_partition_ = Partition();
  }

  AlgorithmFactory make_;
  std::string name_;
  std::unique_ptr<OnlineAlgorithm> inner_;
  std::size_t phase_ = 0;
  std::size_t horizon_ = 0;
  std::size_t consumed_ = 0;
  std::vector<AgentId> phase_agents_;
  std::vector<char> phase_mask_;
  Partition phase_partition_;
};

struct DtaThreshold {
  Weight t;
  explicit DtaThreshold(Weight value) : t(std::move(value)) {
    if (t < Weight(1)) throw PreconditionError("dta threshold must be at least 1, got " + t.str());
  }
};

// Smallest p/10^30 that is >= 1 + sqrt(2)/2.
inline Weight dta_default_threshold() {
  mpz_class scale, radicand, root;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 30);
  mpz_ui_pow_ui(radicand.get_mpz_t(), 10, 59);
  radicand *= 5;  // (sqrt(2)/2 * 10^30)^2 = 5 * 10^59
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  return Weight(scale + root + 1, scale);
}

// Matching algorithm: pair with a singleton, or break {j,l} for {i,j} when w(i,j) >= t w(j,l).
class Dta final : public OnlineAlgorithm {
 public:
  explicit Dta(DtaThreshold t, std::string name) : t_(std::move(t.t)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Move decide(const StepContext& ctx) override {
    return detail::pick_best(ctx.moves, [&](const Move& m) -> std::optional<Weight> {
      const Coalition& c = ctx.partition.coalition_of(m.anchor);
      if (m.kind == Move::Kind::kJoin) {
        if (c.size() != 1) return std::nullopt;
        return ctx.game.weight(ctx.arriving, c[0]);
      }
      if (c.size() != 2) return std::nullopt;
      const AgentId other = c[0] == m.partner ? c[1] : c[0];
      const Weight& fresh = ctx.game.weight(ctx.arriving, m.partner);
      const Weight& old = ctx.game.weight(m.partner, other);
      if (fresh < t_ * old) return std::nullopt;
      return fresh - old;
    });
  }
  const Weight& threshold() const { return t_; }

 private:
  Weight t_;
  std::string name_;
};

struct OddsPlan {
  std::size_t n = 0;
  std::size_t s = 0;

  // Probability that the odds rule stops on the last success when event k has probability 2/k.
  Weight success_probability() const {
    if (s == 2) return Weight(1);
    Weight prod(1), odds;
    for (std::size_t k = s; k <= n; ++k) {
      prod *= Weight(static_cast<long>(k - 2), static_cast<long>(k));
      odds += Weight(2, static_cast<long>(k - 2));
    }
    return prod * odds;
  }
};

inline OddsPlan odds_stopping_time(std::size_t n) {
  if (n < 2) throw PreconditionError("odds_stopping_time needs n >= 2, got " + std::to_string(n));
  Weight sum;
  for (std::size_t k = n; k >= 3; --k) {
    sum += Weight(2, static_cast<long>(k - 2));  // r_k = (2/k) / (1 - 2/k)
    if (sum >= Weight(1)) return {n, k};
  }
  return {n, 2};
}

class Maxe final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "maxe"; }
  bool knows_n() const override { return true; }
  void start(std::size_t n) override {
    // A lone agent has nobody to match with.
    plan_ = n >= 2 ? odds_stopping_time(n) : OddsPlan{n, n + 1};
  }
  Move decide(const StepContext& ctx) override {
    if (plan_.n == 0) throw PreconditionError("maxe used without a known horizon");
    std::optional<Weight> top;
    AgentId partner = 0;
    for (AgentId j : ctx.game.revealed()) {
      if (j == ctx.arriving) continue;
      const Weight& w = ctx.game.weight(ctx.arriving, j);
      if (!top || w > *top || (w == *top && j < partner)) {
        top = w;
        partner = j;
      }
    }
    if (!top) return Move::singleton();
    const bool record = !seen_ || *top > *seen_;
    if (record) seen_ = *top;
    if (!matched_ && ctx.step >= plan_.s && record && top->is_positive()) {
      matched_ = true;
      return Move::join(ctx.partition.coalition_of(partner).front());
    }
    return Move::singleton();
  }
  const OddsPlan& plan() const { return plan_; }

 private:
  OddsPlan plan_;
  std::optional<Weight> seen_;
  bool matched_ = false;
};

inline AlgorithmFactory gdy(GdyOptions opts = {}) {
  return [opts] { return std::make_unique<Gdy>(opts); };
}
inline AlgorithmFactory gma() {
  return [] { return std::make_unique<Gma>(); };
}
inline AlgorithmFactory wgdy() {
  return [] { return std::make_unique<Wgdy>(); };
}
inline AlgorithmFactory singletons() {
  return [] { return std::make_unique<Singletons>(); };
}
inline AlgorithmFactory iterated_doubling(AlgorithmFactory inner, std::string name = "") {
  if (name.empty()) name = "i:" + inner()->name();
  return [inner = std::move(inner), name] {
    return std::make_unique<IteratedDoubling>(inner, name);
  };
}
inline AlgorithmFactory iwa() { return iterated_doubling(wgdy(), "iwa"); }
inline AlgorithmFactory dta(const DtaThreshold& t) {
  const std::string name = "dta:" + t.t.str();
  return [t, name] { return std::make_unique<Dta>(t, name); };
}
inline AlgorithmFactory dta_default() {
  return [] { return std::make_unique<Dta>(DtaThreshold(dta_default_threshold()), "dta"); };
}
inline AlgorithmFactory maxe() {
  return [] { return std::make_unique<Maxe>(); };
}
inline AlgorithmFactory i_maxe() { return iterated_doubling(maxe(), "i-maxe"); }

// Lowers tied weights by tiny offsets so all pair weights become distinct.
inline Game perturb_distinct(const Game& g) {
  const std::size_t n = g.size();
  std::vector<Weight> values;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) values.push_back(g.at(i, j));
  }
  std::vector<Weight> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Weight eps(1);
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    Weight gap = sorted[k] - sorted[k - 1];
    if (k == 1 || gap < eps) eps = gap;
  }
  if (sorted.size() > 1) eps /= Weight(2);
  const long steps = static_cast<long>(n * n);
  const Weight unit = eps / Weight(steps == 0 ? 1 : steps);

  GameBuilder b(n);
  std::vector<Weight> assigned;
  assigned.reserve(values.size());
  std::size_t idx = 0;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j, ++idx) {
      Weight w = values[idx];
      for (long k = 0; k <= steps; ++k) {
        const Weight cand = w - unit * Weight(k);
        if (std::find(assigned.begin(), assigned.end(), cand) == assigned.end()) {
          w = cand;
          break;
        }
      }
      assigned.push_back(w);
      b.set(i, j, w);
    }
  }
  Game out = b.build();
  out.set_labels(g.labels());
  return out;
}

// Registry names: gdy, gdy-std, gdy-m, gma, wgdy, iwa, dta, dta:<t>, maxe, i-maxe,
// singletons, guard:<name>, i:<name>.
inline AlgorithmFactory make_algorithm(std::string_view name) {
  if (name == "gdy") return gdy();
  if (name == "gdy-std") return gdy({true, false});
  if (name == "gdy-m") return gdy({false, true});
  if (name == "gma") return gma();
  if (name == "wgdy") return wgdy();
  if (name == "iwa") return iwa();
  if (name == "dta") return dta_default();
  if (name == "maxe") return maxe();
  if (name == "i-maxe") return i_maxe();
  if (name == "singletons") return singletons();
  if (name.starts_with("dta:")) return dta(DtaThreshold(Weight::parse(name.substr(4))));
  if (name.starts_with("guard:")) return matching_guard(make_algorithm(name.substr(6)));
  if (name.starts_with("i:")) {
    return iterated_doubling(make_algorithm(name.substr(2)), std::string(name));
  }
  throw ParseError("unknown algorithm '" + std::string(name) +
                   "' (known: gdy, gdy-std, gdy-m, gma, wgdy, iwa, dta, dta:<t>, maxe, i-maxe, "
                   "singletons, guard:<name>, i:<name>)");
}

}  // namespace ocf
