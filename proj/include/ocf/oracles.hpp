#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ocf/engine.hpp"
#include "ocf/random.hpp"

namespace ocf {

struct OracleLimits {
  static constexpr std::size_t kPartitionCap = 15;
  static constexpr std::size_t kMatchingCap = 26;
  static constexpr std::size_t kOrderCap = 11;

  std::size_t partition_n = 13;
  std::size_t matching_n = 24;
  std::size_t order_n = 9;

  void check() const {
    if (partition_n > kPartitionCap || matching_n > kMatchingCap || order_n > kOrderCap) {
      throw PreconditionError("oracle limits exceed hard caps (partition " +
                              std::to_string(kPartitionCap) + ", matching " +
                              std::to_string(kMatchingCap) + ", orders " +
                              std::to_string(kOrderCap) + ")");
    }
  }
};

struct RatioEstimate {
  double point = 0.0;
  std::optional<Weight> exact;  // present iff obtained by full enumeration or a single exact run
  std::size_t trials = 0;
  double half_width = 0.0;  // 95% normal-approximation half-width
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

// All pair weights times a common denominator, when that fits comfortably in int64.
inline std::optional<std::vector<std::int64_t>> scaled_weights(const Game& g) {
  const std::size_t n = g.size();
  mpz_class lcm = 1;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), g.at(i, j).raw().get_den_mpz_t());
    }
  }
  std::vector<std::int64_t> out(n * n, 0);
  mpz_class total = 0;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) {
      const mpq_class& q = g.at(i, j).raw();
      mpz_class v = q.get_num() * (lcm / q.get_den());
      total += abs(v);
      if (!mpz_fits_slong_p(v.get_mpz_t())) return std::nullopt;
      out[i * n + j] = out[j * n + i] = v.get_si();
    }
  }
  // Room for doubling every edge and the bound arithmetic.
  if (cmp(total, mpz_class(1) << 60) >= 0) return std::nullopt;
  return out;
}

template <typename Num, typename WeightFn>
class PartitionSearch {
 public:
  PartitionSearch(std::size_t n, WeightFn w) : n_(n), w_(std::move(w)) {
    // rest_[i]: sum of positive weights on pairs whose larger endpoint is >= i.
    rest_.assign(n + 1, Num{});
    for (std::size_t v = n; v-- > 0;) {
      rest_[v] = rest_[v + 1];
      for (std::size_t u = 0; u < v; ++u) {
        Num x = w_(static_cast<AgentId>(u), static_cast<AgentId>(v));
        if (x > Num{}) rest_[v] += x;
      }
    }
    blocks_.reserve(n);
    assign_.assign(n, 0);
  }

  void run() { dfs(0, Num{}); }
  const std::vector<std::size_t>& best_assignment() const { return best_assign_; }
  const Num& best() const { return best_; }

 private:
  void dfs(std::size_t i, const Num& cur) {
    if (i == n_) {
      if (!have_ || cur > best_) {
        have_ = true;
        best_ = cur;
        best_assign_ = assign_;
      }
      return;
    }
    if (have_) {
      Num bound = rest_[i];
      bound += rest_[i];
      bound += cur;
      if (!(bound > best_)) return;
    }
    const std::size_t open = blocks_.size();
    for (std::size_t b = 0; b <= open; ++b) {
      Num next = cur;
      if (b < open) {
        Num gain{};
        for (AgentId m : blocks_[b]) gain += w_(m, static_cast<AgentId>(i));
        next += gain;
        next += gain;
        blocks_[b].push_back(static_cast<AgentId>(i));
      } else {
        blocks_.push_back({static_cast<AgentId>(i)});
      }
      assign_[i] = b;
      dfs(i + 1, next);
      if (b < open) {
        blocks_[b].pop_back();
      } else {
        blocks_.pop_back();
      }
    }
  }

  std::size_t n_;
  WeightFn w_;
  std::vector<Num> rest_;
  std::vector<std::vector<AgentId>> blocks_;
  std::vector<std::size_t> assign_;
  std::vector<std::size_t> best_assign_;
  Num best_{};
  bool have_ = false;
};

inline Partition partition_from_assignment(const std::vector<std::size_t>& assign) {
  std::vector<Coalition> blocks;
  for (std::size_t a = 0; a < assign.size(); ++a) {
    if (assign[a] >= blocks.size()) blocks.resize(assign[a] + 1);
    blocks[assign[a]].push_back(static_cast<AgentId>(a));
  }
  return Partition::from_coalitions(std::move(blocks));
}

}  // namespace detail

struct OptimalPartition {
  Partition partition;
  Weight welfare;
};

// Exhaustive search over set partitions in restricted-growth order; the first maximizer wins.
inline OptimalPartition optimal_partition(const Game& g, const OracleLimits& limits = {}) {
  limits.check();
  const std::size_t n = g.size();
  if (n > limits.partition_n) {
    throw CapacityError("optimal_partition handles n <= " + std::to_string(limits.partition_n) +
                        " (got n=" + std::to_string(n) +
                        "); use the bound SW(opt) <= 2*positive_edge_sum instead");
  }
  if (n == 0) return {Partition(), Weight()};
  std::vector<std::size_t> assign;
  if (auto scaled = detail::scaled_weights(g)) {
    const auto& s = *scaled;
    auto w = [&s, n](AgentId a, AgentId b) { return s[a * n + b]; };
    detail::PartitionSearch<std::int64_t, decltype(w)> search(n, w);
    search.run();
    assign = search.best_assignment();
  } else {
    auto w = [&g](AgentId a, AgentId b) -> const Weight& { return g.at(a, b); };
    detail::PartitionSearch<Weight, decltype(w)> search(n, w);
    search.run();
    assign = search.best_assignment();
  }
  Partition p = detail::partition_from_assignment(assign);
  Weight sw = social_welfare(g, p);
  return {std::move(p), std::move(sw)};
}

struct MaxMatching {
  MatchingView matching;
  Weight weight;
};

inline MaxMatching max_weight_matching(const Game& g, const OracleLimits& limits = {}) {
  limits.check();
  const std::size_t n = g.size();
  if (n > limits.matching_n) {
    throw CapacityError("max_weight_matching handles n <= " + std::to_string(limits.matching_n) +
                        " (got n=" + std::to_string(n) + ")");
  }
  // Only agents with a positive edge can ever be matched.
  std::vector<AgentId> live;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = 0; j < n; ++j) {
      if (i != j && g.at(i, j).is_positive()) {
        live.push_back(i);
        break;
      }
    }
  }
  const std::size_t m = live.size();
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      if (x != y && g.at(live[x], live[y]).is_positive()) adj[x].push_back(y);
    }
  }
  std::vector<std::pair<AgentId, AgentId>> pairs;
  const std::uint32_t full = m == 32 ? 0xffffffffu : ((std::uint32_t{1} << m) - 1);

  auto reconstruct = [&](auto&& value_of, auto&& weight_of) {
    std::uint32_t mask = full;
    while (mask) {
      const std::size_t i = static_cast<std::size_t>(__builtin_ctz(mask));
      const std::uint32_t rest = mask & ~(std::uint32_t{1} << i);
      if (value_of(rest) == value_of(mask)) {
        mask = rest;
        continue;
      }
      for (std::size_t j : adj[i]) {
        if (!(rest >> j & 1u)) continue;
        const std::uint32_t sub = rest & ~(std::uint32_t{1} << j);
        auto cand = value_of(sub);
        cand += weight_of(i, j);
        if (cand == value_of(mask)) {
          pairs.emplace_back(live[i], live[j]);
          mask = sub;
          break;
        }
      }
    }
  };

  auto scaled = m <= 24 ? detail::scaled_weights(g) : std::nullopt;
  if (scaled) {
    const auto& s = *scaled;
    std::vector<std::int64_t> dp(std::size_t{1} << m, 0);
    for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
      const std::size_t i = static_cast<std::size_t>(__builtin_ctz(mask));
      const std::uint32_t rest = mask & ~(std::uint32_t{1} << i);
      std::int64_t best = dp[rest];
      for (std::size_t j : adj[i]) {
        if (rest >> j & 1u) {
          best = std::max(best, dp[rest & ~(std::uint32_t{1} << j)] + s[live[i] * n + live[j]]);
        }
      }
      dp[mask] = best;
      if (mask == full) break;
    }
    reconstruct([&](std::uint32_t k) { return dp[k]; },
                [&](std::size_t i, std::size_t j) { return s[live[i] * n + live[j]]; });
  } else {
    // Memoized over reachable masks; cheap on sparse positive graphs.
    std::unordered_map<std::uint32_t, Weight> memo;
    std::function<const Weight&(std::uint32_t)> solve = [&](std::uint32_t mask) -> const Weight& {
      auto it = memo.find(mask);
      if (it != memo.end()) return it->second;
      Weight best;
      if (mask) {
        const std::size_t i = static_cast<std::size_t>(__builtin_ctz(mask));
        const std::uint32_t rest = mask & ~(std::uint32_t{1} << i);
        best = solve(rest);
        for (std::size_t j : adj[i]) {
          if (rest >> j & 1u) {
            Weight cand = solve(rest & ~(std::uint32_t{1} << j));
            cand += g.at(live[i], live[j]);
            if (cand > best) best = std::move(cand);
          }
        }
      }
      return memo.emplace(mask, std::move(best)).first->second;
    };
    solve(full);
    reconstruct([&](std::uint32_t k) { return solve(k); },
                [&](std::size_t i, std::size_t j) { return g.at(live[i], live[j]); });
  }

  std::vector<Coalition> cs;
  std::vector<char> used(n, 0);
  for (auto [a, b] : pairs) {
    cs.push_back({std::min(a, b), std::max(a, b)});
    used[a] = used[b] = 1;
  }
  for (AgentId a = 0; a < n; ++a) {
    if (!used[a]) cs.push_back({a});
  }
  MatchingView mv(Partition::from_coalitions(std::move(cs)));
  Weight w = matching_weight(g, mv);
  return {std::move(mv), std::move(w)};
}

// w(max matching) >= w(E+)/n.
inline bool check_avgmat_bound(const Game& g, const OracleLimits& limits = {}) {
  if (g.size() == 0) return true;
  const Weight lhs = max_weight_matching(g, limits).weight;
  return lhs * Weight(static_cast<long>(g.size())) >= positive_edge_sum(g);
}

inline Weight factorial(std::size_t n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Weight(f);
}

// Folds `visit(acc, order)` over all n! orders, split by first arrival; partial
// accumulators are merged in first-arrival order, so results do not depend on `jobs`.
template <typename Acc, typename Visit, typename Merge>
Acc fold_orders(std::size_t n, std::size_t jobs, Acc init, Visit&& visit, Merge&& merge) {
  if (n == 0) {
    visit(init, ArrivalOrder());
    return init;
  }
  std::vector<Acc> parts(n, init);
  parallel_for(n, jobs, [&](std::size_t first) {
    std::vector<AgentId> tail;
    for (AgentId a = 0; a < n; ++a) {
      if (a != first) tail.push_back(a);
    }
    std::vector<AgentId> seq(n);
    seq[0] = static_cast<AgentId>(first);
    do {
      std::copy(tail.begin(), tail.end(), seq.begin() + 1);
      visit(parts[first], ArrivalOrder(seq));
    } while (std::next_permutation(tail.begin(), tail.end()));
  });
  Acc out = std::move(parts[0]);
  for (std::size_t k = 1; k < n; ++k) merge(out, std::move(parts[k]));
  return out;
}

inline void require_order_capacity(std::size_t n, const OracleLimits& limits) {
  limits.check();
  if (n > limits.order_n) {
    throw CapacityError("exact enumeration over arrival orders handles n <= " +
                        std::to_string(limits.order_n) + " (got n=" + std::to_string(n) +
                        "); use Monte Carlo instead");
  }
}

inline Weight exact_expected_welfare(const Game& g, const AlgorithmFactory& make, Mode mode,
                                     const OracleLimits& limits = {}, std::size_t jobs = 1) {
  require_order_capacity(g.size(), limits);
  Weight total = fold_orders(
      g.size(), jobs, Weight(),
      [&](Weight& acc, const ArrivalOrder& o) { acc += run_final(g, o, make, mode).welfare; },
      [](Weight& a, Weight&& b) { a += b; });
  return total / factorial(g.size());
}

using OutcomePredicate = std::function<bool(const FinalOutcome&)>;

inline Weight exact_event_probability(const Game& g, const AlgorithmFactory& make, Mode mode,
                                      const OutcomePredicate& event,
                                      const OracleLimits& limits = {}, std::size_t jobs = 1) {
  require_order_capacity(g.size(), limits);
  const std::uint64_t hits = fold_orders(
      g.size(), jobs, std::uint64_t{0},
      [&](std::uint64_t& acc, const ArrivalOrder& o) { acc += event(run_final(g, o, make, mode)); },
      [](std::uint64_t& a, std::uint64_t&& b) { a += b; });
  return Weight(static_cast<unsigned long>(hits)) / factorial(g.size());
}

inline ArrivalOrder random_order(std::size_t n, Rng& rng) {
  std::vector<AgentId> seq(n);
  for (std::size_t k = 0; k < n; ++k) seq[k] = static_cast<AgentId>(k);
  rng.shuffle(seq);
  return ArrivalOrder(std::move(seq));
}

inline ArrivalOrder trial_order(std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  Rng rng(seed ^ trial);
  return random_order(n, rng);
}

using OutcomeValue = std::function<double(const FinalOutcome&)>;

// Mean of value(outcome) over uniformly random orders. Trial t draws its order from seed ^ t.
inline RatioEstimate mc_estimate(const Game& g, const AlgorithmFactory& make, Mode mode,
                                 std::size_t trials, std::uint64_t seed, const OutcomeValue& value,
                                 std::size_t jobs = 1) {
  if (trials == 0) throw PreconditionError("Monte Carlo needs at least one trial");
  std::vector<double> samples(trials);
  const std::size_t chunks = std::min<std::size_t>(trials, std::max<std::size_t>(jobs, 1) * 8);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    for (std::size_t t = c; t < trials; t += chunks) {
      samples[t] = value(run_final(g, trial_order(g.size(), seed, t), make, mode));
    }
  });
  // Welford, in trial order.
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double x : samples) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  RatioEstimate r;
  r.point = mean;
  r.trials = trials;
  r.seed = seed;
  const double var = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
  r.std_error = std::sqrt(var / static_cast<double>(trials));
  r.half_width = 1.959963984540054 * r.std_error;
  return r;
}

inline RatioEstimate mc_expected_welfare(const Game& g, const AlgorithmFactory& make, Mode mode,
                                         std::size_t trials, std::uint64_t seed,
                                         std::size_t jobs = 1) {
  return mc_estimate(
      g, make, mode, trials, seed, [](const FinalOutcome& o) { return o.welfare.to_double(); },
      jobs);
}

inline RatioEstimate mc_event_frequency(const Game& g, const AlgorithmFactory& make, Mode mode,
                                        const OutcomePredicate& event, std::size_t trials,
                                        std::uint64_t seed, std::size_t jobs = 1) {
  return mc_estimate(
      g, make, mode, trials, seed, [&](const FinalOutcome& o) { return event(o) ? 1.0 : 0.0; },
      jobs);
}

// Ratio with the conventions 0/0 = 1 and x/0 = 0 for x < 0.
inline Weight welfare_ratio(const Weight& alg, const Weight& opt) {
  if (opt.is_zero()) return alg.is_negative() ? Weight(0) : Weight(1);
  return alg / opt;
}

enum class Arrival { kWorst, kRandom, kFixed };
enum class Benchmark { kPartition, kMatching };

struct RatioBudget {
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  bool prefer_exact = true;  // enumerate orders when n fits
  std::size_t jobs = 1;
  std::optional<ArrivalOrder> fixed_order;
  OracleLimits limits;
};

inline Weight benchmark_welfare(const Game& g, Benchmark b, const OracleLimits& limits = {}) {
  if (b == Benchmark::kMatching) return max_weight_matching(g, limits).weight.mul_pow2(1);
  return optimal_partition(g, limits).welfare;
}

inline RatioEstimate competitive_ratio(const Game& g, const AlgorithmFactory& make, Mode mode,
                                       Arrival arrival, const RatioBudget& budget = {},
                                       Benchmark bench = Benchmark::kPartition) {
  const Weight opt = benchmark_welfare(g, bench, budget.limits);
  RatioEstimate r;
  r.seed = budget.seed;
  auto exact_result = [&](Weight ratio, std::size_t count) {
    r.point = ratio.to_double();
    r.exact = std::move(ratio);
    r.trials = count;
    return r;
  };
  switch (arrival) {
    case Arrival::kFixed: {
      const ArrivalOrder order =
          budget.fixed_order ? *budget.fixed_order : ArrivalOrder::identity(g.size());
      return exact_result(welfare_ratio(run_final(g, order, make, mode).welfare, opt), 1);
    }
    case Arrival::kWorst: {
      require_order_capacity(g.size(), budget.limits);
      std::optional<Weight> worst = fold_orders(
          g.size(), budget.jobs, std::optional<Weight>(),
          [&](std::optional<Weight>& acc, const ArrivalOrder& o) {
            Weight x = run_final(g, o, make, mode).welfare;
            if (!acc || x < *acc) acc = std::move(x);
          },
          [](std::optional<Weight>& a, std::optional<Weight>&& b) {
            if (b && (!a || *b < *a)) a = std::move(b);
          });
      const auto count = static_cast<std::size_t>(factorial(g.size()).to_double());
      return exact_result(welfare_ratio(*worst, opt), count);
    }
    case Arrival::kRandom: {
      if (budget.prefer_exact && g.size() <= budget.limits.order_n) {
        const Weight mean = exact_expected_welfare(g, make, mode, budget.limits, budget.jobs);
        const auto count = static_cast<std::size_t>(factorial(g.size()).to_double());
        return exact_result(welfare_ratio(mean, opt), count);
      }
      RatioEstimate mc = mc_expected_welfare(g, make, mode, budget.trials, budget.seed, budget.jobs);
      if (opt.is_zero()) {
        mc.point = mc.point < 0 ? 0.0 : 1.0;
        mc.half_width = mc.std_error = 0.0;
      } else {
        const double o = opt.to_double();
        mc.point /= o;
        mc.half_width /= o;
        mc.std_error /= o;
      }
      return mc;
    }
  }
  return r;
}

}  // namespace ocf
