#pragma once

#include <charconv>
#include <map>
#include <tuple>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocf/algorithms.hpp"
#include "ocf/oracles.hpp"
#include "ocf/random.hpp"

namespace ocf {

struct Instance {
  Game game;
  std::optional<ArrivalOrder> order;  // the family's canonical arrival order, if it has one
};

// Agents: a = 0, b = 1, X = 2..k+1, Y = k+2..2k+1.
inline Game gen_star_pair(std::size_t k, const Weight& eps = Weight(1, 2)) {
  if (k < 1) throw PreconditionError("star-pair needs k >= 1");
  if (!eps.is_positive()) throw PreconditionError("star-pair needs eps > 0");
  const std::size_t n = 2 * k + 2;
  GameBuilder b(n);
  std::vector<std::string> labels{"a", "b"};
  for (std::size_t x = 0; x < k; ++x) labels.push_back("x" + std::to_string(x + 1));
  for (std::size_t y = 0; y < k; ++y) labels.push_back("y" + std::to_string(y + 1));
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) b.set(i, j, Weight(-1));
  }
  b.set(0, 1, Weight(1));
  for (std::size_t x = 0; x < k; ++x) {
    b.set(0, static_cast<AgentId>(2 + x), eps);
    b.set(1, static_cast<AgentId>(2 + k + x), eps);
  }
  b.labels(std::move(labels));
  return b.build();
}

// Path a_0..a_{k+1} with w(a_{i-1}, a_i) = 1 + (i-1) eps.
inline Instance gen_increasing_chain(std::size_t k, const Weight& eps) {
  if (k < 2 || k % 2 != 0) throw PreconditionError("chain needs an even k >= 2");
  if (!eps.is_positive()) throw PreconditionError("chain needs eps > 0");
  const std::size_t n = k + 2;
  GameBuilder b(n);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
  for (std::size_t i = 1; i <= k + 1; ++i) {
    b.set(static_cast<AgentId>(i - 1), static_cast<AgentId>(i),
          Weight(1) + Weight(static_cast<long>(i - 1)) * eps);
  }
  b.labels(std::move(labels));
  return {b.build(), ArrivalOrder::identity(n)};
}

// a_1..a_k = 0..k-1, b_1..b_k = k..2k-1; order a_1..a_k, b_1..b_k.
inline Instance gen_dissolution_trap(std::size_t k) {
  if (k < 2) throw PreconditionError("trap needs k >= 2");
  const std::size_t n = 2 * k;
  const long kk = static_cast<long>(k);
  GameBuilder b(n);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back("a" + std::to_string(i + 1));
  for (std::size_t i = 0; i < k; ++i) labels.push_back("b" + std::to_string(i + 1));
  b.set(0, 1, Weight(1));
  for (std::size_t i = 2; i < k; ++i) b.set(0, static_cast<AgentId>(i), Weight(1, kk));
  for (std::size_t j = 0; j < k; ++j) {
    const auto bj = static_cast<AgentId>(k + j);
    b.set(0, bj, Weight(-kk));
    for (std::size_t i = 1; i < k; ++i) b.set(static_cast<AgentId>(i), bj, Weight(1));
  }
  b.labels(std::move(labels));
  return {b.build(), ArrivalOrder::identity(n)};
}

inline Weight default_ladder_eps(std::size_t k, const Weight& t) {
  return Weight::pow(t, static_cast<unsigned>(k + 1)) / Weight(1000000);
}

// a_i = i and b_i = k+2+i for i = 0..k+1; order (a_0, a_1, b_0, a_2, b_1, ..., a_{k+1}, b_k, b_{k+1}).
inline Instance gen_dta_ladder(std::size_t k, std::optional<Weight> eps = std::nullopt,
                               const Weight& t = dta_default_threshold()) {
  if (k < 1) throw PreconditionError("ladder needs k >= 1");
  const Weight e = eps ? *eps : default_ladder_eps(k, t);
  if (!e.is_positive()) throw PreconditionError("ladder needs eps > 0");
  const std::size_t m = k + 2;
  GameBuilder b(2 * m);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m; ++i) labels.push_back("a" + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) labels.push_back("b" + std::to_string(i));
  auto a = [](std::size_t i) { return static_cast<AgentId>(i); };
  auto bb = [m](std::size_t i) { return static_cast<AgentId>(m + i); };
  for (std::size_t i = 0; i <= k; ++i) {
    b.set(a(i), bb(i), Weight::pow(t, static_cast<unsigned>(i + 1)) - e);
    b.set(a(i), a(i + 1), Weight::pow(t, static_cast<unsigned>(i)));
  }
  b.set(a(k + 1), bb(k + 1), Weight::pow(t, static_cast<unsigned>(k + 1)) - e);
  b.labels(std::move(labels));
  std::vector<AgentId> order{a(0), a(1), bb(0)};
  for (std::size_t i = 2; i <= k + 1; ++i) {
    order.push_back(a(i));
    order.push_back(bb(i - 1));
  }
  order.push_back(bb(k + 1));
  return {b.build(), ArrivalOrder(std::move(order))};
}

struct AdversaryStep {
  AgentId agent = 0;
  bool zero_branch = false;           // weights all zero because a big coalition appeared earlier
  std::vector<AgentId> negative_set;  // S_i: lower member of each pair in the previous partition
  std::vector<Weight> weights;        // weights to agents 0..agent-1
  Partition partition;                // algorithm's partition after this arrival
};

struct AdversaryTranscript {
  std::size_t n = 0;
  std::string algorithm;
  std::vector<AdversaryStep> steps;
  std::optional<std::size_t> first_large_step;  // 1-based arrival that produced a coalition of 3+
  bool below_regime = false;                    // n < 12: no bound is claimed
};

struct AdversaryResult {
  Game game;
  ArrivalOrder order;
  AdversaryTranscript transcript;
  RunTrace trace;
};

// Builds the game against `make` one arrival at a time, always in dissolution mode.
inline AdversaryResult adaptive_adversary(const AlgorithmFactory& make, std::size_t n) {
  if (n < 2) throw PreconditionError("adversary needs n >= 2");
  auto alg = make();
  AdversaryTranscript tr;
  tr.n = n;
  tr.algorithm = alg->name();
  tr.below_regime = n < 12;
  GameBuilder builder(n);
  OnlineStepper stepper(*alg, Mode::kDissolution, n);
  bool zero = false;
  for (std::size_t i = 1; i <= n; ++i) {
    AdversaryStep s;
    s.agent = static_cast<AgentId>(i - 1);
    s.zero_branch = zero;
    if (!zero) {
      std::vector<char> negative(n, 0);
      for (const auto& c : stepper.partition().coalitions()) {
        if (c.size() == 2) {
          s.negative_set.push_back(c[0]);
          negative[c[0]] = 1;
        }
      }
      mpz_class mag;
      mpz_ui_pow_ui(mag.get_mpz_t(), n, i);
      const Weight plus(mag), minus(mpz_class(-mag));
      for (AgentId j = 0; j < s.agent; ++j) builder.set(s.agent, j, negative[j] ? minus : plus);
    }
    for (AgentId j = 0; j < s.agent; ++j) s.weights.push_back(builder.get(s.agent, j));
    stepper.step(builder.build(), s.agent);
    s.partition = stepper.partition();
    if (!zero && s.partition.max_coalition_size() >= 3) {
      zero = true;
      tr.first_large_step = i;
    }
    tr.steps.push_back(std::move(s));
  }
  return {builder.build(), ArrivalOrder::identity(n), std::move(tr), stepper.finish()};
}

// Lower-bound witness for the optimum used to bound the algorithm's ratio.
inline Partition adversary_witness(const AdversaryTranscript& tr, const Game& g) {
  const std::size_t n = tr.n;
  if (tr.steps.size() != n || g.size() != n) {
    throw PreconditionError("adversary transcript is incomplete");
  }
  std::vector<Coalition> cs;
  if (tr.first_large_step) {
    const auto star = static_cast<AgentId>(*tr.first_large_step - 1);
    std::optional<AgentId> mate;
    for (AgentId j = 0; j < star; ++j) {
      if (g.at(star, j).is_positive() && (!mate || g.at(star, j) > g.at(star, *mate))) mate = j;
    }
    if (mate) cs.push_back({std::min(star, *mate), std::max(star, *mate)});
    for (AgentId a = 0; a < n; ++a) {
      if (!mate || (a != star && a != *mate)) cs.push_back({a});
    }
  } else {
    const auto& last = tr.steps.back().negative_set;
    std::vector<char> neg(n, 0);
    for (AgentId a : last) neg[a] = 1;
    Coalition big;
    for (AgentId a = 0; a < n; ++a) {
      if (neg[a]) {
        cs.push_back({a});
      } else {
        big.push_back(a);
      }
    }
    if (!big.empty()) cs.push_back(std::move(big));
  }
  return Partition::from_coalitions(std::move(cs));
}

struct WeightDistribution {
  enum class Kind { kUniformInt, kUniformPositive, kSparsePositive };
  Kind kind = Kind::kUniformInt;
  long bound = 10;       // W
  double density = 0.5;  // only for kSparsePositive
};

inline Game gen_random_ashg(std::size_t n, const WeightDistribution& d, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("random game needs n >= 1");
  if (d.bound < 1) throw PreconditionError("weight bound W must be >= 1");
  if (d.density < 0.0 || d.density > 1.0) throw PreconditionError("density must lie in [0,1]");
  Rng rng(seed);
  GameBuilder b(n);
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) {
      long w = 0;
      switch (d.kind) {
        case WeightDistribution::Kind::kUniformInt:
          w = rng.between(-d.bound, d.bound);
          break;
        case WeightDistribution::Kind::kUniformPositive:
          w = rng.between(1, d.bound);
          break;
        case WeightDistribution::Kind::kSparsePositive:
          if (rng.unit() < d.density) w = rng.between(1, d.bound);
          break;
      }
      b.set(i, j, Weight(w));
    }
  }
  return b.build();
}

// Positive edges form a forest and every negative edge outweighs all positive edges together.
inline bool is_tree_domain(const Game& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t k = 0; k < n; ++k) parent[k] = k;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const Weight pos = positive_edge_sum(g);
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) {
      const Weight& w = g.at(i, j);
      if (w.is_positive()) {
        const auto ri = find(i), rj = find(j);
        if (ri == rj) return false;
        parent[ri] = rj;
      } else if (w.is_negative() && !(-w > pos)) {
        return false;
      }
    }
  }
  return true;
}

inline Game gen_tree_domain(std::size_t n, std::uint64_t seed, long max_weight = 10) {
  if (n < 2) throw PreconditionError("tree domain needs n >= 2");
  Rng rng(seed);
  std::vector<std::tuple<AgentId, AgentId, long>> forest;
  long total = 0;
  for (AgentId v = 1; v < n; ++v) {
    if (v == 1 || rng.below(4) != 0) {
      const auto u = static_cast<AgentId>(rng.below(v));
      const long w = rng.between(1, max_weight);
      forest.emplace_back(u, v, w);
      total += w;
    }
  }
  GameBuilder b(n);
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) b.set(i, j, Weight(-(total + 1)));
  }
  for (auto [u, v, w] : forest) b.set(u, v, Weight(w));
  return b.build();
}

// One planted edge strictly dominates all others and carries at least lambda * SW(opt).
inline Game gen_lambda_domain(std::size_t n, const Weight& lambda, std::uint64_t seed,
                              std::size_t max_retries = 8, long max_weight = 10) {
  if (n < 2) throw PreconditionError("lambda domain needs n >= 2");
  if (!lambda.is_positive() || lambda > Weight(1)) {
    throw PreconditionError("lambda must lie in (0, 1]");
  }
  if (max_retries < 1) throw PreconditionError("need at least one attempt");
  Rng rng(seed);
  const Game base = gen_random_ashg(n, {WeightDistribution::Kind::kUniformInt, max_weight, 0.5},
                                    rng.next());
  const auto u = static_cast<AgentId>(rng.below(n));
  auto v = static_cast<AgentId>(rng.below(n - 1));
  if (v >= u) ++v;
  const AgentId lo = std::min(u, v), hi = std::max(u, v);

  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    // Positive background weights shrink geometrically; the last attempt removes them.
    const bool last = attempt + 1 == max_retries;
    const Weight shrink = last ? Weight(0) : Weight(1) / Weight::pow(Weight(2), static_cast<unsigned>(attempt));
    GameBuilder b(n);
    Weight top;
    for (AgentId i = 0; i < n; ++i) {
      for (AgentId j = i + 1; j < n; ++j) {
        if (i == lo && j == hi) continue;
        Weight w = base.at(i, j);
        if (w.is_positive()) w *= shrink;
        if (w > top) top = w;
        b.set(i, j, w);
      }
    }
    const Weight planted = top + Weight(1);
    b.set(lo, hi, planted);
    Game g = b.build();
    const Weight opt = n <= OracleLimits{}.partition_n ? optimal_partition(g).welfare
                                                      : positive_edge_sum(g).mul_pow2(1);
    if (planted >= lambda * opt) return g;
  }
  throw Error("lambda domain: no game with lambda=" + lambda.str() + " after " +
              std::to_string(max_retries) + " attempts (lambda above 1/2 is never reachable)");
}

// "name:key=value,key=value"
struct FamilySpec {
  std::string name;
  std::map<std::string, std::string> params;

  static FamilySpec parse(std::string_view text) {
    FamilySpec f;
    const auto colon = text.find(':');
    f.name = std::string(text.substr(0, colon));
    if (f.name.empty()) throw ParseError("empty family name in '" + std::string(text) + "'");
    if (colon == std::string_view::npos) return f;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw ParseError("expected key=value in family spec '" + std::string(text) + "'");
      }
      f.params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return f;
  }

  bool has(const std::string& key) const { return params.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = {}) const {
    auto it = params.find(key);
    if (it == params.end()) {
      if (!fallback) throw ParseError("family '" + name + "' needs parameter '" + key + "'");
      return *fallback;
    }
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (ec != std::errc() || p != it->second.data() + it->second.size()) {
      throw ParseError("parameter '" + key + "' must be a nonnegative integer");
    }
    return v;
  }

  std::optional<Weight> weight(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return Weight::parse(it->second);
  }
};

inline WeightDistribution parse_distribution(const FamilySpec& f) {
  WeightDistribution d;
  const std::string kind = f.str("dist", "int");
  if (kind == "int") {
    d.kind = WeightDistribution::Kind::kUniformInt;
  } else if (kind == "pos") {
    d.kind = WeightDistribution::Kind::kUniformPositive;
  } else if (kind == "sparse") {
    d.kind = WeightDistribution::Kind::kSparsePositive;
  } else {
    throw ParseError("unknown dist '" + kind + "' (expected int, pos or sparse)");
  }
  d.bound = static_cast<long>(f.count("W", 10));
  if (f.has("p")) d.density = Weight::parse(f.str("p", "0.5")).to_double();
  return d;
}

struct BuiltInstance {
  Instance instance;
  std::optional<AdversaryResult> adversary;
};

// Adversarial instances depend on the algorithm, so `alg` is needed for "adversary".
inline BuiltInstance build_family(std::string_view spec, const AlgorithmFactory* alg = nullptr) {
  const FamilySpec f = FamilySpec::parse(spec);
  if (f.name == "star-pair") {
    return {{gen_star_pair(f.count("k"), f.weight("eps").value_or(Weight(1, 2))), std::nullopt}, {}};
  }
  if (f.name == "chain") {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, 9);
    return {gen_increasing_chain(f.count("k"), f.weight("eps").value_or(Weight(mpz_class(1), den))),
            {}};
  }
  if (f.name == "trap") return {gen_dissolution_trap(f.count("k")), {}};
  if (f.name == "ladder") {
    const Weight t = f.weight("t").value_or(dta_default_threshold());
    return {gen_dta_ladder(f.count("k"), f.weight("eps"), t), {}};
  }
  if (f.name == "random") {
    return {{gen_random_ashg(f.count("n"), parse_distribution(f), f.count("seed", 1)), std::nullopt},
            {}};
  }
  if (f.name == "tree") {
    return {{gen_tree_domain(f.count("n"), f.count("seed", 1)), std::nullopt}, {}};
  }
  if (f.name == "lambda") {
    return {{gen_lambda_domain(f.count("n"), f.weight("l").value_or(Weight(1, 2)), f.count("seed", 1)),
             std::nullopt},
            {}};
  }
  if (f.name == "adversary") {
    if (!alg) throw PreconditionError("adversary instances need an algorithm");
    AdversaryResult r = adaptive_adversary(*alg, f.count("n"));
    Instance inst{r.game, r.order};
    return {std::move(inst), std::move(r)};
  }
  throw ParseError("unknown family '" + f.name +
                   "' (known: star-pair, chain, trap, ladder, adversary, random, tree, lambda)");
}

}  // namespace ocf
