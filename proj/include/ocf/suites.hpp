#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ocf/algorithms.hpp"
#include "ocf/identities.hpp"
#include "ocf/instances.hpp"
#include "ocf/oracles.hpp"
#include "ocf/report.hpp"

namespace ocf {

struct SuiteOptions {
  std::size_t jobs = 1;
  std::uint64_t seed = 20240601;
};

inline Decimal50 to_decimal(const Weight& w) {
  return Decimal50(w.numerator().get_str()) / Decimal50(w.denominator().get_str());
}

inline std::string fmt_double(double x, int digits = 8) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

inline std::string fmt_decimal(const Decimal50& x, int digits = 10) {
  return x.str(digits, std::ios_base::scientific);
}

inline OutcomePredicate together(AgentId a, AgentId b) {
  return [a, b](const FinalOutcome& o) {
    return o.partition.coalition_of(a) == Coalition{std::min(a, b), std::max(a, b)};
  };
}

namespace detail {

// Folds many per-case checks into one line: count, failures, first failing case.
class Tally {
 public:
  void record(bool ok, const std::string& where) {
    ++cases_;
    if (!ok) {
      ++failed_;
      if (first_.empty()) first_ = where;
    }
  }
  void commit(SuiteReport& r, const std::string& name, const std::string& extra = {}) const {
    std::string d = std::to_string(cases_) + " cases, " + std::to_string(failed_) + " failed";
    if (!first_.empty()) d += "; first: " + first_;
    if (!extra.empty()) d += "; " + extra;
    r.add(name, failed_ == 0 && cases_ > 0, d);
  }

 private:
  std::size_t cases_ = 0;
  std::size_t failed_ = 0;
  std::string first_;
};

inline Decimal50 real_threshold() {
  return 1 + boost::multiprecision::sqrt(Decimal50(2)) / 2;
}

inline Decimal50 ladder_closed_form(unsigned k) {
  const Decimal50 t = real_threshold();
  Decimal50 s = 0, inv = 1;
  for (unsigned i = 1; i <= k; ++i) {
    inv /= t;
    s += inv;
  }
  return 1 / (s + 3 + boost::multiprecision::sqrt(Decimal50(2)));
}


}  // namespace detail

inline SuiteReport suite_gdy_star_pair(const SuiteOptions& o) {
  SuiteReport r{"gdy-star-pair", "GDY forms {a,b} with probability 2/(k^2+3k+2)", {}, 0};
  for (long k : {2L, 3L}) {
    const Game g = gen_star_pair(static_cast<std::size_t>(k));
    const Weight p = exact_event_probability(g, gdy(), Mode::kStandard, together(0, 1), {}, o.jobs);
    const Weight want(2, k * k + 3 * k + 2);
    r.add("k=" + std::to_string(k), p == want, "Pr=" + p.str() + " expected " + want.str());
  }
  return r;
}

inline SuiteReport suite_wgdy_star_pair(const SuiteOptions& o) {
  SuiteReport r{"wgdy-star-pair", "WGDY forms {a,b} with probability 1/(k+1)", {}, 0};
  for (long k : {2L, 3L}) {
    const Game g = gen_star_pair(static_cast<std::size_t>(k));
    const Weight p = exact_event_probability(g, wgdy(), Mode::kStandard, together(0, 1), {}, o.jobs);
    const Weight want(1, k + 1);
    r.add("k=" + std::to_string(k), p == want, "Pr=" + p.str() + " expected " + want.str());
  }
  return r;
}

inline SuiteReport suite_gma_single_edge(const SuiteOptions& o) {
  SuiteReport r{"gma-single-edge", "GMA matches the only positive edge with probability 1/(n-1)", {}, 0};
  for (long n : {4L, 6L}) {
    GameBuilder b(static_cast<std::size_t>(n));
    b.set(0, 1, Weight(1));
    const Weight p =
        exact_event_probability(b.build(), gma(), Mode::kStandard, together(0, 1), {}, o.jobs);
    const Weight want(1, n - 1);
    r.add("n=" + std::to_string(n), p == want, "Pr=" + p.str() + " expected " + want.str());
  }
  return r;
}

inline SuiteReport suite_wgdy_welfare_floor(const SuiteOptions& o) {
  SuiteReport r{"wgdy-welfare-floor", "E[SW(WGDY)] >= w(E+)/n", {}, 0};
  detail::Tally exact, mc;
  const std::size_t sizes[] = {4, 6, 8};
  for (std::size_t g = 0; g < 200; ++g) {
    const std::size_t n = sizes[g % 3];
    const Game game = gen_random_ashg(n, {}, o.seed + g);
    const Weight bound = positive_edge_sum(game) / Weight(static_cast<long>(n));
    const std::string where = "game " + std::to_string(g) + " n=" + std::to_string(n);
    if (n < 8) {
      const Weight e = exact_expected_welfare(game, wgdy(), Mode::kStandard, {}, o.jobs);
      exact.record(e >= bound, where + " E=" + e.str() + " bound=" + bound.str());
    } else {
      const RatioEstimate est = mc_expected_welfare(game, wgdy(), Mode::kStandard, 10000, o.seed + g, o.jobs);
      mc.record(est.point >= bound.to_double() - 4 * est.std_error,
                where + " mean=" + fmt_double(est.point) + " bound=" + bound.str());
    }
  }
  exact.commit(r, "n in {4,6}, exact enumeration");
  mc.commit(r, "n=8, 10^4 Monte Carlo trials, 4 sigma");
  return r;
}

inline SuiteReport suite_iwa_star_pair(const SuiteOptions& o) {
  SuiteReport r{"iwa-star-pair", "IWA forms {a,b} with probability at most 4/(n-1)", {}, 0};
  for (std::size_t n : {6u, 14u, 30u}) {
    const Game g = gen_star_pair((n - 2) / 2);
    const RatioEstimate est =
        mc_event_frequency(g, iwa(), Mode::kStandard, together(0, 1), 100000, o.seed + n, o.jobs);
    const double bound = 4.0 / static_cast<double>(n - 1);
    r.add("n=" + std::to_string(n), est.point <= bound + 4 * est.std_error,
          "freq=" + fmt_double(est.point) + " sigma=" + fmt_double(est.std_error) +
              " bound=" + fmt_double(bound));
  }
  return r;
}

inline SuiteReport suite_doubling_floor(const SuiteOptions& o) {
  SuiteReport r{"doubling-floor", "E[SW(IWA)] >= SW(opt)/(64n)", {}, 0};
  detail::Tally t;
  for (std::size_t g = 0; g < 100; ++g) {
    const std::size_t n = 2 + g % 9;
    const Game game = gen_random_ashg(n, {}, o.seed + 1000 + g);
    const Weight opt = optimal_partition(game).welfare;
    const RatioEstimate est = mc_expected_welfare(game, iwa(), Mode::kStandard, 10000, o.seed + g, o.jobs);
    const double bound = opt.to_double() / (64.0 * static_cast<double>(n));
    t.record(est.point >= bound - 4 * est.std_error,
             "game " + std::to_string(g) + " n=" + std::to_string(n) + " mean=" +
                 fmt_double(est.point) + " bound=" + fmt_double(bound));
  }
  t.commit(r, "100 random games, n<=10, 10^4 trials each");
  return r;
}

inline SuiteReport suite_dta_ladder(const SuiteOptions&) {
  SuiteReport r{"dta-ladder", "DTA on the ladder family: weight t^k, ratio approaches 1/(3+2 sqrt 2)", {}, 0};
  const Weight t = dta_default_threshold();
  mpz_class billion;
  mpz_ui_pow_ui(billion.get_mpz_t(), 10, 9);
  const Weight eps(mpz_class(1), billion);
  detail::Tally weight, closed, shifted, optimum;
  Decimal50 worst_gap = 0;
  for (unsigned k = 1; k <= 10; ++k) {
    const Instance inst = gen_dta_ladder(k, eps);
    const RunTrace tr = run_online(inst.game, *inst.order, dta_default(), Mode::kDissolution);
    const Weight w = matching_weight(inst.game, tr.final_partition);
    weight.record(w == Weight::pow(t, k), "k=" + std::to_string(k));
    const Weight best = max_weight_matching(inst.game).weight;
    // Rung matching weight as stated with the sum starting at t^0.
    Weight stated;
    for (unsigned i = 0; i <= k + 1; ++i) stated += Weight::pow(t, i);
    stated += Weight::pow(t, k + 1);
    stated -= Weight(static_cast<long>(k + 2)) * eps;
    optimum.record(best == stated, "k=" + std::to_string(k) + " oracle " +
                                       fmt_double(best.to_double(), 12) + " vs stated " +
                                       fmt_double(stated.to_double(), 12));
    const Decimal50 gap = boost::multiprecision::abs(to_decimal(w / best) - detail::ladder_closed_form(k));
    worst_gap = std::max(worst_gap, gap);
    closed.record(gap <= Decimal50("1e-6"), "k=" + std::to_string(k) + " |ratio-closed|=" + fmt_decimal(gap, 4));
    // The oracle optimum has no t^0 rung, which shifts the closed form by one term.
    const Decimal50 alt = boost::multiprecision::abs(to_decimal(w / best) - detail::ladder_closed_form(k - 1));
    shifted.record(alt <= Decimal50("1e-6"), "k=" + std::to_string(k) + " gap " + fmt_decimal(alt, 4));
  }
  weight.commit(r, "k=1..10: DTA weight equals t_rat^k exactly");
  optimum.commit(r, "k=1..10: oracle optimum equals the stated rung-matching weight");
  closed.commit(r, "k=1..10: ratio within 1e-6 of closed form", "max gap " + fmt_decimal(worst_gap, 4));
  shifted.commit(r, "k=1..10: ratio within 1e-6 of the closed form summed to k-1");

  const unsigned k = 30;
  const Instance inst = gen_dta_ladder(k, eps);
  const RunTrace tr = run_online(inst.game, *inst.order, dta_default(), Mode::kDissolution);
  const Weight w = matching_weight(inst.game, tr.final_partition);
  Weight rungs;
  for (AgentId i = 0; i < k + 2; ++i) rungs += inst.game.at(i, static_cast<AgentId>(k + 2 + i));
  const Decimal50 ratio = to_decimal(w / rungs);
  const Decimal50 limit = 1 / (3 + 2 * boost::multiprecision::sqrt(Decimal50(2)));
  const Decimal50 gap = boost::multiprecision::abs(ratio - limit);
  r.add("k=30: ratio within 1e-3 of 1/(3+2 sqrt 2)", gap <= Decimal50("1e-3") && w == Weight::pow(t, k),
        "ratio=" + fmt_decimal(ratio) + " limit=" + fmt_decimal(limit));
  return r;
}

inline SuiteReport suite_dta_guarantee(const SuiteOptions& o) {
  SuiteReport r{"dta-guarantee", "DTA weight >= max matching/(3+2 sqrt 2) on every order", {}, 0};
  const Decimal50 factor = 3 + 2 * boost::multiprecision::sqrt(Decimal50(2));
  const Decimal50 slack("1e-12");
  detail::Tally t;
  std::atomic<std::size_t> runs{0};
  for (std::size_t g = 0; g < 1000; ++g) {
    const std::size_t n = 2 + g % 7;
    const Game game = gen_random_ashg(n, {}, o.seed + 5000 + g);
    const Decimal50 need = to_decimal(max_weight_matching(game).weight) / factor - slack;
    auto check = [&](const ArrivalOrder& ord) {
      const FinalOutcome out = run_final(game, ord, dta_default(), Mode::kDissolution);
      ++runs;
      return to_decimal(matching_weight(game, out.partition)) >= need;
    };
    bool ok = true;
    if (n <= 6) {
      const std::uint64_t bad = fold_orders(
          n, o.jobs, std::uint64_t{0}, [&](std::uint64_t& acc, const ArrivalOrder& ord) { acc += !check(ord); },
          [](std::uint64_t& a, std::uint64_t&& b) { a += b; });
      ok = bad == 0;
    } else {
      for (std::uint64_t k = 0; k < 50; ++k) ok = check(trial_order(n, o.seed + g, k)) && ok;
    }
    t.record(ok, "game " + std::to_string(g) + " n=" + std::to_string(n));
  }
  t.commit(r, "1000 random games, n<=8", std::to_string(runs.load()) + " runs");
  return r;
}

inline SuiteReport suite_gdy_chain(const SuiteOptions&) {
  SuiteReport r{"gdy-chain",
                "GDY over matchings with dissolution on the chain: weight 1+k eps, ratio "
                "(1+k eps)/(k/2 + k(k+2) eps/4), tending to 2/k",
                {}, 0};
  mpz_class billion;
  mpz_ui_pow_ui(billion.get_mpz_t(), 10, 9);
  const Weight eps(mpz_class(1), billion);
  detail::Tally weight, formula, limit;
  std::string measured;
  for (long k = 2; k <= 12; k += 2) {
    const Instance inst = gen_increasing_chain(static_cast<std::size_t>(k), eps);
    const RunTrace tr = run_online(inst.game, *inst.order, gdy({false, true}), Mode::kDissolution);
    const Weight w = matching_weight(inst.game, tr.final_partition);
    const Weight want = Weight(1) + Weight(k) * eps;
    weight.record(w == want, "k=" + std::to_string(k) + " got " + w.str());
    const Weight best = max_weight_matching(inst.game).weight;
    const Weight ratio = w / best;
    const Weight stated = want / (Weight(k, 2) + Weight(k * (k + 2), 4) * eps);
    formula.record(ratio == stated, "k=" + std::to_string(k) + " ratio " + ratio.str() +
                                        " vs stated " + stated.str());
    const double gap = std::abs(ratio.to_double() - 2.0 / static_cast<double>(k));
    limit.record(gap <= 1e-6, "k=" + std::to_string(k) + " ratio " + fmt_double(ratio.to_double()) +
                                  " vs 2/k=" + fmt_double(2.0 / static_cast<double>(k)));
    if (k == 2) measured = "optimum at k=2 is " + best.str();
  }
  weight.commit(r, "k=2..12 even: GDY weight equals 1+k eps exactly");
  formula.commit(r, "ratio equals the stated rational function exactly", measured);
  limit.commit(r, "ratio within 1e-6 of 2/k at eps=1e-9");
  return r;
}

inline SuiteReport suite_gdy_trap(const SuiteOptions&) {
  SuiteReport r{"gdy-trap", "GDY with dissolution on the trap family: SW 2+2(k-2)/k vs optimum 2(k-1)k",
                {}, 0};
  for (long k = 2; k <= 6; ++k) {
    const Instance inst = gen_dissolution_trap(static_cast<std::size_t>(k));
    const RunTrace tr = run_online(inst.game, *inst.order, gdy(), Mode::kDissolution);
    const Weight want_alg = Weight(2) + Weight(2 * (k - 2), k);
    const OptimalPartition opt = optimal_partition(inst.game);
    const Weight want_opt(2 * (k - 1) * k);
    Coalition rest;
    for (AgentId a = 1; a < 2 * k; ++a) rest.push_back(a);
    const Partition stated = Partition::from_coalitions({{0}, rest});
    const bool ok = tr.final_welfare == want_alg && opt.welfare == want_opt && opt.partition == stated;
    r.add("k=" + std::to_string(k), ok,
          "SW(gdy)=" + tr.final_welfare.str() + " expected " + want_alg.str() + ", opt=" +
              opt.welfare.str() + " expected " + want_opt.str() + ", argmax " + opt.partition.str());
  }
  return r;
}

inline SuiteReport suite_adversary(const SuiteOptions&) {
  SuiteReport r{"adversary", "adaptive adversary keeps SW(alg)/SW(witness) <= 12/n", {}, 0};
  for (std::size_t n : {12u, 14u, 16u, 20u}) {
    for (const char* name : {"gdy", "dta", "singletons"}) {
      const AlgorithmFactory make = make_algorithm(name);
      const AdversaryResult res = adaptive_adversary(make, n);
      const Partition witness = adversary_witness(res.transcript, res.game);
      const Weight w_sw = social_welfare(res.game, witness);
      const Weight a_sw = res.trace.final_welfare;
      const bool bound = a_sw * Weight(static_cast<long>(n)) <= Weight(12) * w_sw;
      // Replaying the emitted game must reproduce the transcript step by step.
      const RunTrace replay = run_online(res.game, res.order, make, Mode::kDissolution);
      bool same = replay.steps.size() == res.transcript.steps.size();
      for (std::size_t s = 0; same && s < replay.steps.size(); ++s) {
        same = *replay.steps[s].snapshot == res.transcript.steps[s].partition;
      }
      std::string detail = "ratio=" + fmt_double(welfare_ratio(a_sw, w_sw).to_double()) +
                           " bound=" + fmt_double(12.0 / static_cast<double>(n)) +
                           (same ? ", replay identical" : ", replay DIFFERS");
      bool ok = bound && same;
      if (n <= 13) {
        const Weight opt = optimal_partition(res.game).welfare;
        ok = ok && w_sw <= opt;
        detail += ", witness " + std::string(w_sw <= opt ? "<=" : ">") + " optimum";
      }
      r.add("n=" + std::to_string(n) + " " + name, ok, detail);
    }
  }
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 20, 20);
  const AdversaryResult res = adaptive_adversary(singletons(), 20);
  r.add("n=20 weights reach 20^20 exactly", res.game.at(19, 0) == Weight(big),
        "w(a20,a1)=" + res.game.at(19, 0).str());
  return r;
}

inline SuiteReport suite_maxe_success(const SuiteOptions& o) {
  SuiteReport r{"maxe-success", "MAXE matches the maximum edge with probability at least 1/(2e)", {}, 0};
  const double floor = 1.0 / (2.0 * std::exp(1.0));
  auto top_edge = [](const Game& g) {
    std::pair<AgentId, AgentId> best{0, 1};
    for (AgentId i = 0; i < g.size(); ++i) {
      for (AgentId j = i + 1; j < g.size(); ++j) {
        if (g.at(i, j) > g.at(best.first, best.second)) best = {i, j};
      }
    }
    return best;
  };
  auto distinct_game = [&](std::size_t n, std::uint64_t seed) {
    for (;; ++seed) {
      Game g = perturb_distinct(gen_random_ashg(n, {}, seed));
      auto [a, b] = top_edge(g);
      if (g.at(a, b).is_positive()) return g;
    }
  };
  detail::Tally exact;
  Weight lowest(1);
  for (std::uint64_t g = 0; g < 20; ++g) {
    const Game game = distinct_game(6, o.seed + 7000 + g * 101);
    auto [a, b] = top_edge(game);
    const Weight p = exact_event_probability(game, maxe(), Mode::kStandard, together(a, b), {}, o.jobs);
    lowest = std::min(lowest, p);
    exact.record(p.to_double() >= floor, "game " + std::to_string(g) + " Pr=" + p.str());
  }
  exact.commit(r, "20 distinct-weight games n=6, all 720 orders", "lowest " + lowest.str());

  const Game big = distinct_game(20, o.seed + 9000);
  auto [a, b] = top_edge(big);
  const RatioEstimate est = mc_event_frequency(big, maxe(), Mode::kStandard, together(a, b), 100000, o.seed, o.jobs);
  r.add("n=20, 10^5 Monte Carlo trials", est.point >= floor - 4 * est.std_error,
        "freq=" + fmt_double(est.point) + " sigma=" + fmt_double(est.std_error) + " floor=" + fmt_double(floor));
  const OddsPlan plan = odds_stopping_time(10);
  r.add("odds stopping index for n=10 is 7", plan.s == 7, "s=" + std::to_string(plan.s));
  return r;
}

inline SuiteReport suite_matching_bounds(const SuiteOptions& o) {
  SuiteReport r{"matching-bounds", "w(max matching) >= w(E+)/n and SW(opt) <= 2 w(E+)", {}, 0};
  detail::Tally avg, upper;
  const WeightDistribution::Kind kinds[] = {WeightDistribution::Kind::kUniformInt,
                                            WeightDistribution::Kind::kUniformPositive,
                                            WeightDistribution::Kind::kSparsePositive};
  for (std::size_t g = 0; g < 500; ++g) {
    const std::size_t n = 2 + g % 11;
    const Game game = gen_random_ashg(n, {kinds[g % 3], 10, 0.3}, o.seed + 20000 + g);
    const std::string where = "game " + std::to_string(g) + " n=" + std::to_string(n);
    avg.record(check_avgmat_bound(game), where);
    const Weight pes = positive_edge_sum(game);
    upper.record(optimal_partition(game).welfare <= pes * Weight(2), where);
  }
  avg.commit(r, "500 random games n<=12: matching average bound");
  upper.commit(r, "500 random games n<=12: optimum at most twice the positive weight");
  return r;
}

inline SuiteReport suite_identities(const SuiteOptions&) { return identity_suite(); }

namespace detail {

inline Game random_small_game(Rng& rng, std::size_t n) {
  return gen_random_ashg(n, {WeightDistribution::Kind::kUniformInt, 5, 0.5}, rng.next());
}

inline const std::vector<std::string>& contract_algorithms() {
  static const std::vector<std::string> names{"gdy", "gdy-std", "gdy-m", "wgdy", "gma", "iwa",
                                              "dta", "maxe", "i-maxe", "guard:gdy", "singletons"};
  return names;
}

inline bool needs_even(const std::string& name) { return name == "wgdy" || name == "gma"; }

// Reads the weight to an agent that has not arrived yet.
class PeekingProbe final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "peek"; }
  Move decide(const StepContext& ctx) override {
    for (AgentId a = 0; a < static_cast<AgentId>(ctx.game.revealed_count() + 1); ++a) {
      if (!ctx.game.is_revealed(a)) (void)ctx.game.weight(ctx.arriving, a);
    }
    return Move::singleton();
  }
};

}  // namespace detail

inline SuiteReport suite_engine_contracts(const SuiteOptions& o) {
  SuiteReport r{"engine-contracts", "information hiding, move-set inclusion, replay, guard output", {}, 0};
  constexpr std::size_t kCases = 10000;
  Rng rng(o.seed);
  const auto& names = detail::contract_algorithms();

  detail::Tally hiding;
  for (std::size_t c = 0; c < kCases; ++c) {
    const std::string& name = names[c % names.size()];
    std::size_t n = 2 + rng.below(7);
    if (detail::needs_even(name) && n % 2) ++n;
    const Mode mode = rng.below(2) ? Mode::kDissolution : Mode::kStandard;
    const Game g1 = detail::random_small_game(rng, n);
    const ArrivalOrder order = random_order(n, rng);
    const std::size_t t = 1 + rng.below(n);
    // Same weights among the first t arrivals, fresh weights elsewhere.
    std::vector<char> early(n, 0);
    for (std::size_t k = 0; k < t; ++k) early[order[k]] = 1;
    const Game noise = detail::random_small_game(rng, n);
    GameBuilder b(n);
    for (AgentId i = 0; i < n; ++i) {
      for (AgentId j = i + 1; j < n; ++j) b.set(i, j, early[i] && early[j] ? g1.at(i, j) : noise.at(i, j));
    }
    const RunTrace r1 = run_online(g1, order, make_algorithm(name), mode);
    const RunTrace r2 = run_online(b.build(), order, make_algorithm(name), mode);
    bool same = true;
    for (std::size_t k = 0; k < t; ++k) same = same && r1.steps[k].move == r2.steps[k].move;
    hiding.record(same, name + " n=" + std::to_string(n) + " t=" + std::to_string(t));
  }
  detail::Tally peek;
  for (std::size_t n = 2; n <= 8; ++n) {
    const Game g = detail::random_small_game(rng, n);
    bool caught = false;
    try {
      detail::PeekingProbe probe;
      run_online(g, ArrivalOrder::identity(n), probe, Mode::kStandard);
    } catch (const ContractViolation&) {
      caught = true;
    }
    peek.record(caught, "n=" + std::to_string(n));
  }
  peek.commit(r, "reading a hidden weight raises a contract violation");
  hiding.commit(r, "information hiding: games equal on the first t arrivals give equal first t moves");

  detail::Tally inclusion;
  for (std::size_t c = 0; c < kCases; ++c) {
    const std::size_t n = 1 + rng.below(10);
    std::vector<AgentId> agents(n);
    for (std::size_t k = 0; k < n; ++k) agents[k] = static_cast<AgentId>(k);
    rng.shuffle(agents);
    const std::size_t placed = rng.below(n);
    std::vector<Coalition> blocks;
    for (std::size_t k = 0; k < placed; ++k) {
      const std::size_t slot = rng.below(blocks.size() + 1);
      if (slot == blocks.size()) {
        blocks.push_back({agents[k]});
      } else {
        blocks[slot].push_back(agents[k]);
      }
    }
    const Partition pi = Partition::from_coalitions(blocks);
    const AgentId arriving = agents[placed];
    const auto std_moves = legal_moves_standard(pi, arriving);
    const auto dis_moves = legal_moves_dissolution(pi, arriving);
    bool ok = dis_moves.size() == pi.size() + 1 + pi.agent_count();
    for (const Move& m : std_moves) {
      ok = ok && std::find(dis_moves.begin(), dis_moves.end(), m) != dis_moves.end();
    }
    inclusion.record(ok, pi.str() + " + " + std::to_string(arriving));
  }
  inclusion.commit(r, "standard moves are a subset of dissolution moves; |A^D| = |pi|+1+sum|C|");

  detail::Tally replay;
  for (std::size_t c = 0; c < kCases; ++c) {
    const std::string& name = names[c % names.size()];
    std::size_t n = 1 + rng.below(8);
    if (detail::needs_even(name) && n % 2) ++n;
    const Mode mode = rng.below(2) ? Mode::kDissolution : Mode::kStandard;
    const Game g = detail::random_small_game(rng, n);
    const ArrivalOrder order = random_order(n, rng);
    const RunTrace trace = run_online(g, order, make_algorithm(name), mode);
    std::stringstream buf;
    write_trace_jsonl(buf, trace);
    const RunTrace back = replay_trace(g, read_trace_jsonl(buf, mode), mode);
    const TraceValidation v1 = validate_trace(g, order, trace, mode);
    const TraceValidation v2 = validate_trace(g, order_of_trace(back, n), back, mode);
    bool same = v1.ok && v2.ok && back.final_partition == trace.final_partition;
    for (std::size_t k = 0; same && k < trace.steps.size(); ++k) {
      same = *back.steps[k].snapshot == *trace.steps[k].snapshot &&
             back.steps[k].welfare == trace.steps[k].welfare;
    }
    replay.record(same, name + " n=" + std::to_string(n) +
                            (v1.ok ? "" : " " + v1.violations.front()) +
                            (v2.ok ? "" : " " + v2.violations.front()));
  }
  replay.commit(r, "trace replay reproduces every partition and welfare value");

  detail::Tally guard;
  for (std::size_t c = 0; c < kCases; ++c) {
    const std::string& inner = names[c % names.size()];
    std::size_t n = 1 + rng.below(9);
    if (detail::needs_even(inner) && n % 2) ++n;
    const Mode mode = rng.below(2) ? Mode::kDissolution : Mode::kStandard;
    const Game g = detail::random_small_game(rng, n);
    const RunTrace trace = run_online(g, random_order(n, rng), make_algorithm("guard:" + inner), mode);
    bool ok = true;
    for (const auto& s : trace.steps) ok = ok && s.snapshot->max_coalition_size() <= 2;
    guard.record(ok, "guard:" + inner + " n=" + std::to_string(n));
  }
  guard.commit(r, "matching guard output is a matching after every step");
  return r;
}

struct SuiteEntry {
  std::string name;
  int criterion;
  std::function<SuiteReport(const SuiteOptions&)> run;
};

inline const std::vector<SuiteEntry>& suite_registry() {
  static const std::vector<SuiteEntry> entries{
      {"gdy-star-pair", 1, suite_gdy_star_pair},
      {"wgdy-star-pair", 2, suite_wgdy_star_pair},
      {"gma-single-edge", 3, suite_gma_single_edge},
      {"wgdy-welfare-floor", 4, suite_wgdy_welfare_floor},
      {"iwa-star-pair", 5, suite_iwa_star_pair},
      {"doubling-floor", 6, suite_doubling_floor},
      {"dta-ladder", 7, suite_dta_ladder},
      {"dta-guarantee", 8, suite_dta_guarantee},
      {"gdy-chain", 9, suite_gdy_chain},
      {"gdy-trap", 10, suite_gdy_trap},
      {"adversary", 11, suite_adversary},
      {"maxe-success", 12, suite_maxe_success},
      {"matching-bounds", 13, suite_matching_bounds},
      {"identities", 14, suite_identities},
      {"engine-contracts", 15, suite_engine_contracts},
  };
  return entries;
}

inline SuiteReport theorem_suite(const std::string& name, const SuiteOptions& o = {}) {
  for (const auto& e : suite_registry()) {
    if (e.name == name) {
      const auto t0 = std::chrono::steady_clock::now();
      SuiteReport r = e.run(o);
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }
  }
  throw ParseError("unknown suite '" + name + "'");
}

}  // namespace ocf
