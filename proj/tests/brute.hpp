#pragma once

// Slow reference implementations used as test oracles. Kept deliberately naive.

#include <algorithm>
#include <functional>
#include <vector>

#include "ocf/ocf.hpp"

namespace brute {

using ocf::AgentId;
using ocf::Game;
using ocf::Weight;

// Every set partition of 0..n-1, visited as a label vector.
inline void each_partition(std::size_t n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> label(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      visit(label);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      label[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  if (n == 0) {
    visit(label);
  } else {
    rec(0, 0);
  }
}

inline Weight best_partition_welfare(const Game& g) {
  const std::size_t n = g.size();
  std::optional<Weight> best;
  each_partition(n, [&](const std::vector<int>& label) {
    Weight s;
    for (AgentId i = 0; i < n; ++i) {
      for (AgentId j = i + 1; j < n; ++j) {
        if (label[i] == label[j]) s += g.at(i, j) + g.at(j, i);
      }
    }
    if (!best || s > *best) best = s;
  });
  return *best;
}

inline Weight best_matching_weight(const Game& g) {
  const std::size_t n = g.size();
  std::vector<char> used(n, 0);
  std::function<Weight(AgentId)> rec = [&](AgentId i) -> Weight {
    while (i < n && used[i]) ++i;
    if (i >= n) return Weight(0);
    used[i] = 1;
    Weight best = rec(i + 1);  // i stays alone
    for (AgentId j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      best = std::max(best, g.at(i, j) + rec(i + 1));
      used[j] = 0;
    }
    used[i] = 0;
    return best;
  };
  return rec(0);
}

inline std::vector<std::vector<AgentId>> all_orders(std::size_t n) {
  std::vector<AgentId> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = static_cast<AgentId>(k);
  std::vector<std::vector<AgentId>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline Weight probability(const Game& g, const ocf::AlgorithmFactory& make, ocf::Mode mode,
                          const std::function<bool(const ocf::Partition&)>& event) {
  long hits = 0, total = 0;
  for (const auto& seq : all_orders(g.size())) {
    ++total;
    hits += event(ocf::run_online(g, ocf::ArrivalOrder(seq), make, mode).final_partition);
  }
  return Weight(hits, total);
}

inline Weight mean_welfare(const Game& g, const ocf::AlgorithmFactory& make, ocf::Mode mode) {
  Weight sum;
  long total = 0;
  for (const auto& seq : all_orders(g.size())) {
    ++total;
    sum += ocf::run_online(g, ocf::ArrivalOrder(seq), make, mode).final_welfare;
  }
  return sum / Weight(total);
}

inline Game random_game(std::size_t n, std::uint64_t seed, long lo = -5, long hi = 5) {
  ocf::Rng rng(seed);
  ocf::GameBuilder b(n);
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = i + 1; j < n; ++j) b.set(i, j, Weight(rng.between(lo, hi)));
  }
  return b.build();
}

}  // namespace brute
