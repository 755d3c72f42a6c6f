#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocf/errors.hpp"
#include "ocf/weight.hpp"

namespace ocf {

using AgentId = std::uint32_t;
using Coalition = std::vector<AgentId>;  // sorted ascending, nonempty

struct Edge {
  AgentId i = 0;
  AgentId j = 0;
  Weight w;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Complete symmetric weighted graph on agents 0..n-1. Absent pairs weigh 0.
class Game {
 public:
  Game() = default;
  explicit Game(std::size_t n) : n_(n), w_(n * n) {}

  static Game from_edges(std::size_t n, std::span<const Edge> edges) {
    Game g(n);
    std::vector<char> seen(n * n, 0);
    for (const Edge& e : edges) {
      if (e.i >= n || e.j >= n) {
        throw PreconditionError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                ") out of range for n=" + std::to_string(n));
      }
      if (e.i >= e.j) {
        throw PreconditionError("edge endpoints must satisfy i < j, got (" + std::to_string(e.i) +
                                "," + std::to_string(e.j) + ")");
      }
      if (seen[e.i * n + e.j]) {
        throw PreconditionError("duplicate edge (" + std::to_string(e.i) + "," +
                                std::to_string(e.j) + ")");
      }
      seen[e.i * n + e.j] = 1;
      g.w_[e.i * n + e.j] = e.w;
      g.w_[e.j * n + e.i] = e.w;
    }
    return g;
  }

  std::size_t size() const { return n_; }

  const Weight& weight(AgentId i, AgentId j) const {
    if (i >= n_ || j >= n_) {
      throw PreconditionError("agent out of range: (" + std::to_string(i) + "," +
                              std::to_string(j) + ") with n=" + std::to_string(n_));
    }
    if (i == j) throw PreconditionError("no self weight for agent " + std::to_string(i));
    return w_[i * n_ + j];
  }

  // Unchecked access for hot loops that already validated their indices.
  const Weight& at(AgentId i, AgentId j) const { return w_[i * n_ + j]; }

  // Nonzero edges with i < j, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (AgentId i = 0; i < n_; ++i) {
      for (AgentId j = i + 1; j < n_; ++j) {
        if (!at(i, j).is_zero()) out.push_back({i, j, at(i, j)});
      }
    }
    return out;
  }

  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(AgentId i) const {
    return i < labels_.size() ? labels_[i] : std::to_string(i);
  }
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_) {
      throw PreconditionError("label count does not match n");
    }
    labels_ = std::move(labels);
  }

  friend bool operator==(const Game& a, const Game& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

 private:
  friend class GameBuilder;
  std::size_t n_ = 0;
  std::vector<Weight> w_;
  std::vector<std::string> labels_;
};

class GameBuilder {
 public:
  explicit GameBuilder(std::size_t n) : game_(n) {}

  GameBuilder& set(AgentId i, AgentId j, const Weight& w) {
    const std::size_t n = game_.n_;
    if (i >= n || j >= n || i == j) {
      throw PreconditionError("bad pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    game_.w_[i * n + j] = w;
    game_.w_[j * n + i] = w;
    return *this;
  }
  const Weight& get(AgentId i, AgentId j) const { return game_.weight(i, j); }
  GameBuilder& labels(std::vector<std::string> l) {
    game_.set_labels(std::move(l));
    return *this;
  }
  std::size_t size() const { return game_.n_; }
  Game build() const { return game_; }

 private:
  Game game_;
};

// Disjoint nonempty coalitions over the agents that have arrived so far.
// Kept canonical: members sorted, coalitions ordered by their smallest member.
class Partition {
 public:
  Partition() = default;

  static Partition from_coalitions(std::vector<Coalition> coalitions) {
    Partition p;
    for (auto& c : coalitions) {
      if (c.empty()) throw PreconditionError("empty coalition in partition");
      std::sort(c.begin(), c.end());
      for (AgentId a : c) {
        if (p.contains(a)) {
          throw PreconditionError("agent " + std::to_string(a) + " appears in two coalitions");
        }
        p.ensure(a);
        p.index_[a] = 0;
      }
      p.coalitions_.push_back(std::move(c));
    }
    p.normalize();
    return p;
  }

  static Partition singletons(std::span<const AgentId> agents) {
    std::vector<Coalition> cs;
    for (AgentId a : agents) cs.push_back({a});
    return from_coalitions(std::move(cs));
  }

  const std::vector<Coalition>& coalitions() const { return coalitions_; }
  std::size_t size() const { return coalitions_.size(); }
  bool empty() const { return coalitions_.empty(); }

  bool contains(AgentId a) const { return a < index_.size() && index_[a] >= 0; }

  std::size_t index_of(AgentId a) const {
    if (!contains(a)) throw PreconditionError("agent " + std::to_string(a) + " not in partition");
    return static_cast<std::size_t>(index_[a]);
  }
  const Coalition& coalition_of(AgentId a) const { return coalitions_[index_of(a)]; }

  std::vector<AgentId> agents() const {
    std::vector<AgentId> out;
    for (const auto& c : coalitions_) out.insert(out.end(), c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  std::size_t agent_count() const {
    std::size_t k = 0;
    for (const auto& c : coalitions_) k += c.size();
    return k;
  }
  std::size_t max_coalition_size() const {
    std::size_t m = 0;
    for (const auto& c : coalitions_) m = std::max(m, c.size());
    return m;
  }

  void add_singleton(AgentId a) {
    require_new(a);
    ensure(a);
    coalitions_.push_back({a});
    normalize();
  }

  void join(AgentId anchor, AgentId a) {
    require_new(a);
    Coalition& c = coalitions_[index_of(anchor)];
    c.insert(std::upper_bound(c.begin(), c.end(), a), a);
    ensure(a);
    normalize();
  }

  // Replaces the coalition holding `anchor` by {a, partner} plus singletons of the rest.
  void dissolve_and_pair(AgentId anchor, AgentId partner, AgentId a) {
    require_new(a);
    const std::size_t idx = index_of(anchor);
    Coalition old = std::move(coalitions_[idx]);
    if (!std::binary_search(old.begin(), old.end(), partner)) {
      coalitions_[idx] = std::move(old);
      throw PreconditionError("partner " + std::to_string(partner) + " not in coalition of " +
                              std::to_string(anchor));
    }
    coalitions_.erase(coalitions_.begin() + static_cast<std::ptrdiff_t>(idx));
    for (AgentId m : old) {
      if (m != partner) coalitions_.push_back({m});
    }
    coalitions_.push_back(a < partner ? Coalition{a, partner} : Coalition{partner, a});
    ensure(a);
    normalize();
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.coalitions_ == b.coalitions_;
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t k = 0; k < coalitions_.size(); ++k) {
      if (k) s += ",";
      s += "{";
      for (std::size_t m = 0; m < coalitions_[k].size(); ++m) {
        if (m) s += ",";
        s += std::to_string(coalitions_[k][m]);
      }
      s += "}";
    }
    return s + "}";
  }

 private:
  void ensure(AgentId a) {
    if (a >= index_.size()) index_.resize(static_cast<std::size_t>(a) + 1, -1);
  }
  void require_new(AgentId a) const {
    if (contains(a)) throw PreconditionError("agent " + std::to_string(a) + " already placed");
  }
  void normalize() {
    std::sort(coalitions_.begin(), coalitions_.end(),
              [](const Coalition& x, const Coalition& y) { return x.front() < y.front(); });
    for (std::size_t k = 0; k < coalitions_.size(); ++k) {
      for (AgentId a : coalitions_[k]) index_[a] = static_cast<std::int32_t>(k);
    }
  }

  std::vector<Coalition> coalitions_;
  std::vector<std::int32_t> index_;
};

// A partition whose coalitions all have size at most two.
class MatchingView {
 public:
  explicit MatchingView(Partition p) : partition_(std::move(p)) {
    if (partition_.max_coalition_size() > 2) {
      throw InvalidMatchingError("coalition of size " +
                                 std::to_string(partition_.max_coalition_size()) +
                                 " is not a matching");
    }
  }
  const Partition& partition() const { return partition_; }
  std::vector<std::pair<AgentId, AgentId>> pairs() const {
    std::vector<std::pair<AgentId, AgentId>> out;
    for (const auto& c : partition_.coalitions()) {
      if (c.size() == 2) out.emplace_back(c[0], c[1]);
    }
    return out;
  }

 private:
  Partition partition_;
};

inline std::optional<MatchingView> is_matching(const Partition& p) {
  if (p.max_coalition_size() > 2) return std::nullopt;
  return MatchingView(p);
}

// Any type exposing weight(i, j) can be evaluated (Game or a revealed view).
template <typename G>
Weight utility(const G& game, AgentId i, const Coalition& c) {
  if (!std::binary_search(c.begin(), c.end(), i)) {
    throw PreconditionError("agent " + std::to_string(i) + " is not in the coalition");
  }
  Weight u;
  for (AgentId j : c) {
    if (j != i) u += game.weight(i, j);
  }
  return u;
}

template <typename G>
Weight coalition_welfare(const G& game, const Coalition& c) {
  Weight s;
  for (std::size_t x = 0; x < c.size(); ++x) {
    for (std::size_t y = x + 1; y < c.size(); ++y) s += game.weight(c[x], c[y]);
  }
  return s.mul_pow2(1);
}

template <typename G>
Weight social_welfare(const G& game, const Partition& p) {
  Weight s;
  for (const auto& c : p.coalitions()) {
    for (std::size_t x = 0; x < c.size(); ++x) {
      for (std::size_t y = x + 1; y < c.size(); ++y) s += game.weight(c[x], c[y]);
    }
  }
  return s.mul_pow2(1);
}

// pi[N'] : every coalition intersected with the subset, empty pieces dropped.
inline Partition restrict_partition(const Partition& p, std::span<const AgentId> subset) {
  std::vector<char> keep;
  for (AgentId a : subset) {
    if (a >= keep.size()) keep.resize(static_cast<std::size_t>(a) + 1, 0);
    keep[a] = 1;
  }
  std::vector<Coalition> out;
  for (const auto& c : p.coalitions()) {
    Coalition piece;
    for (AgentId a : c) {
      if (a < keep.size() && keep[a]) piece.push_back(a);
    }
    if (!piece.empty()) out.push_back(std::move(piece));
  }
  return Partition::from_coalitions(std::move(out));
}

inline Weight positive_edge_sum(const Game& g) {
  Weight s;
  for (AgentId i = 0; i < g.size(); ++i) {
    for (AgentId j = i + 1; j < g.size(); ++j) {
      if (g.at(i, j).is_positive()) s += g.at(i, j);
    }
  }
  return s;
}

template <typename G>
Weight matching_weight(const G& game, const MatchingView& m) {
  Weight s;
  for (auto [a, b] : m.pairs()) s += game.weight(a, b);
  return s;
}

template <typename G>
Weight matching_weight(const G& game, const Partition& p) {
  return matching_weight(game, MatchingView(p));
}

struct Subgame {
  Game game;
  std::vector<AgentId> original;  // new index -> original agent id
};

inline Subgame induced_subgame(const Game& g, std::span<const AgentId> subset) {
  std::vector<AgentId> ids(subset.begin(), subset.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw PreconditionError("duplicate agent in subset");
  }
  GameBuilder b(ids.size());
  for (std::size_t x = 0; x < ids.size(); ++x) {
    for (std::size_t y = x + 1; y < ids.size(); ++y) {
      b.set(static_cast<AgentId>(x), static_cast<AgentId>(y), g.weight(ids[x], ids[y]));
    }
  }
  Game sub = b.build();
  if (!g.labels().empty()) {
    std::vector<std::string> labels;
    for (AgentId a : ids) labels.push_back(g.label(a));
    sub.set_labels(std::move(labels));
  }
  return {std::move(sub), std::move(ids)};
}

}  // namespace ocf
