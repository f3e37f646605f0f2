/*
 * Copyright (c) 2026, the tsogame authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef TSOGAME_GAME_HPP_
#define TSOGAME_GAME_HPP_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tsogame/base.hpp"

namespace tsogame {

using NodeId = uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Explicit bipartite safety game. Every edge crosses ownership, final
/// nodes are A-owned, and a finished arena is deadlock-free. Final nodes
/// keep their outgoing edges; reaching one only settles the verdict.
struct SafetyGame {
  std::vector<Player> owner;
  std::vector<std::vector<NodeId>> edges;  // sorted, duplicate-free per node
  std::vector<bool> final_node;

  std::size_t node_count() const { return owner.size(); }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& e : edges) m += e.size();
    return m;
  }

  NodeId add_node(Player p, bool is_final) {
    owner.push_back(p);
    edges.emplace_back();
    final_node.push_back(is_final);
    return static_cast<NodeId>(owner.size() - 1);
  }

  void add_edge(NodeId src, NodeId dst) { edges[src].push_back(dst); }

  void sort_edges() {
    for (auto& e : edges) {
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
    }
  }
};

/// Throws InvalidArgument on any structural violation.
inline void check_invariants(const SafetyGame& g) {
  const std::size_t n = g.node_count();
  if (g.edges.size() != n || g.final_node.size() != n)
    throw InvalidArgument("game: ragged node tables");
  for (NodeId v = 0; v < n; ++v) {
    if (g.edges[v].empty())
      throw InvalidArgument("game: node " + std::to_string(v) + " is deadlocked");
    if (g.final_node[v] && g.owner[v] != Player::A)
      throw InvalidArgument("game: final node " + std::to_string(v) + " is not A-owned");
    for (NodeId w : g.edges[v]) {
      if (w >= n) throw InvalidArgument("game: edge to unknown node");
      if (g.owner[v] == g.owner[w])
        throw InvalidArgument("game: edge " + std::to_string(v) + "->" + std::to_string(w) +
                              " does not alternate ownership");
    }
  }
}

namespace detail {

inline void require_nodes(const SafetyGame& g, const std::vector<NodeId>& ns, const char* who) {
  for (NodeId v : ns)
    if (v >= g.node_count()) throw InvalidArgument(std::string(who) + ": unknown node");
}

}  // namespace detail

/// Union of successors, as a sorted duplicate-free set.
inline std::vector<NodeId> post_set(const SafetyGame& g, const std::vector<NodeId>& ns) {
  detail::require_nodes(g, ns, "post_set");
  std::vector<NodeId> out;
  for (NodeId v : ns) out.insert(out.end(), g.edges[v].begin(), g.edges[v].end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Union of predecessors; mirror of post_set.
inline std::vector<NodeId> pre_set(const SafetyGame& g, const std::vector<NodeId>& ns) {
  detail::require_nodes(g, ns, "pre_set");
  std::vector<bool> in(g.node_count(), false);
  for (NodeId v : ns) in[v] = true;
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId w : g.edges[v])
      if (in[w]) {
        out.push_back(v);
        break;
      }
  return out;
}

/// Winning regions plus the attractor rank used for strategy extraction.
/// rank[v] is the insertion iteration into B's attractor (final nodes have
/// rank 0) and kNoRank for nodes won by A.
struct Regions {
  std::vector<bool> win_b;
  std::vector<uint32_t> rank;

  static constexpr uint32_t kNoRank = std::numeric_limits<uint32_t>::max();

  bool wins_a(NodeId v) const { return !win_b[v]; }
  bool wins_b(NodeId v) const { return win_b[v]; }

  std::size_t count_b() const {
    return static_cast<std::size_t>(std::count(win_b.begin(), win_b.end(), true));
  }
};

/// Backward-induction solver. win_B is the least set containing the final
/// nodes and closed under "B-node with some successor inside, A-node with
/// all successors inside"; win_A is the complement. Linear in nodes+edges
/// via per-node out-degree counters.
inline Regions solve(const SafetyGame& g) {
  check_invariants(g);
  const std::size_t n = g.node_count();

  std::vector<std::vector<NodeId>> preds(n);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId w : g.edges[v]) preds[w].push_back(v);

  Regions r;
  r.win_b.assign(n, false);
  r.rank.assign(n, Regions::kNoRank);
  std::vector<uint32_t> pending(n);
  for (NodeId v = 0; v < n; ++v) pending[v] = static_cast<uint32_t>(g.edges[v].size());

  std::deque<NodeId> queue;
  for (NodeId v = 0; v < n; ++v)
    if (g.final_node[v]) {
      r.win_b[v] = true;
      r.rank[v] = 0;
      queue.push_back(v);
    }

  while (!queue.empty()) {
    NodeId w = queue.front();
    queue.pop_front();
    for (NodeId v : preds[w]) {
      if (r.win_b[v]) continue;
      if (g.owner[v] == Player::B || --pending[v] == 0) {
        r.win_b[v] = true;
        r.rank[v] = r.rank[w] + 1;
        queue.push_back(v);
      }
    }
  }
  return r;
}

/// Next-move choice per node; meaningful on the owner's nodes, total over
/// all of them (losing nodes get the deterministic lowest-id successor).
struct PositionalStrategy {
  std::vector<NodeId> choice;

  NodeId at(NodeId v) const {
    if (v >= choice.size() || choice[v] == kNoNode)
      throw InvalidArgument("strategy undefined at node " + std::to_string(v));
    return choice[v];
  }
};

namespace detail {

inline void require_regions_consistent(const SafetyGame& g, const Regions& r) {
  if (r.win_b.size() != g.node_count() || r.rank.size() != g.node_count())
    throw InvalidArgument("regions inconsistent with game: wrong size");
  for (NodeId v = 0; v < g.node_count(); ++v) {
    bool some_b = false, all_b = true;
    for (NodeId w : g.edges[v]) {
      some_b |= r.win_b[w];
      all_b &= r.win_b[w];
    }
    bool expect_b = g.final_node[v] || (g.owner[v] == Player::B ? some_b : all_b);
    if (expect_b != r.win_b[v])
      throw InvalidArgument("regions inconsistent with game at node " + std::to_string(v));
  }
}

}  // namespace detail

/// Extract positional strategies from solved regions. On win_B, B picks a
/// successor of strictly smaller attractor rank; on win_A, A picks any
/// successor staying in win_A. Ties and losing nodes resolve to the lowest
/// NodeId, so extraction is deterministic.
inline std::pair<PositionalStrategy, PositionalStrategy> extract_strategies(const SafetyGame& g,
                                                                            const Regions& r) {
  detail::require_regions_consistent(g, r);
  PositionalStrategy sa, sb;
  sa.choice.assign(g.node_count(), kNoNode);
  sb.choice.assign(g.node_count(), kNoNode);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    NodeId fallback = g.edges[v].front();  // lowest id: edges are sorted
    if (g.owner[v] == Player::A) {
      sa.choice[v] = fallback;
      if (!r.win_b[v])
        for (NodeId w : g.edges[v])
          if (!r.win_b[w]) {
            sa.choice[v] = w;
            break;
          }
    } else {
      sb.choice[v] = fallback;
      if (r.win_b[v])
        for (NodeId w : g.edges[v])
          if (r.win_b[w] && r.rank[w] < r.rank[v]) {
            sb.choice[v] = w;
            break;
          }
    }
  }
  return {sa, sb};
}

/// A finite play prefix with its verdict. The prefix may extend past the
/// first final node; final_index records the first hit.
struct Play {
  enum class Verdict : uint8_t { BReachedFinal, ASurvivedHorizon };

  std::vector<NodeId> prefix;
  Verdict verdict = Verdict::ASurvivedHorizon;
  std::size_t final_index = 0;  // valid iff verdict == BReachedFinal
};

/// Follow the owner's strategy from start for at most horizon moves,
/// stopping early at the first final node.
inline Play play(const SafetyGame& g, const PositionalStrategy& sa, const PositionalStrategy& sb,
                 NodeId start, std::size_t horizon) {
  if (start >= g.node_count()) throw InvalidArgument("play: unknown start node");
  if (horizon < 1) throw InvalidArgument("play: horizon must be at least 1");
  Play out;
  NodeId cur = start;
  out.prefix.push_back(cur);
  for (std::size_t step = 0; step <= horizon; ++step) {
    if (g.final_node[cur]) {
      out.verdict = Play::Verdict::BReachedFinal;
      out.final_index = step;
      return out;
    }
    if (step == horizon) break;
    cur = g.owner[cur] == Player::A ? sa.at(cur) : sb.at(cur);
    out.prefix.push_back(cur);
  }
  out.verdict = Play::Verdict::ASurvivedHorizon;
  return out;
}

/// Arena dump, bit-exact: header, then nodes ascending, then edges in
/// lexicographic order.
inline std::string dump_arena(const SafetyGame& g) {
  std::ostringstream os;
  os << "game v1 " << g.node_count() << ' ' << g.edge_count() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v)
    os << "node " << v << ' ' << player_letter(g.owner[v]) << ' ' << (g.final_node[v] ? "final" : "-")
       << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId w : g.edges[v]) os << "edge " << v << ' ' << w << '\n';
  return os.str();
}

}  // namespace tsogame

#endif  // TSOGAME_GAME_HPP_
