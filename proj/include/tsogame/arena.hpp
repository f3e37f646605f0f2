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

#ifndef TSOGAME_ARENA_HPP_
#define TSOGAME_ARENA_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "tsogame/game.hpp"

namespace tsogame {

/// How the arena is made total at TSO-level deadlocks. Under the default,
/// a deadlocked node is routed into a gadget that is winning for the
/// opponent of the stuck player; under Safe, both route to non-final sinks.
enum class DeadlockConvention : uint8_t { DeadlockedPlayerLoses, DeadlockedPlayerSafe };

/// An explicit game arena whose first `real_nodes` nodes correspond to
/// domain keys (configurations or views, annotated with the player to
/// move); nodes past that are deadlock-completion gadget nodes.
template <typename Key>
struct BuiltArena {
  SafetyGame game;
  std::vector<std::pair<Key, Player>> index;  // key per real node
  std::vector<std::string> gadget_names;      // one per gadget node
  NodeId initial = kNoNode;
  std::size_t real_nodes = 0;

  Player winner_at_initial(const Regions& r) const {
    return r.win_b[initial] ? Player::B : Player::A;
  }

  /// Node of a (key, player-to-move) pair, or kNoNode. Real nodes are
  /// sorted by key, so this is a binary search.
  NodeId find(const Key& key, Player to_move) const {
    auto target = std::make_pair(key, to_move);
    auto end = index.begin() + static_cast<std::ptrdiff_t>(real_nodes);
    auto it = std::lower_bound(index.begin(), end, target);
    if (it != end && *it == target) return static_cast<NodeId>(it - index.begin());
    return kNoNode;
  }
};

/// Explicit-state arena construction by forward exploration. Keys are
/// interned per (key, player-to-move); after exploration the node set is
/// reindexed by canonical key order so the result is independent of
/// exploration order, then deadlocks are completed.
template <typename Key>
class ArenaBuilder {
 public:
  explicit ArenaBuilder(std::size_t node_budget = kDefaultNodeBudget)
      : node_budget_(node_budget) {}

  NodeId intern(const Key& key, Player to_move, bool is_final) {
    auto [it, fresh] = ids_.try_emplace(std::make_pair(key, to_move), next_id_);
    if (fresh) {
      if (next_id_ >= node_budget_)
        throw CapacityError("arena exceeds node budget", next_id_);
      ++next_id_;
      final_.push_back(is_final);
      succs_.emplace_back();
      worklist_.push_back(it->first);
    }
    return it->second;
  }

  void add_edge(NodeId src, NodeId dst) { succs_[src].push_back(dst); }

  bool has_work() const { return !worklist_.empty(); }

  std::pair<Key, Player> take_work() {
    auto w = worklist_.back();
    worklist_.pop_back();
    return w;
  }

  NodeId id_of(const Key& key, Player to_move) const {
    auto it = ids_.find(std::make_pair(key, to_move));
    return it == ids_.end() ? kNoNode : it->second;
  }

  std::size_t node_count() const { return next_id_; }

  /// Canonicalize, complete deadlocks and assemble the final arena.
  BuiltArena<Key> finish(const Key& initial_key, Player first_mover,
                         DeadlockConvention convention) {
    BuiltArena<Key> out;
    const std::size_t n = next_id_;

    // ids_ is an ordered map over (key, player): walking it yields the
    // canonical node order regardless of exploration order.
    std::vector<NodeId> remap(n, kNoNode);
    out.index.resize(n);
    NodeId fresh = 0;
    for (const auto& [kp, old_id] : ids_) {
      remap[old_id] = fresh;
      out.index[fresh] = kp;
      ++fresh;
    }

    out.game.owner.resize(n);
    out.game.final_node.assign(n, false);
    out.game.edges.assign(n, {});
    for (const auto& [kp, old_id] : ids_) {
      NodeId v = remap[old_id];
      out.game.owner[v] = kp.second;
      out.game.final_node[v] = final_[old_id];
      auto& es = out.game.edges[v];
      es.reserve(succs_[old_id].size());
      for (NodeId w : succs_[old_id]) es.push_back(remap[w]);
    }
    out.game.sort_edges();
    out.real_nodes = n;
    out.initial = remap[intern_existing(initial_key, first_mover)];
    complete_deadlocks(out.game, convention, &out.gadget_names);
    return out;
  }

  /// Route every deadlocked node into a fresh two-node cycle. Under
  /// DeadlockedPlayerLoses a stuck A-node feeds a final cycle and a stuck
  /// B-node a non-final one; under DeadlockedPlayerSafe both are non-final.
  /// Gadget pairs are shared across all deadlocked nodes of the same owner.
  static void complete_deadlocks(SafetyGame& g, DeadlockConvention convention,
                                 std::vector<std::string>* gadget_names) {
    NodeId sink_for_a = kNoNode;  // entry node (B-owned) for deadlocked A-nodes
    NodeId sink_for_b = kNoNode;  // entry node (A-owned) for deadlocked B-nodes
    const std::size_t n = g.node_count();
    const bool loses = convention == DeadlockConvention::DeadlockedPlayerLoses;
    for (NodeId v = 0; v < n; ++v) {
      if (!g.edges[v].empty()) continue;
      if (g.owner[v] == Player::A) {
        if (sink_for_a == kNoNode) {
          NodeId b = g.add_node(Player::B, false);
          NodeId a = g.add_node(Player::A, loses);
          g.add_edge(b, a);
          g.add_edge(a, b);
          if (gadget_names) {
            gadget_names->push_back(loses ? "deadlock:A-stuck:B-turn" : "deadlock:safe:B-turn");
            gadget_names->push_back(loses ? "deadlock:A-stuck:final" : "deadlock:safe:A-turn");
          }
          sink_for_a = b;
        }
        g.add_edge(v, sink_for_a);
      } else {
        if (sink_for_b == kNoNode) {
          NodeId a = g.add_node(Player::A, false);
          NodeId b = g.add_node(Player::B, false);
          g.add_edge(a, b);
          g.add_edge(b, a);
          if (gadget_names) {
            gadget_names->push_back("deadlock:B-stuck:A-turn");
            gadget_names->push_back("deadlock:B-stuck:B-turn");
          }
          sink_for_b = a;
        }
        g.add_edge(v, sink_for_b);
      }
    }
  }

  static constexpr std::size_t kDefaultNodeBudget = 4u << 20;

 private:
  NodeId intern_existing(const Key& key, Player to_move) const {
    auto it = ids_.find(std::make_pair(key, to_move));
    if (it == ids_.end()) throw InvalidArgument("arena: initial node was never interned");
    return it->second;
  }

  std::map<std::pair<Key, Player>, NodeId> ids_;
  std::vector<bool> final_;
  std::vector<std::vector<NodeId>> succs_;
  std::vector<std::pair<Key, Player>> worklist_;
  NodeId next_id_ = 0;
  std::size_t node_budget_;
};

/// Sidecar index: one line per node mapping NodeId to the printed key.
template <typename Key, typename PrintFn>
std::string dump_index(const BuiltArena<Key>& arena, PrintFn&& print_key) {
  std::ostringstream os;
  os << "index v1 " << arena.game.node_count() << '\n';
  for (NodeId v = 0; v < arena.game.node_count(); ++v) {
    os << v << '\t' << player_letter(arena.game.owner[v]) << '\t';
    if (v < arena.real_nodes)
      os << print_key(arena.index[v].first);
    else
      os << arena.gadget_names[v - arena.real_nodes];
    os << '\n';
  }
  return os.str();
}

}  // namespace tsogame

#endif  // TSOGAME_ARENA_HPP_
