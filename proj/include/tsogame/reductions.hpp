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

#ifndef TSOGAME_REDUCTIONS_HPP_
#define TSOGAME_REDUCTIONS_HPP_

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tsogame/tso_game.hpp"
#include "tsogame/view.hpp"

namespace tsogame {

/// Requesting a decision for a group III variant without a buffer bound.
class UndecidableVariant : public std::runtime_error {
 public:
  UndecidableVariant(UpdatePolicy a, UpdatePolicy b)
      : std::runtime_error(std::string("the (") + policy_name(a) + ", " + policy_name(b) +
                           ") game is in group III; its safety problem is undecidable and no "
                           "bound was given") {}
};

/// In group I, X is the player updating after her turn and Y the one
/// updating before; when both qualify the tie goes to A.
inline Player group1_player_x(const GameSpec& spec) {
  return can_after(spec.policy_a) && can_before(spec.policy_b) ? Player::A : Player::B;
}

/// Finite group I arena: Y-owned nodes carry at most one buffered message
/// (the initial node is kept whatever its size) and X-owned nodes are the
/// successors of kept Y-nodes under the unrestricted edge relation, so up
/// to two messages. Edges are the restriction of the full game's edges.
inline TsoArena reduce_group1(const GameSpec& spec) {
  if (classify(spec.policy_a, spec.policy_b) != Group::I)
    throw InvalidArgument("reduce_group1: spec is not in group I");
  const Program& p = spec.program;
  const Player x = group1_player_x(spec);

  ArenaBuilder<Configuration> builder;
  auto final_of = [&p](const Configuration& c, Player to_move) {
    return to_move == Player::A && is_final_config(p, c);
  };
  auto keep = [&](const Configuration& c, Player to_move) {
    if (to_move == x) return true;  // post of a kept Y-node, by construction
    if (buffer_size(c) <= 1) return true;
    return to_move == spec.first_mover && c == spec.initial;
  };

  builder.intern(spec.initial, spec.first_mover, final_of(spec.initial, spec.first_mover));
  while (builder.has_work()) {
    auto [c, mover] = builder.take_work();
    NodeId src = builder.id_of(c, mover);
    Player next = opponent(mover);
    detail::for_each_move(p, c, spec.policy_of(mover), [&](const Configuration& v) {
      if (!keep(v, next)) return;
      builder.add_edge(src, builder.intern(v, next, final_of(v, next)));
    });
  }
  return builder.finish(spec.initial, spec.first_mover, spec.deadlock);
}

/// Bound for the group II arena: as many messages as the initial
/// configuration carries, but at least one.
inline std::size_t group2_bound(const GameSpec& spec) {
  return std::max<std::size_t>(1, buffer_size(spec.initial));
}

/// Finite group II arena: every node (either owner) carries at most
/// group2_bound messages; edges and final set are restrictions. This is
/// exactly the bounded arena at that bound.
inline TsoArena reduce_group2(const GameSpec& spec) {
  if (classify(spec.policy_a, spec.policy_b) != Group::II)
    throw InvalidArgument("reduce_group2: spec is not in group II");
  GameSpec bounded = spec;
  bounded.buffer_bound = group2_bound(spec);
  return build_arena(bounded);
}

enum class SolveMethod : uint8_t { GroupI, GroupII, GroupIV, BoundedApprox };

inline const char* method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::GroupI: return "GroupI";
    case SolveMethod::GroupII: return "GroupII";
    case SolveMethod::GroupIV: return "GroupIV";
    case SolveMethod::BoundedApprox: return "BoundedApprox";
  }
  return "?";
}

struct TsoSolution {
  SolveMethod method = SolveMethod::BoundedApprox;
  Player winner = Player::A;
  Regions regions;
  PositionalStrategy strategy_a;
  PositionalStrategy strategy_b;
  NodeId initial = kNoNode;
  std::variant<TsoArena, ViewArena> arena;

  const SafetyGame& game() const {
    return std::holds_alternative<TsoArena>(arena) ? std::get<TsoArena>(arena).game
                                                   : std::get<ViewArena>(arena).game;
  }
};

/// Decide the safety game by dispatching on the group: I and II solve the
/// finite reduced arenas, IV solves the view game. Group III is refused
/// unless the caller supplies an explicit bound, in which case the bounded
/// arena is solved and flagged BoundedApprox — exploration tooling with no
/// soundness claim in either direction.
inline TsoSolution solve_tso(const GameSpec& spec) {
  TsoSolution out;
  switch (classify(spec.policy_a, spec.policy_b)) {
    case Group::I:
      out.method = SolveMethod::GroupI;
      out.arena = reduce_group1(spec);
      break;
    case Group::II:
      out.method = SolveMethod::GroupII;
      out.arena = reduce_group2(spec);
      break;
    case Group::IV:
      out.method = SolveMethod::GroupIV;
      out.arena = build_view_game(spec);
      break;
    case Group::III:
      if (!spec.buffer_bound) throw UndecidableVariant(spec.policy_a, spec.policy_b);
      out.method = SolveMethod::BoundedApprox;
      out.arena = build_arena(spec);
      break;
  }
  const SafetyGame& g = out.game();
  out.initial = std::holds_alternative<TsoArena>(out.arena) ? std::get<TsoArena>(out.arena).initial
                                                            : std::get<ViewArena>(out.arena).initial;
  out.regions = solve(g);
  auto [sa, sb] = extract_strategies(g, out.regions);
  out.strategy_a = std::move(sa);
  out.strategy_b = std::move(sb);
  out.winner = out.regions.win_b[out.initial] ? Player::B : Player::A;
  return out;
}

}  // namespace tsogame

#endif  // TSOGAME_REDUCTIONS_HPP_
