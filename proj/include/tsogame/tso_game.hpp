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

#ifndef TSOGAME_TSO_GAME_HPP_
#define TSOGAME_TSO_GAME_HPP_

#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsogame/arena.hpp"
#include "tsogame/tso.hpp"

namespace tsogame {

/// When a player may commit buffered writes relative to her own move.
enum class UpdatePolicy : uint8_t { Never, Before, After, Always };

inline bool can_before(UpdatePolicy p) {
  return p == UpdatePolicy::Before || p == UpdatePolicy::Always;
}

inline bool can_after(UpdatePolicy p) {
  return p == UpdatePolicy::After || p == UpdatePolicy::Always;
}

inline const char* policy_name(UpdatePolicy p) {
  switch (p) {
    case UpdatePolicy::Never: return "never";
    case UpdatePolicy::Before: return "before";
    case UpdatePolicy::After: return "after";
    case UpdatePolicy::Always: return "always";
  }
  return "?";
}

inline std::optional<UpdatePolicy> parse_policy(std::string_view s) {
  if (s == "never") return UpdatePolicy::Never;
  if (s == "before") return UpdatePolicy::Before;
  if (s == "after") return UpdatePolicy::After;
  if (s == "always") return UpdatePolicy::Always;
  return std::nullopt;
}

enum class Group : uint8_t { I, II, III, IV };

inline const char* group_name(Group g) {
  switch (g) {
    case Group::I: return "I";
    case Group::II: return "II";
    case Group::III: return "III";
    case Group::IV: return "IV";
  }
  return "?";
}

/// The decidability group of an update-policy pair. Of the 16 pairs,
/// 7 fall in group I, 1 in II, 7 in III and 1 in IV.
inline Group classify(UpdatePolicy a, UpdatePolicy b) {
  if ((can_after(a) && can_before(b)) || (can_before(a) && can_after(b))) return Group::I;
  if (a == UpdatePolicy::Before && b == UpdatePolicy::Before) return Group::II;
  if (a == UpdatePolicy::Never && b == UpdatePolicy::Never) return Group::IV;
  return Group::III;
}

/// A TSO game instance: program plus final-state set live in the program;
/// everything else parameterizes the arena.
struct GameSpec {
  Program program;
  UpdatePolicy policy_a = UpdatePolicy::Never;
  UpdatePolicy policy_b = UpdatePolicy::Never;
  Configuration initial;
  Player first_mover = Player::B;
  DeadlockConvention deadlock = DeadlockConvention::DeadlockedPlayerLoses;
  std::optional<std::size_t> buffer_bound;

  UpdatePolicy policy_of(Player p) const { return p == Player::A ? policy_a : policy_b; }
};

inline GameSpec make_spec(Program program, UpdatePolicy a, UpdatePolicy b) {
  GameSpec s;
  s.initial = initial_configuration(program);
  s.program = std::move(program);
  s.policy_a = a;
  s.policy_b = b;
  return s;
}

inline bool is_final_config(const Program& p, const Configuration& c) {
  for (auto [proc, state] : p.final_states)
    if (c.global[proc] == state) return true;
  return false;
}

using TsoArena = BuiltArena<Configuration>;

namespace detail {

/// Enumerate the landings of all game moves from c under the given policy:
/// optional before-updates, exactly one instruction edge, optional
/// after-updates. Landings are deduplicated.
template <typename Fn>
void for_each_move(const Program& p, const Configuration& c, UpdatePolicy policy, Fn&& emit) {
  std::vector<Configuration> pre;
  if (can_before(policy))
    pre = update_closure(p, c);
  else
    pre.push_back(c);

  std::set<Configuration> landings;
  for (const Configuration& u : pre) {
    for (ProcId i = 0; i < p.proc_count(); ++i) {
      const Process& proc = p.processes[i];
      for (int32_t ti = 0; ti < static_cast<int32_t>(proc.transitions.size()); ++ti) {
        if (!instr_enabled(u, i, proc.transitions[ti])) continue;
        Configuration mid = step(p, u, Label::instr(i, ti));
        if (can_after(policy)) {
          for (Configuration& v : update_closure(p, mid)) landings.insert(std::move(v));
        } else {
          landings.insert(std::move(mid));
        }
      }
    }
  }
  for (const Configuration& v : landings) emit(v);
}

}  // namespace detail

/// Build the explicit safety game induced by the spec, restricted to
/// configurations with at most buffer_bound buffered messages in total.
/// Moves whose landing exceeds the bound are omitted; the initial
/// configuration is materialized regardless of its size. Final nodes are
/// the A-owned nodes with some process in a final local state.
inline TsoArena build_arena(const GameSpec& spec,
                            std::size_t node_budget = ArenaBuilder<Configuration>::kDefaultNodeBudget) {
  if (!spec.buffer_bound)
    throw InvalidArgument("build_arena: explicit construction requires a buffer bound");
  if (!well_formed(spec.program, spec.initial))
    throw InvalidArgument("build_arena: initial configuration malformed for program");
  const Program& p = spec.program;
  const std::size_t bound = *spec.buffer_bound;

  ArenaBuilder<Configuration> builder(node_budget);
  auto final_of = [&p](const Configuration& c, Player to_move) {
    return to_move == Player::A && is_final_config(p, c);
  };
  builder.intern(spec.initial, spec.first_mover, final_of(spec.initial, spec.first_mover));

  while (builder.has_work()) {
    auto [c, mover] = builder.take_work();
    NodeId src = builder.id_of(c, mover);
    Player next = opponent(mover);
    detail::for_each_move(p, c, spec.policy_of(mover), [&](const Configuration& v) {
      if (buffer_size(v) > bound) return;
      builder.add_edge(src, builder.intern(v, next, final_of(v, next)));
    });
  }
  return builder.finish(spec.initial, spec.first_mover, spec.deadlock);
}

}  // namespace tsogame

#endif  // TSOGAME_TSO_GAME_HPP_
