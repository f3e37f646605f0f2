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

#ifndef TSOGAME_VIEW_HPP_
#define TSOGAME_VIEW_HPP_

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsogame/tso_game.hpp"

namespace tsogame {

/// What a process can observe of a configuration: the global state, the
/// value each process would read from each variable, and whether each
/// process could execute a fence. In the no-update game this determines
/// the enabled transitions completely.
struct View {
  std::vector<StateId> global;
  std::vector<Value> values;    // proc-major: values[proc * nvars + var]
  std::vector<bool> fence_ok;

  bool operator==(const View&) const = default;
  auto operator<=>(const View&) const = default;
};

inline View view_of(const Program& p, const Configuration& c) {
  if (!well_formed(p, c)) throw InvalidArgument("view_of: configuration malformed");
  View v;
  v.global = c.global;
  v.values.resize(static_cast<std::size_t>(p.proc_count()) * p.var_count());
  v.fence_ok.resize(p.proc_count());
  for (ProcId i = 0; i < p.proc_count(); ++i) {
    for (VarId x = 0; x < p.var_count(); ++x)
      v.values[static_cast<std::size_t>(i) * p.var_count() + x] = readable_value(c, i, x);
    v.fence_ok[i] = c.buffers[i].empty();
  }
  return v;
}

inline bool view_instr_enabled(const Program& p, const View& v, ProcId proc,
                               const ProcessTransition& t) {
  if (v.global[proc] != t.src) return false;
  switch (t.instr.kind) {
    case Instruction::Kind::Write:
    case Instruction::Kind::Skip:
      return true;
    case Instruction::Kind::Fence:
      return v.fence_ok[proc];
    case Instruction::Kind::Read:
      return v.values[static_cast<std::size_t>(proc) * p.var_count() + t.instr.var] == t.instr.val;
  }
  return false;
}

/// Apply one instruction to a view, if enabled there. A write pins the
/// writer's readable value and disables her fence; reads, skips and fences
/// only change the local state.
inline std::optional<View> view_step(const Program& p, const View& v, ProcId proc,
                                     const Instruction& instr) {
  for (int32_t ti = 0; ti < static_cast<int32_t>(p.processes[proc].transitions.size()); ++ti) {
    const ProcessTransition& t = p.processes[proc].transitions[ti];
    if (!(t.instr == instr) || !view_instr_enabled(p, v, proc, t)) continue;
    View out = v;
    out.global[proc] = t.dst;
    if (instr.kind == Instruction::Kind::Write) {
      out.values[static_cast<std::size_t>(proc) * p.var_count() + instr.var] = instr.val;
      out.fence_ok[proc] = false;
    }
    return out;
  }
  return std::nullopt;
}

inline bool is_final_view(const Program& p, const View& v) {
  for (auto [proc, state] : p.final_states)
    if (v.global[proc] == state) return true;
  return false;
}

using ViewArena = BuiltArena<View>;

/// Build the finite game played on views. Only meaningful when neither
/// player can update (group IV); enforced as a precondition.
inline ViewArena build_view_game(const GameSpec& spec) {
  if (classify(spec.policy_a, spec.policy_b) != Group::IV)
    throw InvalidArgument("build_view_game: both update policies must be 'never'");
  const Program& p = spec.program;
  View v0 = view_of(p, spec.initial);

  ArenaBuilder<View> builder;
  auto final_of = [&p](const View& v, Player to_move) {
    return to_move == Player::A && is_final_view(p, v);
  };
  builder.intern(v0, spec.first_mover, final_of(v0, spec.first_mover));
  while (builder.has_work()) {
    auto [v, mover] = builder.take_work();
    NodeId src = builder.id_of(v, mover);
    Player next = opponent(mover);
    for (ProcId i = 0; i < p.proc_count(); ++i) {
      for (const ProcessTransition& t : p.processes[i].transitions) {
        if (!view_instr_enabled(p, v, i, t)) continue;
        View out = v;
        out.global[i] = t.dst;
        if (t.instr.kind == Instruction::Kind::Write) {
          out.values[static_cast<std::size_t>(i) * p.var_count() + t.instr.var] = t.instr.val;
          out.fence_ok[i] = false;
        }
        builder.add_edge(src, builder.intern(out, next, final_of(out, next)));
      }
    }
  }
  return builder.finish(v0, spec.first_mover, spec.deadlock);
}

/// True iff no cycle of any process graph contains a write. Along any play
/// of such a program each write edge fires at most once, so the raw
/// no-update arena is finite.
inline bool write_acyclic(const Program& p) {
  for (const Process& proc : p.processes) {
    for (const ProcessTransition& w : proc.transitions) {
      if (w.instr.kind != Instruction::Kind::Write) continue;
      // A cycle through the write edge exists iff its source is reachable
      // from its destination.
      std::vector<bool> seen(proc.state_names.size(), false);
      std::vector<StateId> stack{w.dst};
      seen[w.dst] = true;
      while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        if (s == w.src) return false;
        for (const ProcessTransition& t : proc.transitions)
          if (t.src == s && !seen[t.dst]) {
            seen[t.dst] = true;
            stack.push_back(t.dst);
          }
      }
    }
  }
  return true;
}

inline std::size_t write_edge_total(const Program& p) {
  std::size_t n = 0;
  for (const Process& proc : p.processes)
    for (const ProcessTransition& t : proc.transitions)
      n += t.instr.kind == Instruction::Kind::Write;
  return n;
}

inline std::string print_view(const Program& p, const View& v) {
  std::ostringstream os;
  os << "S=(";
  for (ProcId i = 0; i < p.proc_count(); ++i)
    os << (i ? "," : "") << p.processes[i].state_names[v.global[i]];
  os << ") V=(";
  for (ProcId i = 0; i < p.proc_count(); ++i)
    for (VarId x = 0; x < p.var_count(); ++x)
      os << (i + x ? " " : "") << i << ':' << p.vars[x] << '='
         << p.domain[v.values[static_cast<std::size_t>(i) * p.var_count() + x]];
  os << ") F=(";
  for (ProcId i = 0; i < p.proc_count(); ++i) os << (i ? "," : "") << (v.fence_ok[i] ? 't' : 'f');
  os << ")";
  return os.str();
}

}  // namespace tsogame

#endif  // TSOGAME_VIEW_HPP_
