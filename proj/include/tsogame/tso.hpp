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

#ifndef TSOGAME_TSO_HPP_
#define TSOGAME_TSO_HPP_

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tsogame/program.hpp"

namespace tsogame {

struct BufferEntry {
  VarId var;
  Value val;

  bool operator==(const BufferEntry&) const = default;
  auto operator<=>(const BufferEntry&) const = default;
};

/// A TSO configuration: global state, one FIFO store buffer per process,
/// shared memory. Buffers are stored oldest-first: writes append at the
/// back, updates remove the front, read-own-write inspects the back.
struct Configuration {
  std::vector<StateId> global;
  std::vector<std::vector<BufferEntry>> buffers;
  std::vector<Value> memory;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;

  std::size_t hash() const {
    std::size_t h = 0x51ed270b;
    for (StateId s : global) combine_hash(static_cast<std::size_t>(s), &h);
    for (const auto& buf : buffers) {
      combine_hash(0xb0f + buf.size(), &h);
      for (const BufferEntry& e : buf) {
        combine_hash(static_cast<std::size_t>(e.var), &h);
        combine_hash(static_cast<std::size_t>(e.val), &h);
      }
    }
    for (Value v : memory) combine_hash(static_cast<std::size_t>(v), &h);
    return h;
  }
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

inline Configuration initial_configuration(const Program& p) {
  Configuration c;
  c.global = p.initial_global;
  c.buffers.assign(p.processes.size(), {});
  c.memory = p.initial_memory;
  return c;
}

/// A transition label. Instruction labels identify the program edge (not
/// just the instruction) so that step is a function of (configuration,
/// label) even when two edges at a state carry the same instruction.
struct Label {
  enum class Kind : uint8_t { Instr, Update };

  Kind kind = Kind::Update;
  ProcId proc = 0;
  int32_t transition = -1;  // index into processes[proc].transitions; Instr only

  static Label instr(ProcId p, int32_t t) { return {Kind::Instr, p, t}; }
  static Label update(ProcId p) { return {Kind::Update, p, -1}; }

  bool operator==(const Label&) const = default;
};

inline bool well_formed(const Program& p, const Configuration& c) {
  if (c.global.size() != p.processes.size() || c.buffers.size() != p.processes.size() ||
      c.memory.size() != p.vars.size())
    return false;
  for (ProcId i = 0; i < p.proc_count(); ++i) {
    if (c.global[i] < 0 || c.global[i] >= p.processes[i].state_count()) return false;
    for (const BufferEntry& e : c.buffers[i])
      if (e.var < 0 || e.var >= p.var_count() || e.val < 0 || e.val >= p.domain_size())
        return false;
  }
  for (Value v : c.memory)
    if (v < 0 || v >= p.domain_size()) return false;
  return true;
}

/// Value the process would read from x: newest pending own write on x if
/// any, otherwise memory.
inline Value readable_value(const Configuration& c, ProcId proc, VarId x) {
  const auto& buf = c.buffers[proc];
  for (auto it = buf.rbegin(); it != buf.rend(); ++it)
    if (it->var == x) return it->val;
  return c.memory[x];
}

inline bool has_buffered_write_on(const Configuration& c, ProcId proc, VarId x) {
  const auto& buf = c.buffers[proc];
  return std::any_of(buf.begin(), buf.end(), [x](const BufferEntry& e) { return e.var == x; });
}

inline bool instr_enabled(const Configuration& c, ProcId proc, const ProcessTransition& t) {
  if (c.global[proc] != t.src) return false;
  switch (t.instr.kind) {
    case Instruction::Kind::Write:
    case Instruction::Kind::Skip:
      return true;
    case Instruction::Kind::Fence:
      return c.buffers[proc].empty();
    case Instruction::Kind::Read:
      return readable_value(c, proc, t.instr.var) == t.instr.val;
  }
  return false;
}

/// All labels whose rule premises hold at c, instruction and update labels alike.
inline std::vector<Label> enabled(const Program& p, const Configuration& c) {
  if (!well_formed(p, c)) throw InvalidArgument("enabled: configuration malformed for program");
  std::vector<Label> out;
  for (ProcId i = 0; i < p.proc_count(); ++i) {
    const Process& proc = p.processes[i];
    for (int32_t ti = 0; ti < static_cast<int32_t>(proc.transitions.size()); ++ti)
      if (instr_enabled(c, i, proc.transitions[ti])) out.push_back(Label::instr(i, ti));
    if (!c.buffers[i].empty()) out.push_back(Label::update(i));
  }
  return out;
}

inline bool is_enabled(const Program& p, const Configuration& c, const Label& l) {
  if (l.proc < 0 || l.proc >= p.proc_count()) return false;
  if (l.kind == Label::Kind::Update) return !c.buffers[l.proc].empty();
  if (l.transition < 0 ||
      l.transition >= static_cast<int32_t>(p.processes[l.proc].transitions.size()))
    return false;
  return instr_enabled(c, l.proc, p.processes[l.proc].transitions[l.transition]);
}

/// The unique successor under l. Read/Skip/Fence only change the local
/// state; Write appends to the back of the buffer; Update commits the
/// front entry to memory.
inline Configuration step(const Program& p, const Configuration& c, const Label& l) {
  if (!is_enabled(p, c, l)) throw InvalidArgument("step: label not enabled");
  Configuration out = c;
  if (l.kind == Label::Kind::Update) {
    BufferEntry e = out.buffers[l.proc].front();
    out.buffers[l.proc].erase(out.buffers[l.proc].begin());
    out.memory[e.var] = e.val;
    return out;
  }
  const ProcessTransition& t = p.processes[l.proc].transitions[l.transition];
  out.global[l.proc] = t.dst;
  if (t.instr.kind == Instruction::Kind::Write)
    out.buffers[l.proc].push_back({t.instr.var, t.instr.val});
  return out;
}

/// Reflexive-transitive closure of the per-process update labels: every
/// configuration reachable by committing buffered writes in any
/// interleaving, including c itself. Sorted, duplicate-free.
inline std::vector<Configuration> update_closure(const Program& p, const Configuration& c) {
  if (!well_formed(p, c)) throw InvalidArgument("update_closure: configuration malformed");
  std::set<Configuration> seen{c};
  std::deque<const Configuration*> frontier{&*seen.begin()};
  while (!frontier.empty()) {
    const Configuration& cur = *frontier.front();
    frontier.pop_front();
    for (ProcId i = 0; i < p.proc_count(); ++i) {
      if (cur.buffers[i].empty()) continue;
      auto [it, fresh] = seen.insert(step(p, cur, Label::update(i)));
      if (fresh) frontier.push_back(&*it);
    }
  }
  return {seen.begin(), seen.end()};
}

inline std::size_t buffer_size(const Configuration& c) {
  std::size_t n = 0;
  for (const auto& buf : c.buffers) n += buf.size();
  return n;
}

/// The fully drained elements of the update closure. With several
/// processes buffering writes to the same variable the flush result
/// depends on the drain interleaving, so this is a set in general.
inline std::vector<Configuration> full_flush(const Program& p, const Configuration& c) {
  std::vector<Configuration> out;
  for (const Configuration& d : update_closure(p, c))
    if (buffer_size(d) == 0) out.push_back(d);
  return out;
}

inline std::string print_configuration(const Program& p, const Configuration& c) {
  std::ostringstream os;
  os << "S=(";
  for (ProcId i = 0; i < p.proc_count(); ++i)
    os << (i ? "," : "") << p.processes[i].state_names[c.global[i]];
  os << ")";
  for (ProcId i = 0; i < p.proc_count(); ++i) {
    os << " B" << i << "=[";
    for (std::size_t j = 0; j < c.buffers[i].size(); ++j) {
      const BufferEntry& e = c.buffers[i][j];
      os << (j ? " " : "") << p.vars[e.var] << ':' << p.domain[e.val];
    }
    os << "]";
  }
  os << " M=(";
  for (VarId x = 0; x < p.var_count(); ++x)
    os << (x ? "," : "") << p.vars[x] << '=' << p.domain[c.memory[x]];
  os << ")";
  return os.str();
}

}  // namespace tsogame

#endif  // TSOGAME_TSO_HPP_
