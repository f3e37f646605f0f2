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

#ifndef TSOGAME_PCS_COMPILER_HPP_
#define TSOGAME_PCS_COMPILER_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tsogame/pcs.hpp"
#include "tsogame/reductions.hpp"

namespace tsogame {

// Compilation of a perfect channel system into an A-TSO game (player A
// updates always, player B never). Process p1 simulates the control flow
// and keeps the channel in its store buffer, p2 rotates committed channel
// messages from x_w to x_r so p1 can receive them, p3 turns deadlocks into
// losses for the stuck player.
//
// Player A is steered with two edge gadgets:
//   - trap: a state s' with an extra skip edge into a final state. If A
//     moves into s' she loses (B takes the edge); if B moves into s', A
//     must move p2/p1 out of s' at once or B takes the edge anyway. Trap
//     states therefore both forbid A an edge and force her response.
//   - catch: rd(y,1) edges into the final state "catch", placed exactly at
//     the p2 states where, with B to move, memory y is 0 unless A has
//     committed a <y,1> message outside its sanctioned slot.
//
// A send appends <x_w,m><y,1> to p1's buffer. A receive runs the rotation:
// p2 reads the committed head from x_w, copies it to x_r, resets x_w,
// observes exactly one <y,1> commit, resets y and x_r, and fences twice so
// that A has to drain p2's own buffered writes at fixed points. p1 reads
// the rotated value from x_r and is then blocked until x_r returns to bot,
// which makes a second receive without a fresh rotation impossible.
//
// p2's writes are themselves buffered; the two fences (d4 and d9) are the
// points where A is forced to commit them. This is the main
// reconstruction choice, pinned down by probe_gadgets.

struct CompiledOp {
  ChanOp op;
  StateId mid = -1;    // send/nop intermediate, or the receive's intent state
  StateId got = -1;    // receive only: state after reading the message
};

struct CompiledGame {
  GameSpec spec;
  Pcs source;
  ChanStateId target = 0;

  // Bookkeeping for the harness.
  std::vector<StateId> pcs_state_to_p1;       // indexed by ChanStateId
  std::vector<CompiledOp> ops;                // indexed like source.transitions
  std::map<std::string, std::pair<ProcId, StateId>> markers;
  std::vector<Value> msg_value;               // MsgId -> domain value
  Value val_zero = -1, val_one = -1, val_bot = -1;
  VarId var_xw = 0, var_xr = 1, var_y = 2;

  const Program& program() const { return spec.program; }

  std::pair<ProcId, StateId> marker(const std::string& name) const {
    auto it = markers.find(name);
    if (it == markers.end()) throw InvalidArgument("unknown marker " + name);
    return it->second;
  }
};

namespace detail {

inline std::string fresh_name(std::string base, const std::vector<std::string>& taken) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
  return base;
}

inline StateId add_state(Process* proc, std::string base) {
  proc->state_names.push_back(fresh_name(std::move(base), proc->state_names));
  return proc->state_count() - 1;
}

}  // namespace detail

/// Compile a channel system and target state into an A-TSO game spec.
/// Player B wins the compiled game by steering the simulation into the
/// target state (or by catching A breaking the rotation protocol).
inline CompiledGame compile(const Pcs& l, ChanStateId target) {
  if (target < 0 || target >= l.state_count()) throw InvalidArgument("compile: unknown target state");
  CompiledGame cg;
  cg.source = l;
  cg.target = target;

  Program& p = cg.spec.program;
  for (const std::string& m : l.message_names)
    p.domain.push_back(detail::fresh_name(m, p.domain));
  for (MsgId m = 0; m < static_cast<MsgId>(l.message_names.size()); ++m) cg.msg_value.push_back(m);
  p.domain.push_back(detail::fresh_name("0", p.domain));
  p.domain.push_back(detail::fresh_name("1", p.domain));
  p.domain.push_back(detail::fresh_name("bot", p.domain));
  cg.val_zero = p.domain_size() - 3;
  cg.val_one = p.domain_size() - 2;
  cg.val_bot = p.domain_size() - 1;

  p.vars = {"x_w", "x_r", "y"};
  p.initial_memory = {cg.val_bot, cg.val_bot, cg.val_zero};

  // p1: control flow and channel. PCS states come first, so their ids agree.
  Process p1;
  p1.name = "p1";
  for (const std::string& q : l.state_names) detail::add_state(&p1, q);
  for (ChanStateId q = 0; q < l.state_count(); ++q) cg.pcs_state_to_p1.push_back(q);
  StateId p1_win = detail::add_state(&p1, ".pwin");
  p1.transitions.push_back({p1_win, Instruction::skip(), p1_win});

  for (std::size_t i = 0; i < l.transitions.size(); ++i) {
    const ChanTransition& t = l.transitions[i];
    CompiledOp op;
    op.op = t.op;
    switch (t.op.kind) {
      case ChanOp::Kind::Send: {
        op.mid = detail::add_state(&p1, ".snd" + std::to_string(i));
        p1.transitions.push_back({t.src, Instruction::write(cg.var_xw, cg.msg_value[t.op.msg]), op.mid});
        p1.transitions.push_back({op.mid, Instruction::write(cg.var_y, cg.val_one), t.dst});
        p1.transitions.push_back({op.mid, Instruction::skip(), p1_win});  // trap
        break;
      }
      case ChanOp::Kind::Nop: {
        op.mid = detail::add_state(&p1, ".nop" + std::to_string(i));
        p1.transitions.push_back({t.src, Instruction::skip(), op.mid});
        p1.transitions.push_back({op.mid, Instruction::skip(), t.dst});
        p1.transitions.push_back({op.mid, Instruction::skip(), p1_win});  // trap
        break;
      }
      case ChanOp::Kind::Recv: {
        op.mid = detail::add_state(&p1, ".ask" + std::to_string(i));
        op.got = detail::add_state(&p1, ".got" + std::to_string(i));
        p1.transitions.push_back({t.src, Instruction::read(cg.var_y, cg.val_one), op.mid});
        p1.transitions.push_back(
            {op.mid, Instruction::read(cg.var_xr, cg.msg_value[t.op.msg]), op.got});
        p1.transitions.push_back({op.got, Instruction::read(cg.var_xr, cg.val_bot), t.dst});
        break;
      }
    }
    cg.ops.push_back(op);
  }

  // p2: the rotation machine.
  Process p2;
  p2.name = "p2";
  StateId r0 = detail::add_state(&p2, "r0");
  std::vector<StateId> d1(l.message_names.size());
  for (MsgId m = 0; m < static_cast<MsgId>(l.message_names.size()); ++m)
    d1[m] = detail::add_state(&p2, "d1_" + l.message_names[m]);
  StateId d2 = detail::add_state(&p2, "d2");
  StateId d3 = detail::add_state(&p2, "d3");
  StateId d4 = detail::add_state(&p2, "d4");
  StateId d5 = detail::add_state(&p2, "d5");
  StateId d6 = detail::add_state(&p2, "d6");
  StateId d7 = detail::add_state(&p2, "d7");
  StateId d8 = detail::add_state(&p2, "d8");
  StateId d9 = detail::add_state(&p2, "d9");
  StateId d10 = detail::add_state(&p2, "d10");
  StateId p2_catch = detail::add_state(&p2, "catch");
  StateId p2_punish = detail::add_state(&p2, "punish");

  auto rd = [](VarId x, Value v) { return Instruction::read(x, v); };
  auto wr = [](VarId x, Value v) { return Instruction::write(x, v); };
  auto trap = [&p2, p2_punish](StateId s) {
    p2.transitions.push_back({s, Instruction::skip(), p2_punish});
  };
  auto catch_at = [&](StateId s) {
    p2.transitions.push_back({s, rd(cg.var_y, cg.val_one), p2_catch});
  };

  for (MsgId m = 0; m < static_cast<MsgId>(l.message_names.size()); ++m) {
    p2.transitions.push_back({r0, rd(cg.var_xw, cg.msg_value[m]), d1[m]});
    p2.transitions.push_back({d1[m], wr(cg.var_xr, cg.msg_value[m]), d2});
    catch_at(d1[m]);
  }
  catch_at(r0);
  p2.transitions.push_back({d2, rd(cg.var_y, cg.val_zero), d3});
  trap(d2);
  p2.transitions.push_back({d3, wr(cg.var_xw, cg.val_bot), d4});
  catch_at(d3);
  p2.transitions.push_back({d4, Instruction::fence(), d5});
  trap(d4);
  p2.transitions.push_back({d5, rd(cg.var_y, cg.val_one), d6});
  catch_at(d5);
  p2.transitions.push_back({d6, wr(cg.var_y, cg.val_zero), d7});
  p2.transitions.push_back({d7, rd(cg.var_y, cg.val_zero), d8});
  trap(d7);
  p2.transitions.push_back({d8, wr(cg.var_xr, cg.val_bot), d9});
  p2.transitions.push_back({d9, Instruction::fence(), d10});
  trap(d9);
  p2.transitions.push_back({d10, rd(cg.var_xw, cg.val_bot), r0});
  for (MsgId m = 0; m < static_cast<MsgId>(l.message_names.size()); ++m)
    p2.transitions.push_back({d10, rd(cg.var_xw, cg.msg_value[m]), p2_catch});
  p2.transitions.push_back({p2_catch, Instruction::skip(), p2_catch});
  p2.transitions.push_back({p2_punish, Instruction::skip(), p2_punish});

  // p3: deadlock arbiter.
  Process p3;
  p3.name = "p3";
  StateId z0 = detail::add_state(&p3, "z0");
  StateId z1 = detail::add_state(&p3, "z1");
  StateId za = detail::add_state(&p3, "zA");
  StateId zb = detail::add_state(&p3, "zB");
  p3.transitions.push_back({z0, Instruction::skip(), z1});
  p3.transitions.push_back({z1, Instruction::skip(), za});
  p3.transitions.push_back({z1, Instruction::skip(), zb});
  p3.transitions.push_back({za, Instruction::skip(), za});
  p3.transitions.push_back({zb, Instruction::skip(), zb});

  p.processes = {std::move(p1), std::move(p2), std::move(p3)};
  p.initial_global = {l.initial, r0, z0};
  p.final_states = {{0, target}, {0, p1_win}, {1, p2_catch}, {1, p2_punish}, {2, zb}};

  cg.markers = {{"rotation_start", {1, r0}}, {"y_check", {1, d2}},
                {"b_win_catch", {1, p2_catch}}, {"p2_punish", {1, p2_punish}},
                {"p1_win", {0, p1_win}}, {"p3_intermediate", {2, z1}},
                {"p3_winA", {2, za}}, {"p3_winB", {2, zb}}};

  cg.spec.policy_a = UpdatePolicy::Always;
  cg.spec.policy_b = UpdatePolicy::Never;
  cg.spec.first_mover = Player::B;
  cg.spec.initial = initial_configuration(p);
  return cg;
}

/// One game move for the scripted harness: optional update commits around
/// a single instruction edge. Player B never updates.
struct GameMove {
  Player mover = Player::B;
  std::vector<ProcId> pre_updates;
  Label edge;
  std::vector<ProcId> post_updates;
};

namespace detail {

inline Label find_edge(const Program& p, ProcId proc, StateId src, const Instruction& instr,
                       StateId dst) {
  const Process& pr = p.processes[proc];
  for (int32_t ti = 0; ti < static_cast<int32_t>(pr.transitions.size()); ++ti) {
    const ProcessTransition& t = pr.transitions[ti];
    if (t.src == src && t.dst == dst && t.instr == instr) return Label::instr(proc, ti);
  }
  throw InvalidArgument("compiled program lacks the expected edge");
}

}  // namespace detail

/// Configuration-level driver for scripted plays through the compiled
/// game. Verifies turn order and the no-update rule for player B.
class ScriptedPlay {
 public:
  explicit ScriptedPlay(const CompiledGame& cg)
      : cg_(cg), cur_(cg.spec.initial), to_move_(cg.spec.first_mover) {
    trace_.push_back(cur_);
  }

  const Configuration& config() const { return cur_; }
  Player to_move() const { return to_move_; }
  const std::vector<Configuration>& trace() const { return trace_; }
  std::size_t moves() const { return trace_.size() - 1; }

  void apply(const GameMove& mv) {
    if (mv.mover != to_move_) throw InvalidArgument("scripted play: out of turn");
    if (mv.mover == Player::B && (!mv.pre_updates.empty() || !mv.post_updates.empty()))
      throw InvalidArgument("scripted play: player B cannot update");
    Configuration c = cur_;
    for (ProcId i : mv.pre_updates) c = step(cg_.program(), c, Label::update(i));
    c = step(cg_.program(), c, mv.edge);
    for (ProcId i : mv.post_updates) c = step(cg_.program(), c, Label::update(i));
    cur_ = std::move(c);
    to_move_ = opponent(to_move_);
    trace_.push_back(cur_);
  }

  /// Instruction edges the player to move could take right now.
  std::vector<Label> enabled_edges() const {
    std::vector<Label> out;
    for (const Label& lab : enabled(cg_.program(), cur_))
      if (lab.kind == Label::Kind::Instr) out.push_back(lab);
    return out;
  }

  /// Can the player to move perform this instruction edge, commiting
  /// some prefix of updates first if she is allowed to?
  bool a_can_take_after_updates(const Label& edge) const {
    for (const Configuration& u : update_closure(cg_.program(), cur_))
      if (is_enabled(cg_.program(), u, edge)) return true;
    return false;
  }

  /// Does the player to move have a move into a final node? Restricted to
  /// the given process when proc >= 0 (e.g. only p2-local wins).
  bool has_final_move(ProcId proc = -1) const {
    const Program& p = cg_.program();
    std::vector<Configuration> starts =
        to_move_ == Player::A && can_before(cg_.spec.policy_a)
            ? update_closure(p, cur_)
            : std::vector<Configuration>{cur_};
    for (const Configuration& u : starts)
      for (const Label& lab : enabled(p, u)) {
        if (lab.kind != Label::Kind::Instr) continue;
        if (proc >= 0 && lab.proc != proc) continue;
        if (is_final_config(p, step(p, u, lab))) return true;
      }
    return false;
  }

  bool in_final_node() const {
    return to_move_ == Player::A && is_final_config(cg_.program(), cur_);
  }

 private:
  const CompiledGame& cg_;
  Configuration cur_;
  Player to_move_;
  std::vector<Configuration> trace_;
};

namespace detail {

/// Scripted cooperative moves realizing one channel operation. B drives
/// the simulation, A commits exactly the updates the protocol owes.
inline std::vector<GameMove> op_script(const CompiledGame& cg, int32_t transition) {
  const Program& p = cg.program();
  const ChanTransition& t = cg.source.transitions[transition];
  const CompiledOp& op = cg.ops[transition];
  const ProcId kP1 = 0, kP2 = 1;
  StateId src = cg.pcs_state_to_p1[t.src];
  StateId dst = cg.pcs_state_to_p1[t.dst];
  auto edge = [&](ProcId proc, StateId s, Instruction i, StateId d) {
    return detail::find_edge(p, proc, s, i, d);
  };

  std::vector<GameMove> mv;
  switch (t.op.kind) {
    case ChanOp::Kind::Nop:
      mv.push_back({Player::B, {}, edge(kP1, src, Instruction::skip(), op.mid), {}});
      mv.push_back({Player::A, {}, edge(kP1, op.mid, Instruction::skip(), dst), {}});
      return mv;
    case ChanOp::Kind::Send: {
      Value m = cg.msg_value[t.op.msg];
      mv.push_back({Player::B, {}, edge(kP1, src, Instruction::write(cg.var_xw, m), op.mid), {}});
      mv.push_back({Player::A, {}, edge(kP1, op.mid, Instruction::write(cg.var_y, cg.val_one), dst), {}});
      return mv;
    }
    case ChanOp::Kind::Recv: {
      Value m = cg.msg_value[t.op.msg];
      auto [_, r0] = cg.marker("rotation_start");
      StateId d1 = *p.processes[kP2].state_id("d1_" + cg.source.message_names[t.op.msg]);
      StateId d2 = *p.processes[kP2].state_id("d2");
      StateId d3 = *p.processes[kP2].state_id("d3");
      StateId d4 = *p.processes[kP2].state_id("d4");
      StateId d5 = *p.processes[kP2].state_id("d5");
      StateId d6 = *p.processes[kP2].state_id("d6");
      StateId d7 = *p.processes[kP2].state_id("d7");
      StateId d8 = *p.processes[kP2].state_id("d8");
      StateId d9 = *p.processes[kP2].state_id("d9");
      StateId d10 = *p.processes[kP2].state_id("d10");
      auto rd = [](VarId x, Value v) { return Instruction::read(x, v); };
      auto wrv = [](VarId x, Value v) { return Instruction::write(x, v); };

      mv.push_back({Player::B, {}, edge(kP1, src, rd(cg.var_y, cg.val_one), op.mid), {}});
      mv.push_back({Player::A, {kP1}, edge(kP2, r0, rd(cg.var_xw, m), d1), {}});
      mv.push_back({Player::B, {}, edge(kP2, d1, wrv(cg.var_xr, m), d2), {}});
      mv.push_back({Player::A, {}, edge(kP2, d2, rd(cg.var_y, cg.val_zero), d3), {}});
      mv.push_back({Player::B, {}, edge(kP2, d3, wrv(cg.var_xw, cg.val_bot), d4), {}});
      mv.push_back({Player::A, {kP2, kP2}, edge(kP2, d4, Instruction::fence(), d5), {}});
      mv.push_back({Player::B, {}, edge(kP1, op.mid, rd(cg.var_xr, m), op.got), {}});
      mv.push_back({Player::A, {kP1}, edge(kP2, d5, rd(cg.var_y, cg.val_one), d6), {}});
      mv.push_back({Player::B, {}, edge(kP2, d6, wrv(cg.var_y, cg.val_zero), d7), {}});
      mv.push_back({Player::A, {}, edge(kP2, d7, rd(cg.var_y, cg.val_zero), d8), {}});
      mv.push_back({Player::B, {}, edge(kP2, d8, wrv(cg.var_xr, cg.val_bot), d9), {}});
      mv.push_back({Player::A, {kP2, kP2}, edge(kP2, d9, Instruction::fence(), d10), {}});
      mv.push_back({Player::B, {}, edge(kP1, op.got, rd(cg.var_xr, cg.val_bot), dst), {}});
      mv.push_back({Player::A, {}, edge(kP2, d10, rd(cg.var_xw, cg.val_bot), r0), {}});
      return mv;
    }
  }
  throw InvalidArgument("op_script: bad operation");
}

}  // namespace detail

/// The canonical play replaying a channel-system run: B simulates the
/// run's operations in order, A gives the unique cooperative response.
struct CanonicalPlay {
  Play play;
  TsoArena arena;
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // [first,last] move index per op
  std::vector<MsgId> rotation_trace;  // non-bot values passing through x_r in memory
  std::size_t bound = 0;
};

inline CanonicalPlay canonical_play(const CompiledGame& cg, const PcsRun& run) {
  // Validate the run and find the channel high-water mark.
  PcsConfig pc{cg.source.initial, {}};
  std::size_t high_water = 0;
  for (int32_t ti : run) {
    if (ti < 0 || ti >= static_cast<int32_t>(cg.source.transitions.size()))
      throw InvalidArgument("canonical_play: run refers to an unknown transition");
    auto next = pcs_step(cg.source, pc, cg.source.transitions[ti]);
    if (!next) throw InvalidArgument("canonical_play: run is not a valid run of the source");
    pc = std::move(*next);
    high_water = std::max(high_water, pc.channel.size());
  }

  CanonicalPlay out;
  out.bound = 2 * high_water + 2;  // one <y,1> per channel message, plus p2's two pending writes
  GameSpec bounded = cg.spec;
  bounded.buffer_bound = out.bound;
  out.arena = build_arena(bounded);

  ScriptedPlay sp(cg);
  Value last_xr = cg.spec.initial.memory[cg.var_xr];
  std::optional<std::size_t> first_final;

  auto locate = [&](const Configuration& c, Player to_move) {
    // Every scripted configuration must be a node of the bounded arena.
    NodeId v = out.arena.find(c, to_move);
    if (v == kNoNode)
      throw CapacityError("canonical play left the bounded arena; required bound " +
                              std::to_string(out.bound),
                          out.arena.game.node_count());
    return v;
  };

  auto track = [&]() {
    Value xr = sp.config().memory[cg.var_xr];
    if (xr != last_xr && xr != cg.val_bot && xr < static_cast<Value>(cg.msg_value.size()))
      out.rotation_trace.push_back(static_cast<MsgId>(xr));
    last_xr = xr;
    if (!first_final && sp.in_final_node()) first_final = sp.moves();
  };

  for (int32_t ti : run) {
    std::size_t first = sp.moves() + 1;
    for (const GameMove& mv : detail::op_script(cg, ti)) {
      sp.apply(mv);
      track();
    }
    out.segments.emplace_back(first, sp.moves());
  }

  // Close with B's neutral p3 move so a reached target surfaces as an
  // A-owned final node.
  if (!first_final && pc.state == cg.target) {
    auto [p3, z0] = std::make_pair(ProcId{2}, StateId{0});
    sp.apply({Player::B, {}, detail::find_edge(cg.program(), p3, z0, Instruction::skip(),
                                               cg.marker("p3_intermediate").second), {}});
    track();
  }

  // Map the configuration trace onto arena nodes.
  Player turn = cg.spec.first_mover;
  for (const Configuration& c : sp.trace()) {
    out.play.prefix.push_back(locate(c, turn));
    turn = opponent(turn);
  }
  if (first_final) {
    out.play.verdict = Play::Verdict::BReachedFinal;
    out.play.final_index = *first_final;
  } else {
    out.play.verdict = Play::Verdict::ASurvivedHorizon;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gadget probes: scripted adversarial plays checking that the compiled
// program punishes exactly the protocol violations it is built to punish.
// ---------------------------------------------------------------------------

struct ProbeResult {
  int id = 0;
  std::string name;
  bool applicable = true;  // instance has the shape the scenario needs
  bool pass = false;
  std::string note;
  std::vector<std::string> trace;  // printed configurations of the offending play
};

struct ProbeReport {
  std::vector<ProbeResult> probes;

  bool all_pass() const {
    for (const ProbeResult& r : probes)
      if (r.applicable && !r.pass) return false;
    return true;
  }
};

namespace detail {

/// Shortest run from the initial configuration satisfying pred, searched
/// breadth-first up to `depth` steps.
template <typename Pred>
std::optional<PcsRun> find_run(const Pcs& l, std::size_t depth, Pred&& pred) {
  PcsConfig c0{l.initial, {}};
  if (pred(c0)) return PcsRun{};
  std::map<PcsConfig, std::pair<PcsConfig, int32_t>> parent;
  std::deque<std::pair<PcsConfig, std::size_t>> frontier{{c0, 0}};
  parent.emplace(c0, std::make_pair(c0, -1));
  while (!frontier.empty()) {
    auto [cur, dist] = frontier.front();
    frontier.pop_front();
    if (dist == depth) continue;
    for (int32_t ti = 0; ti < static_cast<int32_t>(l.transitions.size()); ++ti) {
      auto next = pcs_step(l, cur, l.transitions[ti]);
      if (!next || parent.contains(*next)) continue;
      parent.emplace(*next, std::make_pair(cur, ti));
      if (pred(*next)) {
        PcsRun run;
        PcsConfig walk = *next;
        while (true) {
          auto& [pred_cfg, via] = parent.at(walk);
          if (via < 0) break;
          run.push_back(via);
          walk = pred_cfg;
        }
        std::reverse(run.begin(), run.end());
        return run;
      }
      frontier.emplace_back(std::move(*next), dist + 1);
    }
  }
  return std::nullopt;
}

/// Replay a run's canonical scripts; optionally stop mid-way through the
/// last operation after `last_op_moves` of its moves.
inline void drive_canonical(const CompiledGame& cg, ScriptedPlay* sp, const PcsRun& run,
                            std::size_t last_op_moves = SIZE_MAX) {
  for (std::size_t i = 0; i < run.size(); ++i) {
    std::size_t budget = i + 1 == run.size() ? last_op_moves : SIZE_MAX;
    for (const GameMove& mv : op_script(cg, run[i])) {
      if (budget == 0) return;
      sp->apply(mv);
      --budget;
    }
  }
}

inline void record_trace(const CompiledGame& cg, const ScriptedPlay& sp, ProbeResult* r) {
  for (const Configuration& c : sp.trace())
    r->trace.push_back(print_configuration(cg.program(), c));
}

inline GameMove p3_move(const CompiledGame& cg, Player who, const char* from, const char* to,
                        std::vector<ProcId> pre = {}) {
  StateId src = *cg.program().processes[2].state_id(from);
  StateId dst = *cg.program().processes[2].state_id(to);
  return {who, std::move(pre), find_edge(cg.program(), 2, src, Instruction::skip(), dst), {}};
}

}  // namespace detail

/// Probe 1: after sends, A commits past the first <y,1> without a rotation
/// (with two pending sends this loses the first channel message). The
/// catch edge must hand B a final node within two moves.
inline ProbeResult probe_double_update(const CompiledGame& cg) {
  ProbeResult r;
  r.id = 1;
  r.name = "loss by update without rotation";
  auto run2 = detail::find_run(cg.source, 8, [](const PcsConfig& c) { return c.channel.size() >= 2; });
  auto run = run2 ? run2
                  : detail::find_run(cg.source, 8,
                                     [](const PcsConfig& c) { return c.channel.size() >= 1; });
  if (!run) {
    r.applicable = false;
    r.note = "no reachable configuration with a pending send";
    return r;
  }
  ScriptedPlay sp(cg);
  detail::drive_canonical(cg, &sp, *run);
  sp.apply(detail::p3_move(cg, Player::B, "z0", "z1"));
  // Commit <x_w,m1>, <y,1> and, if present, <x_w,m2>: two channel writes
  // with no rotation between them.
  std::vector<ProcId> flush(run2 ? 3 : 2, 0);
  sp.apply(detail::p3_move(cg, Player::A, "z1", "zA", std::move(flush)));
  r.pass = sp.has_final_move(1);
  r.note = r.pass ? (run2 ? "B catches the double channel update in one move"
                          : "B catches the unsanctioned <y,1> update in one move")
                  : "catch edge not enabled";
  detail::record_trace(cg, sp, &r);
  return r;
}

/// Probe 2: A attempts the rotation on her own. She can start it, but the
/// moment she commits <y,1> herself the y-protocol strands her in the
/// trapped copy state and B wins through p2. Without that commit the same
/// position is quiet, so B wins if and only if A initiated the update.
inline ProbeResult probe_solo_rotation(const CompiledGame& cg) {
  ProbeResult r;
  r.id = 2;
  r.name = "solo rotation by A";
  auto run = detail::find_run(cg.source, 8, [](const PcsConfig& c) { return c.channel.size() >= 1; });
  if (!run) {
    r.applicable = false;
    r.note = "no reachable configuration with a pending send";
    return r;
  }
  const Program& p = cg.program();
  MsgId head = -1;
  {
    PcsConfig pc = *pcs_replay(cg.source, {cg.source.initial, {}}, *run);
    head = pc.channel.front();
  }
  StateId r0 = cg.marker("rotation_start").second;
  StateId d1 = *p.processes[1].state_id("d1_" + cg.source.message_names[head]);
  StateId d2 = cg.marker("y_check").second;
  StateId d3 = *p.processes[1].state_id("d3");
  Value m = cg.msg_value[head];

  auto scripted_start = [&](ScriptedPlay& sp) {
    detail::drive_canonical(cg, &sp, *run);
    sp.apply(detail::p3_move(cg, Player::B, "z0", "z1"));
    sp.apply({Player::A, {0}, detail::find_edge(p, 1, r0, Instruction::read(cg.var_xw, m), d1), {}});
    sp.apply({Player::B, {},
              detail::find_edge(p, 1, d1, Instruction::write(cg.var_xr, m), d2), {}});
  };

  // With the <y,1> commit: the y-clean check blocks A and B wins in p2.
  ScriptedPlay hot(cg);
  scripted_start(hot);
  hot.apply(detail::p3_move(cg, Player::A, "z1", "zA", {0}));
  Label y_check_exit = detail::find_edge(p, 1, d2, Instruction::read(cg.var_y, cg.val_zero), d3);
  bool blocked = !hot.a_can_take_after_updates(y_check_exit);
  bool caught = hot.has_final_move(1);

  // Without it: A passes the check and B has no p2 win.
  ScriptedPlay quiet(cg);
  scripted_start(quiet);
  quiet.apply({Player::A, {}, y_check_exit, {}});
  bool no_false_catch = !quiet.has_final_move(1);

  r.pass = blocked && caught && no_false_catch;
  r.note = r.pass ? "B wins through p2 exactly when A initiated the <y,1> update"
                  : "y-protocol asymmetry violated";
  detail::record_trace(cg, hot, &r);
  return r;
}

/// Probe 3: duplication and starvation. Mid-rotation, p1 sits before its
/// x_r-reset read and cannot receive again; and from a state that can only
/// receive on an empty channel, B is forced into p3 where A parks in her
/// winning state.
inline ProbeResult probe_blocked_receive(const CompiledGame& cg) {
  ProbeResult r;
  r.id = 3;
  r.name = "second receive without rotation";
  const Program& p = cg.program();

  // Shortest run ending right before a receive is possible; the receive is
  // then appended and driven up to p1's read of x_r.
  std::optional<PcsRun> to_recv;
  int32_t recv_idx = -1;
  for (int32_t ti = 0; ti < static_cast<int32_t>(cg.source.transitions.size()) && !to_recv; ++ti) {
    const ChanTransition& t = cg.source.transitions[ti];
    if (t.op.kind != ChanOp::Kind::Recv) continue;
    to_recv = detail::find_run(cg.source, 8, [&](const PcsConfig& c) {
      return c.state == t.src && !c.channel.empty() && c.channel.front() == t.op.msg;
    });
    recv_idx = ti;
  }

  bool mid_ok = false;
  if (to_recv) {
    PcsRun run = *to_recv;
    run.push_back(recv_idx);
    ScriptedPlay sp(cg);
    detail::drive_canonical(cg, &sp, run, 7);  // stop right after p1 read x_r
    const CompiledOp& op = cg.ops[recv_idx];
    StateId dst = cg.pcs_state_to_p1[cg.source.transitions[recv_idx].dst];
    Label bot_read = detail::find_edge(
        p, 0, op.got, Instruction::read(cg.var_xr, cg.val_bot), dst);
    mid_ok = sp.config().memory[cg.var_xr] != cg.val_bot &&
             !is_enabled(p, sp.config(), bot_read);
    if (!mid_ok) detail::record_trace(cg, sp, &r);
  }

  auto thirsty = detail::find_run(cg.source, 10, [&](const PcsConfig& c) {
    if (!c.channel.empty() || c.state == cg.target) return false;
    for (const ChanTransition& t : cg.source.transitions)
      if (t.src == c.state && t.op.kind != ChanOp::Kind::Recv) return false;
    return true;
  });

  bool starve_ok = false;
  if (thirsty) {
    ScriptedPlay sp(cg);
    detail::drive_canonical(cg, &sp, *thirsty);
    bool only_p3 = true;
    for (const Label& lab : sp.enabled_edges()) only_p3 &= lab.proc == 2;
    sp.apply(detail::p3_move(cg, Player::B, "z0", "z1"));
    sp.apply(detail::p3_move(cg, Player::A, "z1", "zA"));
    bool never_final = !sp.in_final_node();
    for (int i = 0; i < 12; ++i) {
      sp.apply(detail::p3_move(cg, sp.to_move(), "zA", "zA"));
      never_final &= !sp.in_final_node();
    }
    StateId za = cg.marker("p3_winA").second;
    starve_ok = only_p3 && never_final && sp.config().global[2] == za;
    detail::record_trace(cg, sp, &r);
  }

  if (!to_recv && !thirsty) {
    r.applicable = false;
    r.note = "instance has neither a reachable receive nor a starving state";
    return r;
  }
  r.pass = (!to_recv || mid_ok) && (!thirsty || starve_ok);
  if (!r.pass) {
    r.note = "duplication/starvation guard violated";
  } else {
    if (to_recv) r.note = "p1 blocked until x_r resets";
    if (thirsty) r.note += std::string(to_recv ? "; " : "") + "starved B routed into p3, A wins";
  }
  return r;
}

/// Probe 4: deadlock routing. A stuck player must go through p3 and lose:
/// a starved B ends against zA with no final in sight (probe 3 exhibits
/// this); here, A with no safe p1/p2 move is routed to a B win.
inline ProbeResult probe_deadlock_routing(const CompiledGame& cg) {
  ProbeResult r;
  r.id = 4;
  r.name = "deadlocked player loses via p3";
  const Program& p = cg.program();

  std::optional<PcsRun> run;
  int32_t recv_idx = -1;
  for (int32_t ti = 0; ti < static_cast<int32_t>(cg.source.transitions.size()) && !run; ++ti) {
    const ChanTransition& t = cg.source.transitions[ti];
    if (t.op.kind != ChanOp::Kind::Recv) continue;
    run = detail::find_run(cg.source, 8, [&](const PcsConfig& c) {
      return c.state == t.src && !c.channel.empty() && c.channel.front() == t.op.msg;
    });
    recv_idx = ti;
  }
  if (!run) {
    r.applicable = false;
    r.note = "no reachable receive to set the scene";
    return r;
  }

  const ChanTransition& t = cg.source.transitions[recv_idx];
  const CompiledOp& op = cg.ops[recv_idx];
  MsgId head = t.op.msg;
  Value m = cg.msg_value[head];
  StateId src = cg.pcs_state_to_p1[t.src];
  StateId r0 = cg.marker("rotation_start").second;
  StateId d1 = *p.processes[1].state_id("d1_" + cg.source.message_names[head]);
  StateId d2 = cg.marker("y_check").second;

  ScriptedPlay sp(cg);
  detail::drive_canonical(cg, &sp, *run);
  // B opens a receive; A overcommits <x_w,m><y,1>, then steals p1's read;
  // afterwards she has no p1/p2 move that does not hand B a final node.
  sp.apply({Player::B, {}, detail::find_edge(p, 0, src, Instruction::read(cg.var_y, cg.val_one), op.mid), {}});
  sp.apply({Player::A, {0, 0}, detail::find_edge(p, 1, r0, Instruction::read(cg.var_xw, m), d1), {}});
  sp.apply({Player::B, {}, detail::find_edge(p, 1, d1, Instruction::write(cg.var_xr, m), d2), {}});
  sp.apply({Player::A, {1}, detail::find_edge(p, 0, op.mid, Instruction::read(cg.var_xr, m), op.got), {}});
  sp.apply(detail::p3_move(cg, Player::B, "z0", "z1"));

  // Every p1/p2 move A still has leads straight into a final node for B.
  bool no_safe = true;
  for (const Configuration& u : update_closure(p, sp.config())) {
    for (const Label& lab : enabled(p, u)) {
      if (lab.kind != Label::Kind::Instr || lab.proc == 2) continue;
      Configuration landing = step(p, u, lab);
      bool b_wins_next = false;
      for (const Label& resp : enabled(p, landing)) {
        if (resp.kind != Label::Kind::Instr) continue;
        b_wins_next |= is_final_config(p, step(p, landing, resp));
      }
      no_safe &= b_wins_next;
    }
  }

  sp.apply(detail::p3_move(cg, Player::A, "z1", "zA"));
  bool routed = sp.has_final_move();
  r.pass = no_safe && routed;
  r.note = r.pass ? "A out of safe p1/p2 moves; B reaches a final node right after"
                  : "deadlocked A not routed to a B win";
  detail::record_trace(cg, sp, &r);
  return r;
}

inline ProbeReport probe_gadgets(const CompiledGame& cg) {
  ProbeReport report;
  report.probes.push_back(probe_double_update(cg));
  report.probes.push_back(probe_solo_rotation(cg));
  report.probes.push_back(probe_blocked_receive(cg));
  report.probes.push_back(probe_deadlock_routing(cg));
  return report;
}

}  // namespace tsogame

#endif  // TSOGAME_PCS_COMPILER_HPP_
