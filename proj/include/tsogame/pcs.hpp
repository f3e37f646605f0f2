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

#ifndef TSOGAME_PCS_HPP_
#define TSOGAME_PCS_HPP_

#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsogame/program.hpp"

namespace tsogame {

using ChanStateId = int32_t;
using MsgId = int32_t;

struct ChanOp {
  enum class Kind : uint8_t { Send, Recv, Nop };

  Kind kind = Kind::Nop;
  MsgId msg = -1;  // Send/Recv only

  static ChanOp send(MsgId m) { return {Kind::Send, m}; }
  static ChanOp recv(MsgId m) { return {Kind::Recv, m}; }
  static ChanOp nop() { return {Kind::Nop, -1}; }

  bool operator==(const ChanOp&) const = default;
};

struct ChanTransition {
  ChanStateId src = 0;
  ChanOp op;
  ChanStateId dst = 0;

  bool operator==(const ChanTransition&) const = default;
};

/// A finite automaton with one perfect (non-lossy) FIFO channel.
struct Pcs {
  std::vector<std::string> state_names;   // ChanStateId = index
  std::vector<std::string> message_names; // MsgId = index
  std::vector<ChanTransition> transitions;
  ChanStateId initial = 0;

  ChanStateId state_count() const { return static_cast<ChanStateId>(state_names.size()); }

  std::optional<ChanStateId> state_id(std::string_view s) const {
    for (ChanStateId i = 0; i < state_count(); ++i)
      if (state_names[i] == s) return i;
    return std::nullopt;
  }

  std::optional<MsgId> message_id(std::string_view s) const {
    for (MsgId i = 0; i < static_cast<MsgId>(message_names.size()); ++i)
      if (message_names[i] == s) return i;
    return std::nullopt;
  }
};

/// Channel contents are stored oldest-first: sends append at the back,
/// receives consume the front.
struct PcsConfig {
  ChanStateId state = 0;
  std::vector<MsgId> channel;

  bool operator==(const PcsConfig&) const = default;
  auto operator<=>(const PcsConfig&) const = default;
};

/// Apply one transition if enabled: a send enqueues at the tail, a receive
/// is defined only when its message is the oldest channel entry, a nop
/// changes just the state.
inline std::optional<PcsConfig> pcs_step(const Pcs&, const PcsConfig& c,
                                         const ChanTransition& t) {
  if (t.src != c.state) return std::nullopt;
  PcsConfig out = c;
  out.state = t.dst;
  switch (t.op.kind) {
    case ChanOp::Kind::Nop:
      return out;
    case ChanOp::Kind::Send:
      out.channel.push_back(t.op.msg);
      return out;
    case ChanOp::Kind::Recv:
      if (c.channel.empty() || c.channel.front() != t.op.msg) return std::nullopt;
      out.channel.erase(out.channel.begin());
      return out;
  }
  return std::nullopt;
}

/// A run is the sequence of indices of the transitions taken.
using PcsRun = std::vector<int32_t>;

inline std::optional<PcsConfig> pcs_replay(const Pcs& l, PcsConfig c, const PcsRun& run) {
  for (int32_t ti : run) {
    if (ti < 0 || ti >= static_cast<int32_t>(l.transitions.size())) return std::nullopt;
    auto next = pcs_step(l, c, l.transitions[ti]);
    if (!next) return std::nullopt;
    c = std::move(*next);
  }
  return c;
}

/// Bounded breadth-first state reachability: shortest witness run from c0
/// to target using at most depth steps, if one exists within the bound.
/// The unbounded problem is out of reach; this is a test-instance oracle.
inline std::optional<PcsRun> pcs_reach(const Pcs& l, const PcsConfig& c0, ChanStateId target,
                                       std::size_t depth) {
  if (c0.state == target) return PcsRun{};
  std::map<PcsConfig, std::pair<PcsConfig, int32_t>> parent;  // config -> (pred, transition)
  std::deque<std::pair<PcsConfig, std::size_t>> frontier{{c0, 0}};
  parent.emplace(c0, std::make_pair(c0, -1));
  while (!frontier.empty()) {
    auto [cur, dist] = frontier.front();
    frontier.pop_front();
    if (dist == depth) continue;
    for (int32_t ti = 0; ti < static_cast<int32_t>(l.transitions.size()); ++ti) {
      auto next = pcs_step(l, cur, l.transitions[ti]);
      if (!next) continue;
      if (parent.contains(*next)) continue;
      parent.emplace(*next, std::make_pair(cur, ti));
      if (next->state == target) {
        PcsRun run;
        PcsConfig walk = *next;
        while (true) {
          auto& [pred, via] = parent.at(walk);
          if (via < 0) break;
          run.push_back(via);
          walk = pred;
        }
        std::reverse(run.begin(), run.end());
        return run;
      }
      frontier.emplace_back(std::move(*next), dist + 1);
    }
  }
  return std::nullopt;
}

/// Parse the textual channel-system format (see README):
///   pcs v1
///   messages <m>+
///   states <q>+
///   init <q>
///   <q> -> <q> : ! <m> | ? <m> | nop
inline Pcs parse_pcs(std::string_view text) {
  using detail::Token;
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty input; expected header 'pcs v1'");
  auto& header = lines[0];
  if (header.size() != 2 || header[0].text != "pcs" || header[1].text != "v1")
    throw ParseError(header[0].line, header[0].col, "expected header 'pcs v1'");

  Pcs l;
  std::size_t li = 1;
  auto line_is = [&](const std::string& kw) { return li < lines.size() && lines[li][0].text == kw; };

  if (!line_is("messages"))
    throw ParseError(header[0].line, header[0].col, "expected 'messages' line");
  for (std::size_t i = 1; i < lines[li].size(); ++i) {
    if (l.message_id(lines[li][i].text))
      throw ParseError(lines[li][i].line, lines[li][i].col, "duplicate message");
    l.message_names.push_back(lines[li][i].text);
  }
  if (l.message_names.empty())
    throw ParseError(lines[li][0].line, lines[li][0].col, "messages needs at least one entry");
  ++li;

  if (!line_is("states")) throw ParseError(header[0].line, header[0].col, "expected 'states' line");
  for (std::size_t i = 1; i < lines[li].size(); ++i) {
    if (l.state_id(lines[li][i].text))
      throw ParseError(lines[li][i].line, lines[li][i].col, "duplicate state");
    l.state_names.push_back(lines[li][i].text);
  }
  if (l.state_names.empty())
    throw ParseError(lines[li][0].line, lines[li][0].col, "states needs at least one entry");
  ++li;

  if (!line_is("init")) throw ParseError(header[0].line, header[0].col, "expected 'init' line");
  if (lines[li].size() != 2)
    throw ParseError(lines[li][0].line, lines[li][0].col, "init needs exactly one state");
  auto q0 = l.state_id(lines[li][1].text);
  if (!q0) throw ParseError(lines[li][1].line, lines[li][1].col, "unknown state");
  l.initial = *q0;
  ++li;

  for (; li < lines.size(); ++li) {
    auto& t = lines[li];
    if (t.size() < 5 || t[1].text != "->" || t[3].text != ":")
      throw ParseError(t[0].line, t[0].col, "expected '<state> -> <state> : <op>'");
    auto src = l.state_id(t[0].text);
    if (!src) throw ParseError(t[0].line, t[0].col, "unknown state '" + t[0].text + "'");
    auto dst = l.state_id(t[2].text);
    if (!dst) throw ParseError(t[2].line, t[2].col, "unknown state '" + t[2].text + "'");
    ChanOp op;
    if (t[4].text == "nop" && t.size() == 5) {
      op = ChanOp::nop();
    } else if ((t[4].text == "!" || t[4].text == "?") && t.size() == 6) {
      auto m = l.message_id(t[5].text);
      if (!m) throw ParseError(t[5].line, t[5].col, "unknown message '" + t[5].text + "'");
      op = t[4].text == "!" ? ChanOp::send(*m) : ChanOp::recv(*m);
    } else {
      throw ParseError(t[3].line, t[3].col, "malformed channel operation; expected ! m, ? m or nop");
    }
    l.transitions.push_back({*src, op, *dst});
  }
  return l;
}

inline std::string print_pcs(const Pcs& l) {
  std::ostringstream os;
  os << "pcs v1\nmessages";
  for (const auto& m : l.message_names) os << ' ' << m;
  os << "\nstates";
  for (const auto& q : l.state_names) os << ' ' << q;
  os << "\ninit " << l.state_names[l.initial] << '\n';
  for (const ChanTransition& t : l.transitions) {
    os << l.state_names[t.src] << " -> " << l.state_names[t.dst] << " : ";
    switch (t.op.kind) {
      case ChanOp::Kind::Send: os << "! " << l.message_names[t.op.msg]; break;
      case ChanOp::Kind::Recv: os << "? " << l.message_names[t.op.msg]; break;
      case ChanOp::Kind::Nop: os << "nop"; break;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace tsogame

#endif  // TSOGAME_PCS_HPP_
