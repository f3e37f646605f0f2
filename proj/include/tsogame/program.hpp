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

#ifndef TSOGAME_PROGRAM_HPP_
#define TSOGAME_PROGRAM_HPP_

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsogame/base.hpp"

namespace tsogame {

/// One labeled edge instruction: rd(x,v), wr(x,v), skip or mf.
/// Values are concrete; there is no expression language.
struct Instruction {
  enum class Kind : uint8_t { Read, Write, Skip, Fence };

  Kind kind = Kind::Skip;
  VarId var = -1;  // Read/Write only
  Value val = -1;  // Read/Write only

  static Instruction read(VarId x, Value v) { return {Kind::Read, x, v}; }
  static Instruction write(VarId x, Value v) { return {Kind::Write, x, v}; }
  static Instruction skip() { return {Kind::Skip, -1, -1}; }
  static Instruction fence() { return {Kind::Fence, -1, -1}; }

  bool operator==(const Instruction&) const = default;
};

struct ProcessTransition {
  StateId src = 0;
  Instruction instr;
  StateId dst = 0;

  bool operator==(const ProcessTransition&) const = default;
};

/// A finite labeled transition system over the shared instruction set.
struct Process {
  std::string name;
  std::vector<std::string> state_names;  // StateId = index
  std::vector<ProcessTransition> transitions;

  StateId state_count() const { return static_cast<StateId>(state_names.size()); }

  std::optional<StateId> state_id(std::string_view s) const {
    for (StateId i = 0; i < state_count(); ++i)
      if (state_names[i] == s) return i;
    return std::nullopt;
  }

  bool operator==(const Process&) const = default;
};

/// A concurrent program: processes over shared variables with a finite data
/// domain, an initial global state and memory, and final local states.
struct Program {
  std::vector<std::string> domain;  // Value = index; first entry is the default
  std::vector<std::string> vars;    // VarId = index
  std::vector<Process> processes;   // ProcId = declaration index
  std::vector<StateId> initial_global;  // per process
  std::vector<Value> initial_memory;    // per variable
  std::vector<std::pair<ProcId, StateId>> final_states;

  ProcId proc_count() const { return static_cast<ProcId>(processes.size()); }
  VarId var_count() const { return static_cast<VarId>(vars.size()); }
  Value domain_size() const { return static_cast<Value>(domain.size()); }

  std::optional<Value> value_id(std::string_view s) const {
    for (Value i = 0; i < domain_size(); ++i)
      if (domain[i] == s) return i;
    return std::nullopt;
  }

  std::optional<VarId> var_id(std::string_view s) const {
    for (VarId i = 0; i < var_count(); ++i)
      if (vars[i] == s) return i;
    return std::nullopt;
  }

  std::optional<ProcId> proc_id(std::string_view s) const {
    for (ProcId i = 0; i < proc_count(); ++i)
      if (processes[i].name == s) return i;
    return std::nullopt;
  }

  bool is_final(ProcId p, StateId s) const {
    return std::find(final_states.begin(), final_states.end(),
                     std::make_pair(p, s)) != final_states.end();
  }

  bool operator==(const Program&) const = default;
};

struct Diagnostic {
  std::string message;
};

/// Returns one diagnostic per violated Program invariant; empty iff well-formed.
inline std::vector<Diagnostic> validate(const Program& p) {
  std::vector<Diagnostic> out;
  auto complain = [&out](std::string msg) { out.push_back({std::move(msg)}); };

  if (p.domain.empty()) complain("domain is empty");
  if (p.vars.empty()) complain("variable set is empty");
  if (p.initial_global.size() != p.processes.size())
    complain("initial global state does not cover every process");
  if (p.initial_memory.size() != p.vars.size())
    complain("initial memory does not cover every variable");

  for (Value v : p.initial_memory)
    if (v < 0 || v >= p.domain_size()) complain("initial memory value outside domain");
  for (ProcId i = 0; i < p.proc_count() && i < static_cast<ProcId>(p.initial_global.size()); ++i) {
    StateId s = p.initial_global[i];
    if (s < 0 || s >= p.processes[i].state_count())
      complain("initial state of process '" + p.processes[i].name + "' is not one of its states");
  }
  for (ProcId i = 0; i < p.proc_count(); ++i) {
    const Process& proc = p.processes[i];
    if (proc.state_names.empty()) complain("process '" + proc.name + "' has no states");
    for (const ProcessTransition& t : proc.transitions) {
      if (t.src < 0 || t.src >= proc.state_count() || t.dst < 0 || t.dst >= proc.state_count())
        complain("transition of process '" + proc.name + "' uses an unknown state");
      if (t.instr.kind == Instruction::Kind::Read || t.instr.kind == Instruction::Kind::Write) {
        if (t.instr.var < 0 || t.instr.var >= p.var_count())
          complain("transition of process '" + proc.name + "' uses an undeclared variable");
        if (t.instr.val < 0 || t.instr.val >= p.domain_size())
          complain("transition of process '" + proc.name + "' uses a value outside the domain");
      }
    }
  }
  for (auto [proc, state] : p.final_states) {
    if (proc < 0 || proc >= p.proc_count() || state < 0 || state >= p.processes[proc].state_count())
      complain("final state refers to an unknown process state");
  }
  return out;
}

/// Parse failure, with 1-based line/column of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}

  int line;
  int col;
};

namespace detail {

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

// Shared line-based tokenizer for the program and channel-system formats.
// '#' starts a comment; tokens are whitespace-separated.
inline std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 1;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t end = text.find('\n', i);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(i, end - i);
    std::vector<Token> toks;
    std::size_t j = 0;
    while (j < line.size()) {
      if (line[j] == '#') break;
      if (std::isspace(static_cast<unsigned char>(line[j]))) {
        ++j;
        continue;
      }
      std::size_t k = j;
      while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k])) && line[k] != '#') ++k;
      toks.push_back({std::string(line.substr(j, k - j)), line_no, static_cast<int>(j) + 1});
      j = k;
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
    if (end == text.size()) break;
    i = end + 1;
    ++line_no;
  }
  return lines;
}

}  // namespace detail

/// Parse the textual program format (grammar v1, see README). Throws
/// ParseError on both syntax and semantic errors; any accepted text
/// round-trips through print_program and passes validate.
inline Program parse_program(std::string_view text) {
  using detail::Token;
  auto lines = detail::tokenize_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty input; expected header 'tsogame v1'");

  std::size_t li = 0;
  auto& header = lines[0];
  if (header.size() != 2 || header[0].text != "tsogame" || header[1].text != "v1")
    throw ParseError(header[0].line, header[0].col, "expected header 'tsogame v1'");
  ++li;

  Program p;
  auto expect_keyword = [&lines, &li](const std::string& kw) -> std::vector<Token>& {
    if (li >= lines.size()) {
      auto& last = lines.back();
      throw ParseError(last[0].line, last[0].col, "unexpected end of input; expected '" + kw + "'");
    }
    if (lines[li][0].text != kw)
      throw ParseError(lines[li][0].line, lines[li][0].col,
                       "expected '" + kw + "', found '" + lines[li][0].text + "'");
    return lines[li];
  };

  auto& dom = expect_keyword("domain");
  if (dom.size() < 2) throw ParseError(dom[0].line, dom[0].col, "domain needs at least one value");
  for (std::size_t i = 1; i < dom.size(); ++i) {
    if (p.value_id(dom[i].text))
      throw ParseError(dom[i].line, dom[i].col, "duplicate domain value '" + dom[i].text + "'");
    p.domain.push_back(dom[i].text);
  }
  ++li;

  auto& vars = expect_keyword("vars");
  if (vars.size() < 2) throw ParseError(vars[0].line, vars[0].col, "vars needs at least one variable");
  for (std::size_t i = 1; i < vars.size(); ++i) {
    if (p.var_id(vars[i].text))
      throw ParseError(vars[i].line, vars[i].col, "duplicate variable '" + vars[i].text + "'");
    p.vars.push_back(vars[i].text);
  }
  ++li;

  // Defaults: every variable starts at the first declared value.
  p.initial_memory.assign(p.vars.size(), 0);
  if (li < lines.size() && lines[li][0].text == "init-mem") {
    auto& im = lines[li];
    if (im.size() < 3 || (im.size() - 1) % 2 != 0)
      throw ParseError(im[0].line, im[0].col, "init-mem needs (var value) pairs");
    for (std::size_t i = 1; i + 1 < im.size(); i += 2) {
      auto x = p.var_id(im[i].text);
      if (!x) throw ParseError(im[i].line, im[i].col, "undeclared variable '" + im[i].text + "'");
      auto v = p.value_id(im[i + 1].text);
      if (!v)
        throw ParseError(im[i + 1].line, im[i + 1].col,
                         "value '" + im[i + 1].text + "' outside domain");
      p.initial_memory[*x] = *v;
    }
    ++li;
  }

  while (li < lines.size()) {
    auto& ph = expect_keyword("process");
    if (ph.size() != 2) throw ParseError(ph[0].line, ph[0].col, "process needs exactly one name");
    if (p.proc_id(ph[1].text))
      throw ParseError(ph[1].line, ph[1].col, "duplicate process name '" + ph[1].text + "'");
    ++li;

    Process proc;
    proc.name = ph[1].text;
    auto intern_state = [&proc](const Token& t) -> StateId {
      if (auto s = proc.state_id(t.text)) return *s;
      proc.state_names.push_back(t.text);
      return proc.state_count() - 1;
    };

    if (li >= lines.size() || lines[li][0].text != "init")
      throw ParseError(ph[0].line, ph[0].col, "process '" + proc.name + "' needs an 'init' line");
    auto& init = lines[li];
    if (init.size() != 2) throw ParseError(init[0].line, init[0].col, "init needs exactly one state");
    StateId init_state = intern_state(init[1]);
    ++li;

    std::vector<StateId> finals;
    if (li < lines.size() && lines[li][0].text == "final") {
      for (std::size_t i = 1; i < lines[li].size(); ++i) finals.push_back(intern_state(lines[li][i]));
      ++li;
    }

    // Transition lines: <state> -> <state> : (r|w) <var> <value> | skip | mf
    while (li < lines.size() && lines[li][0].text != "process") {
      auto& t = lines[li];
      if (t.size() < 4 || t[1].text != "->" || t[3].text != ":")
        throw ParseError(t[0].line, t[0].col, "expected '<state> -> <state> : <instr>'");
      StateId src = intern_state(t[0]);
      StateId dst = intern_state(t[2]);
      Instruction instr;
      const std::string& op = t.size() > 4 ? t[4].text : "";
      if (op == "skip" && t.size() == 5) {
        instr = Instruction::skip();
      } else if (op == "mf" && t.size() == 5) {
        instr = Instruction::fence();
      } else if ((op == "r" || op == "w") && t.size() == 7) {
        auto x = p.var_id(t[5].text);
        if (!x) throw ParseError(t[5].line, t[5].col, "undeclared variable '" + t[5].text + "'");
        auto v = p.value_id(t[6].text);
        if (!v) throw ParseError(t[6].line, t[6].col, "value '" + t[6].text + "' outside domain");
        instr = op == "r" ? Instruction::read(*x, *v) : Instruction::write(*x, *v);
      } else {
        throw ParseError(t[3].line, t[3].col, "malformed instruction; expected r/w <var> <value>, skip or mf");
      }
      proc.transitions.push_back({src, instr, dst});
      ++li;
    }

    ProcId id = p.proc_count();
    p.processes.push_back(std::move(proc));
    p.initial_global.push_back(init_state);
    for (StateId f : finals) p.final_states.emplace_back(id, f);
  }

  if (p.processes.empty()) throw ParseError(header[0].line, header[0].col, "program declares no process");
  return p;
}

/// Canonical emitter; parse_program(print_program(p)) is structurally equal
/// to p for every valid program.
inline std::string print_program(const Program& p) {
  std::ostringstream os;
  os << "tsogame v1\n";
  os << "domain";
  for (const auto& v : p.domain) os << ' ' << v;
  os << "\nvars";
  for (const auto& x : p.vars) os << ' ' << x;
  os << "\ninit-mem";
  for (VarId x = 0; x < p.var_count(); ++x) os << ' ' << p.vars[x] << ' ' << p.domain[p.initial_memory[x]];
  os << '\n';
  for (ProcId i = 0; i < p.proc_count(); ++i) {
    const Process& proc = p.processes[i];
    os << "process " << proc.name << "\n";
    os << "  init " << proc.state_names[p.initial_global[i]] << '\n';
    std::vector<StateId> finals;
    for (auto [fp, fs] : p.final_states)
      if (fp == i) finals.push_back(fs);
    if (!finals.empty()) {
      os << "  final";
      for (StateId f : finals) os << ' ' << proc.state_names[f];
      os << '\n';
    }
    for (const ProcessTransition& t : proc.transitions) {
      os << "  " << proc.state_names[t.src] << " -> " << proc.state_names[t.dst] << " : ";
      switch (t.instr.kind) {
        case Instruction::Kind::Read:
          os << "r " << p.vars[t.instr.var] << ' ' << p.domain[t.instr.val];
          break;
        case Instruction::Kind::Write:
          os << "w " << p.vars[t.instr.var] << ' ' << p.domain[t.instr.val];
          break;
        case Instruction::Kind::Skip:
          os << "skip";
          break;
        case Instruction::Kind::Fence:
          os << "mf";
          break;
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace tsogame

#endif  // TSOGAME_PROGRAM_HPP_
