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

// Command-line front end. Exit codes: 0 success, 1 failed property or
// unexpected winner, 2 usage/parse error, 3 undecidable variant.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsogame/pcs_compiler.hpp"
#include "tsogame/reductions.hpp"

namespace {

using namespace tsogame;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kUndecidable = 3;

struct Args {
  std::string command;
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;

  bool has(const std::string& f) const { return flags.contains(f); }

  std::optional<std::string> get(const std::string& f) const {
    auto it = flags.find(f);
    return it == flags.end() ? std::nullopt : std::optional(it->second);
  }
};

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n"
            << "usage: tsogame <command> [args]\n"
            << "  check <prog>\n"
            << "  classify --a <policy> --b <policy>\n"
            << "  solve <prog> --a <policy> --b <policy> [--first A|B] [--bound N]\n"
            << "        [--deadlock loses|safe] [--expect A|B]\n"
            << "  emit-arena <prog> --a <policy> --b <policy> --bound N --emit <path>\n"
            << "  view-game <prog> [--emit <path>]\n"
            << "  play <prog> --a <policy> --b <policy> [--bound N] [--horizon N]\n"
            << "  compile-pcs <pcs> --target <state> [--emit <path>]\n"
            << "  probe <pcs> --target <state>\n"
            << "  compare <prog> --a <policy> --b <policy>\n"
            << "policies: never before after always\n";
  std::exit(kUsage);
}

Args parse_args(int argc, char** argv) {
  if (argc < 2) usage_error("missing command");
  Args a;
  a.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string tok = argv[i];
    if (tok.rfind("--", 0) == 0) {
      if (i + 1 >= argc) usage_error("flag " + tok + " needs a value");
      a.flags[tok.substr(2)] = argv[++i];
    } else {
      a.positional.push_back(tok);
    }
  }
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) usage_error("cannot write " + path);
  out << text;
}

UpdatePolicy policy_arg(const Args& a, const std::string& flag) {
  auto s = a.get(flag);
  if (!s) usage_error("missing --" + flag);
  auto p = parse_policy(*s);
  if (!p) usage_error("bad policy '" + *s + "'");
  return *p;
}

GameSpec spec_from_args(const Args& a, Program program) {
  GameSpec spec = make_spec(std::move(program), policy_arg(a, "a"), policy_arg(a, "b"));
  if (auto f = a.get("first")) {
    if (*f == "A")
      spec.first_mover = Player::A;
    else if (*f == "B")
      spec.first_mover = Player::B;
    else
      usage_error("--first must be A or B");
  }
  if (auto d = a.get("deadlock")) {
    if (*d == "loses")
      spec.deadlock = DeadlockConvention::DeadlockedPlayerLoses;
    else if (*d == "safe")
      spec.deadlock = DeadlockConvention::DeadlockedPlayerSafe;
    else
      usage_error("--deadlock must be loses or safe");
  }
  if (auto b = a.get("bound")) spec.buffer_bound = std::stoul(*b);
  return spec;
}

void print_result_line(Player winner, SolveMethod method, std::size_t nodes, std::size_t edges) {
  std::cout << "RESULT winner=" << player_letter(winner) << " method=" << method_name(method)
            << " nodes=" << nodes << " edges=" << edges << "\n";
}

int cmd_check(const Args& a) {
  if (a.positional.size() != 1) usage_error("check needs one file");
  Program p = parse_program(read_file(a.positional[0]));
  auto diags = validate(p);
  for (const Diagnostic& d : diags) std::cout << "diagnostic: " << d.message << "\n";
  if (!diags.empty()) return kFail;
  std::cout << "ok: " << p.processes.size() << " processes, " << p.vars.size() << " variables, "
            << p.domain.size() << " values\n";
  return kOk;
}

int cmd_classify(const Args& a) {
  std::cout << group_name(classify(policy_arg(a, "a"), policy_arg(a, "b"))) << "\n";
  return kOk;
}

int cmd_solve(const Args& a) {
  if (a.positional.size() != 1) usage_error("solve needs one file");
  GameSpec spec = spec_from_args(a, parse_program(read_file(a.positional[0])));
  TsoSolution sol = solve_tso(spec);
  const SafetyGame& g = sol.game();
  std::cout << "group " << group_name(classify(spec.policy_a, spec.policy_b)) << "\n";
  std::cout << "method " << method_name(sol.method) << "\n";
  std::cout << "winner " << player_letter(sol.winner) << "\n";
  std::cout << "win_A " << g.node_count() - sol.regions.count_b() << " win_B "
            << sol.regions.count_b() << "\n";
  print_result_line(sol.winner, sol.method, g.node_count(), g.edge_count());
  if (auto e = a.get("expect")) {
    Player expect = *e == "A" ? Player::A : Player::B;
    if (*e != "A" && *e != "B") usage_error("--expect must be A or B");
    if (sol.winner != expect) {
      std::cout << "FAIL expected winner " << *e << "\n";
      return kFail;
    }
  }
  return kOk;
}

int cmd_emit_arena(const Args& a) {
  if (a.positional.size() != 1) usage_error("emit-arena needs one file");
  auto path = a.get("emit");
  if (!path) usage_error("emit-arena needs --emit");
  GameSpec spec = spec_from_args(a, parse_program(read_file(a.positional[0])));
  if (!spec.buffer_bound) usage_error("emit-arena needs --bound");
  TsoArena arena = build_arena(spec);
  write_file(*path, dump_arena(arena.game));
  write_file(*path + ".index", dump_index(arena, [&](const Configuration& c) {
               return print_configuration(spec.program, c);
             }));
  std::cout << "wrote " << *path << " (" << arena.game.node_count() << " nodes, "
            << arena.game.edge_count() << " edges)\n";
  return kOk;
}

int cmd_view_game(const Args& a) {
  if (a.positional.size() != 1) usage_error("view-game needs one file");
  Program prog = parse_program(read_file(a.positional[0]));
  GameSpec spec = make_spec(std::move(prog), UpdatePolicy::Never, UpdatePolicy::Never);
  ViewArena arena = build_view_game(spec);
  Regions r = solve(arena.game);
  if (auto path = a.get("emit")) {
    write_file(*path, dump_arena(arena.game));
    write_file(*path + ".index", dump_index(arena, [&](const View& v) {
                 return print_view(spec.program, v);
               }));
  }
  Player winner = arena.winner_at_initial(r);
  std::cout << "winner " << player_letter(winner) << "\n";
  print_result_line(winner, SolveMethod::GroupIV, arena.game.node_count(),
                    arena.game.edge_count());
  return kOk;
}

int cmd_play(const Args& a) {
  if (a.positional.size() != 1) usage_error("play needs one file");
  GameSpec spec = spec_from_args(a, parse_program(read_file(a.positional[0])));
  TsoSolution sol = solve_tso(spec);
  const SafetyGame& g = sol.game();
  std::size_t horizon = g.node_count();
  if (auto h = a.get("horizon")) horizon = std::stoul(*h);
  Play pl = play(g, sol.strategy_a, sol.strategy_b, sol.initial, horizon);
  for (std::size_t i = 0; i < pl.prefix.size(); ++i) {
    NodeId v = pl.prefix[i];
    std::cout << i << ' ' << player_letter(g.owner[v]) << ' ' << v;
    if (std::holds_alternative<TsoArena>(sol.arena)) {
      const TsoArena& ar = std::get<TsoArena>(sol.arena);
      if (v < ar.real_nodes)
        std::cout << ' ' << print_configuration(spec.program, ar.index[v].first);
    } else {
      const ViewArena& ar = std::get<ViewArena>(sol.arena);
      if (v < ar.real_nodes) std::cout << ' ' << print_view(spec.program, ar.index[v].first);
    }
    std::cout << "\n";
  }
  if (pl.verdict == Play::Verdict::BReachedFinal)
    std::cout << "verdict B_reached_final at " << pl.final_index << "\n";
  else
    std::cout << "verdict A_survived_horizon\n";
  print_result_line(sol.winner, sol.method, g.node_count(), g.edge_count());
  return kOk;
}

int cmd_compile_pcs(const Args& a) {
  if (a.positional.size() != 1) usage_error("compile-pcs needs one file");
  Pcs l = parse_pcs(read_file(a.positional[0]));
  auto target = a.get("target");
  if (!target) usage_error("compile-pcs needs --target");
  auto q = l.state_id(*target);
  if (!q) usage_error("unknown target state '" + *target + "'");
  CompiledGame cg = compile(l, *q);
  std::string text = print_program(cg.program());
  std::ostringstream markers;
  for (const auto& [name, where] : cg.markers)
    markers << name << ' ' << cg.program().processes[where.first].name << ' '
            << cg.program().processes[where.first].state_names[where.second] << "\n";
  if (auto path = a.get("emit")) {
    write_file(*path, text);
    write_file(*path + ".markers", markers.str());
    std::cout << "wrote " << *path << "\n";
  } else {
    std::cout << text << "# markers\n" << markers.str();
  }
  return kOk;
}

int cmd_probe(const Args& a) {
  if (a.positional.size() != 1) usage_error("probe needs one file");
  Pcs l = parse_pcs(read_file(a.positional[0]));
  auto target = a.get("target");
  if (!target) usage_error("probe needs --target");
  auto q = l.state_id(*target);
  if (!q) usage_error("unknown target state '" + *target + "'");
  CompiledGame cg = compile(l, *q);
  ProbeReport report = probe_gadgets(cg);
  for (const ProbeResult& r : report.probes) {
    std::cout << "probe " << r.id << " [" << r.name << "] "
              << (!r.applicable ? "N/A" : r.pass ? "PASS" : "FAIL") << ": " << r.note << "\n";
    if (r.applicable && !r.pass)
      for (const std::string& line : r.trace) std::cout << "  " << line << "\n";
  }
  return report.all_pass() ? kOk : kFail;
}

Player bounded_winner(const GameSpec& spec, std::size_t bound) {
  GameSpec s = spec;
  s.buffer_bound = bound;
  TsoArena arena = build_arena(s);
  return arena.winner_at_initial(solve(arena.game));
}

int cmd_compare(const Args& a) {
  if (a.positional.size() != 1) usage_error("compare needs one file");
  GameSpec spec = spec_from_args(a, parse_program(read_file(a.positional[0])));
  Group group = classify(spec.policy_a, spec.policy_b);
  bool ok = true;
  switch (group) {
    case Group::I: {
      TsoArena reduced = reduce_group1(spec);
      Player rw = reduced.winner_at_initial(solve(reduced.game));
      for (std::size_t k : {2, 3, 4}) {
        Player bw = bounded_winner(spec, k);
        bool agree = rw == bw;
        ok &= agree;
        std::cout << (agree ? "PASS" : "FAIL") << " k=" << k << " reduced="
                  << player_letter(rw) << " bounded=" << player_letter(bw) << "\n";
      }
      break;
    }
    case Group::II: {
      TsoArena reduced = reduce_group2(spec);
      Player rw = reduced.winner_at_initial(solve(reduced.game));
      std::size_t bound = group2_bound(spec);
      for (std::size_t k : {bound + 1, bound + 2}) {
        Player bw = bounded_winner(spec, k);
        bool agree = rw == bw;
        ok &= agree;
        std::cout << (agree ? "PASS" : "FAIL") << " k=" << k << " reduced="
                  << player_letter(rw) << " bounded=" << player_letter(bw) << "\n";
      }
      break;
    }
    case Group::IV: {
      if (!write_acyclic(spec.program)) usage_error("group IV compare needs a write-acyclic program");
      ViewArena vg = build_view_game(spec);
      Player vw = vg.winner_at_initial(solve(vg.game));
      std::size_t k = buffer_size(spec.initial) + write_edge_total(spec.program);
      Player bw = bounded_winner(spec, k);
      bool agree = vw == bw;
      ok &= agree;
      std::cout << (agree ? "PASS" : "FAIL") << " views=" << player_letter(vw)
                << " raw=" << player_letter(bw) << "\n";
      break;
    }
    case Group::III:
      throw UndecidableVariant(spec.policy_a, spec.policy_b);
  }
  return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  Args args = parse_args(argc, argv);
  try {
    if (args.command == "check") return cmd_check(args);
    if (args.command == "classify") return cmd_classify(args);
    if (args.command == "solve") return cmd_solve(args);
    if (args.command == "emit-arena") return cmd_emit_arena(args);
    if (args.command == "view-game") return cmd_view_game(args);
    if (args.command == "play") return cmd_play(args);
    if (args.command == "compile-pcs") return cmd_compile_pcs(args);
    if (args.command == "probe") return cmd_probe(args);
    if (args.command == "compare") return cmd_compare(args);
    usage_error("unknown command '" + args.command + "'");
  } catch (const UndecidableVariant& e) {
    std::cerr << "undecidable: " << e.what() << "\n";
    return kUndecidable;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
