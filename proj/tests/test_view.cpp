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

#include <catch2/catch_amalgamated.hpp>

#include "support/gen.hpp"
#include "tsogame/view.hpp"

using namespace tsogame;

TEST_CASE("view projects readable values and fence capability", "[view]") {
  Program p = parse_program(
      "tsogame v1\ndomain 0 1 2\nvars x y\nprocess a\n  init s\nprocess b\n  init t\n");
  Configuration c = initial_configuration(p);

  SECTION("empty buffers read memory, fences are open") {
    View v = view_of(p, c);
    for (ProcId i = 0; i < 2; ++i) {
      CHECK(v.values[i * 2 + 0] == c.memory[0]);
      CHECK(v.values[i * 2 + 1] == c.memory[1]);
      CHECK(v.fence_ok[i]);
    }
  }
  SECTION("buffered writes shadow memory for their owner only") {
    c.buffers[0] = {{0, 1}, {0, 2}};
    View v = view_of(p, c);
    CHECK(v.values[0] == 2);            // newest own write on x
    CHECK(v.values[2] == c.memory[0]);  // the other process reads memory
    CHECK_FALSE(v.fence_ok[0]);
    CHECK(v.fence_ok[1]);
  }
  SECTION("view-equivalent configurations with different buffers exist") {
    Configuration c1 = c;
    c1.buffers[0] = {{0, 1}};
    Configuration c2 = c;
    c2.buffers[0] = {{1, 0}, {0, 1}};  // extra write of y's current value
    REQUIRE(c1.buffers != c2.buffers);
    CHECK(view_of(p, c1) == view_of(p, c2));
  }
  SECTION("a random search also finds equivalent pairs") {
    tsotest::Rng rng(tsotest::seed_from_env(41));
    bool found = false;
    for (int i = 0; i < 500 && !found; ++i) {
      Configuration a = tsotest::random_configuration(rng, p, 3);
      Configuration b = tsotest::random_configuration(rng, p, 3);
      found = a.buffers != b.buffers && view_of(p, a) == view_of(p, b);
    }
    CHECK(found);
  }
}

TEST_CASE("view_step mirrors the instruction effects", "[view]") {
  Program p = parse_program(R"(tsogame v1
domain 0 1
vars x
process p
  init s0
  s0 -> s1 : w x 1
  s1 -> s2 : r x 1
  s1 -> s3 : mf
)");
  View v = view_of(p, initial_configuration(p));

  auto w = view_step(p, v, 0, Instruction::write(0, 1));
  REQUIRE(w.has_value());
  CHECK(w->values[0] == 1);
  CHECK_FALSE(w->fence_ok[0]);

  // Fence is disabled once the process wrote, forever in the no-update game.
  CHECK_FALSE(view_step(p, *w, 0, Instruction::fence()).has_value());
  // Read-own-write goes through the pinned value.
  auto r = view_step(p, *w, 0, Instruction::read(0, 1));
  REQUIRE(r.has_value());
  CHECK(r->values == w->values);
}

TEST_CASE("view_step commutes with step under view_of", "[view][prop]") {
  tsotest::Rng rng(tsotest::seed_from_env(43));
  tsotest::ProgGen opt;
  opt.unique_src_instr = true;
  int checked = 0;
  for (int round = 0; round < 120; ++round) {
    Program p = tsotest::random_program(rng, opt);
    Configuration c = tsotest::random_configuration(rng, p, 3);
    View v = view_of(p, c);
    for (ProcId i = 0; i < p.proc_count(); ++i) {
      for (int32_t ti = 0; ti < static_cast<int32_t>(p.processes[i].transitions.size()); ++ti) {
        const ProcessTransition& t = p.processes[i].transitions[ti];
        bool concrete = is_enabled(p, c, Label::instr(i, ti));
        auto stepped = view_step(p, v, i, t.instr);
        // Enabledness agreement requires matching source states.
        if (c.global[i] != t.src) continue;
        CHECK(concrete == stepped.has_value());
        if (concrete) {
          CHECK(view_of(p, step(p, c, Label::instr(i, ti))) == *stepped);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("view game on a write-free program equals the bound-0 arena", "[view]") {
  Program p = parse_program(R"(tsogame v1
domain 0 1
vars x
process a
  init s0
  final s2
  s0 -> s1 : skip
  s1 -> s2 : r x 0
  s1 -> s1 : skip
process b
  init t0
  t0 -> t0 : skip
)");
  GameSpec spec = make_spec(p, UpdatePolicy::Never, UpdatePolicy::Never);
  ViewArena vg = build_view_game(spec);
  GameSpec bounded = spec;
  bounded.buffer_bound = 0;
  TsoArena cg = build_arena(bounded);
  CHECK(vg.game.node_count() == cg.game.node_count());
  CHECK(vg.game.edge_count() == cg.game.edge_count());
  CHECK(vg.winner_at_initial(solve(vg.game)) == cg.winner_at_initial(solve(cg.game)));
}

TEST_CASE("view game agrees with the exact arena on write-acyclic programs", "[view][prop]") {
  tsotest::Rng rng(tsotest::seed_from_env(47));
  tsotest::ProgGen opt;
  opt.write_acyclic = true;
  int rounds = 0;
  for (int i = 0; i < 60; ++i) {
    Program p = tsotest::random_program(rng, opt);
    if (!write_acyclic(p)) continue;
    ++rounds;
    GameSpec spec = make_spec(p, UpdatePolicy::Never, UpdatePolicy::Never);
    ViewArena vg = build_view_game(spec);
    GameSpec raw = spec;
    raw.buffer_bound = buffer_size(spec.initial) + write_edge_total(p);
    TsoArena cg = build_arena(raw);
    CHECK(vg.winner_at_initial(solve(vg.game)) == cg.winner_at_initial(solve(cg.game)));
  }
  CHECK(rounds >= 50);
}

TEST_CASE("write acyclicity detection", "[view]") {
  Program cyc = parse_program(
      "tsogame v1\ndomain 0 1\nvars x\nprocess p\n  init s0\n  s0 -> s1 : w x 1\n  s1 -> s0 : skip\n");
  CHECK_FALSE(write_acyclic(cyc));
  Program lin = parse_program(
      "tsogame v1\ndomain 0 1\nvars x\nprocess p\n  init s0\n  s0 -> s1 : w x 1\n  s1 -> s1 : skip\n");
  CHECK(write_acyclic(lin));
  CHECK(write_edge_total(lin) == 1);
  CHECK(build_view_game(make_spec(lin, UpdatePolicy::Never, UpdatePolicy::Never)).game.node_count() > 0);
  CHECK_THROWS_AS(build_view_game(make_spec(lin, UpdatePolicy::Before, UpdatePolicy::Never)),
                  InvalidArgument);
}
