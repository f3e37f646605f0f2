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
#include "tsogame/reductions.hpp"

using namespace tsogame;

namespace {

Player bounded_winner(GameSpec spec, std::size_t bound) {
  spec.buffer_bound = bound;
  TsoArena arena = build_arena(spec);
  return arena.winner_at_initial(solve(arena.game));
}

// A stale buffered write matters here: the writer can keep x=1 pending
// while the poller only sees memory.
const char* kStale = R"(tsogame v1
domain 0 1
vars x y
process writer
  init w0
  w0 -> w1 : w x 1
  w1 -> w2 : w y 1
  w1 -> w1 : skip
  w2 -> w2 : skip
process poller
  init r0
  final rF
  r0 -> r0 : skip
  r0 -> r1 : r y 1
  r1 -> rF : r x 0
)";

}  // namespace

TEST_CASE("group I role assignment", "[reductions]") {
  using P = UpdatePolicy;
  auto x_of = [](P a, P b) {
    GameSpec s;
    s.policy_a = a;
    s.policy_b = b;
    return group1_player_x(s);
  };
  CHECK(x_of(P::After, P::Before) == Player::A);
  CHECK(x_of(P::Before, P::After) == Player::B);
  CHECK(x_of(P::Always, P::Always) == Player::A);  // tie goes to A
  CHECK(x_of(P::Before, P::Always) == Player::B);
  CHECK(x_of(P::Always, P::After) == Player::B);
}

TEST_CASE("group I reduction keeps the promised node shapes", "[reductions]") {
  GameSpec spec = make_spec(parse_program(kStale), UpdatePolicy::After, UpdatePolicy::Before);
  REQUIRE(classify(spec.policy_a, spec.policy_b) == Group::I);
  TsoArena arena = reduce_group1(spec);
  Player x = group1_player_x(spec);
  for (NodeId v = 0; v < arena.real_nodes; ++v) {
    const auto& [c, owner] = arena.index[v];
    if (owner == x)
      CHECK(buffer_size(c) <= 2);
    else
      CHECK((buffer_size(c) <= 1 || (c == spec.initial && owner == spec.first_mover)));
  }
  CHECK_THROWS_AS(reduce_group1(make_spec(parse_program(kStale), UpdatePolicy::Never,
                                          UpdatePolicy::Never)),
                  InvalidArgument);
}

TEST_CASE("group I reduced winner equals bounded winners", "[reductions]") {
  const UpdatePolicy pairs[][2] = {
      {UpdatePolicy::After, UpdatePolicy::Before}, {UpdatePolicy::Before, UpdatePolicy::After},
      {UpdatePolicy::Always, UpdatePolicy::Always}, {UpdatePolicy::Always, UpdatePolicy::Before},
      {UpdatePolicy::Before, UpdatePolicy::Always}, {UpdatePolicy::Always, UpdatePolicy::After},
      {UpdatePolicy::After, UpdatePolicy::Always}};
  Program p = parse_program(kStale);
  for (auto [pa, pb] : pairs) {
    GameSpec spec = make_spec(p, pa, pb);
    TsoArena reduced = reduce_group1(spec);
    Player rw = reduced.winner_at_initial(solve(reduced.game));
    for (std::size_t k : {2, 3, 4}) CHECK(rw == bounded_winner(spec, k));
  }
}

TEST_CASE("group II bound and agreement", "[reductions]") {
  Program p = parse_program(kStale);
  GameSpec spec = make_spec(p, UpdatePolicy::Before, UpdatePolicy::Before);

  SECTION("empty initial buffers give bound one") {
    CHECK(group2_bound(spec) == 1);
    TsoArena arena = reduce_group2(spec);
    for (NodeId v = 0; v < arena.real_nodes; ++v)
      CHECK(buffer_size(arena.index[v].first) <= 1);
  }
  SECTION("buffered initial configurations raise the bound") {
    spec.initial.buffers[0] = {{0, 1}, {1, 1}, {0, 0}};
    CHECK(group2_bound(spec) == 3);
  }
  SECTION("winner matches the slightly larger bounded arenas") {
    tsotest::Rng rng(tsotest::seed_from_env(53));
    for (int i = 0; i < 15; ++i) {
      GameSpec s = make_spec(tsotest::random_program(rng, {}), UpdatePolicy::Before,
                             UpdatePolicy::Before);
      std::size_t extra = tsotest::pick(rng, 0, 2);
      for (std::size_t k = 0; k < extra; ++k)
        s.initial.buffers[tsotest::pick(rng, 0, 1)].push_back(
            {static_cast<VarId>(tsotest::pick(rng, 0, s.program.var_count() - 1)),
             static_cast<Value>(tsotest::pick(rng, 0, s.program.domain_size() - 1))});
      TsoArena reduced = reduce_group2(s);
      Player rw = reduced.winner_at_initial(solve(reduced.game));
      std::size_t b = group2_bound(s);
      CHECK(rw == bounded_winner(s, b + 1));
      CHECK(rw == bounded_winner(s, b + 2));
    }
  }
  CHECK_THROWS_AS(reduce_group2(make_spec(p, UpdatePolicy::Always, UpdatePolicy::Always)),
                  InvalidArgument);
}

TEST_CASE("solver dispatch per group", "[reductions]") {
  SECTION("group IV goes through the view game") {
    GameSpec spec = make_spec(
        parse_program(
            "tsogame v1\ndomain 0\nvars x\nprocess p\n  init s0\n  final s0\n  s0 -> s0 : skip\n"),
        UpdatePolicy::Never, UpdatePolicy::Never);
    TsoSolution sol = solve_tso(spec);
    CHECK(sol.method == SolveMethod::GroupIV);
    CHECK(sol.winner == Player::B);
  }
  SECTION("group II reports its bound-one arena") {
    GameSpec spec = make_spec(parse_program(kStale), UpdatePolicy::Before, UpdatePolicy::Before);
    TsoSolution sol = solve_tso(spec);
    CHECK(sol.method == SolveMethod::GroupII);
    const TsoArena& arena = std::get<TsoArena>(sol.arena);
    for (NodeId v = 0; v < arena.real_nodes; ++v)
      CHECK(buffer_size(arena.index[v].first) <= 1);
  }
  SECTION("group III is refused without a bound") {
    GameSpec spec = make_spec(parse_program(kStale), UpdatePolicy::After, UpdatePolicy::After);
    CHECK_THROWS_AS(solve_tso(spec), UndecidableVariant);
    spec.buffer_bound = 2;
    CHECK(solve_tso(spec).method == SolveMethod::BoundedApprox);
  }
  SECTION("method always matches the classification") {
    const UpdatePolicy all[] = {UpdatePolicy::Never, UpdatePolicy::Before, UpdatePolicy::After,
                                UpdatePolicy::Always};
    Program p = parse_program(kStale);
    for (UpdatePolicy a : all)
      for (UpdatePolicy b : all) {
        GameSpec spec = make_spec(p, a, b);
        spec.buffer_bound = 2;
        TsoSolution sol = solve_tso(spec);
        switch (classify(a, b)) {
          case Group::I: CHECK(sol.method == SolveMethod::GroupI); break;
          case Group::II: CHECK(sol.method == SolveMethod::GroupII); break;
          case Group::III: CHECK(sol.method == SolveMethod::BoundedApprox); break;
          case Group::IV: CHECK(sol.method == SolveMethod::GroupIV); break;
        }
      }
  }
}

TEST_CASE("random group I instances agree with bounded oracles", "[reductions][prop]") {
  tsotest::Rng rng(tsotest::seed_from_env(59));
  for (int i = 0; i < 10; ++i) {
    Program p = tsotest::random_program(rng, {});
    GameSpec spec = make_spec(p, UpdatePolicy::After, UpdatePolicy::Before);
    TsoArena reduced = reduce_group1(spec);
    Player rw = reduced.winner_at_initial(solve(reduced.game));
    for (std::size_t k : {2, 3, 4}) CHECK(rw == bounded_winner(spec, k));
  }
}
