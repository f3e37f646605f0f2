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

#ifndef TSOGAME_BASE_HPP_
#define TSOGAME_BASE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace tsogame {

using ProcId = int32_t;
using StateId = int32_t;
using VarId = int32_t;
using Value = int32_t;

/// The two players. B tries to reach a final configuration, A avoids them.
enum class Player : uint8_t { A, B };

inline Player opponent(Player p) { return p == Player::A ? Player::B : Player::A; }

inline char player_letter(Player p) { return p == Player::A ? 'A' : 'B'; }

/// Raised on malformed inputs and contract violations (disabled labels,
/// unknown nodes, inconsistent regions).
class InvalidArgument : public std::runtime_error {
 public:
  explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an explicit-state construction exceeds its node budget.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t nodes)
      : std::runtime_error(what + " (nodes so far: " + std::to_string(nodes) + ")"),
        node_count(nodes) {}

  std::size_t node_count;
};

inline void combine_hash(std::size_t v, std::size_t* seed) {
  *seed ^= v + 0x9e3779b97f4a7c15ull + (*seed << 6) + (*seed >> 2);
}

}  // namespace tsogame

#endif  // TSOGAME_BASE_HPP_
