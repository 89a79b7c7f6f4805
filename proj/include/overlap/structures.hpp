/*
 * Copyright 2026 The overlap-lab Authors
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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "overlap/bitvec.hpp"
#include "overlap/error.hpp"
#include "overlap/forest.hpp"

namespace overlap {

// A finite structure at level ell: a sorted set u of level-ell nodes and, for
// each ordered pair of distinct positions (a, b) and i < iota, a tree index h
// and a node g.  Slots on the diagonal are unused and hold (0, empty).
struct MStruct {
  std::size_t ell = 0;
  std::size_t iota = 0;
  std::vector<BitVec> u;
  std::vector<std::size_t> h;
  std::vector<BitVec> g;

  static MStruct blank(std::size_t ell, std::size_t iota, std::vector<BitVec> u);

  std::size_t width() const noexcept { return u.size(); }
  std::size_t slot(std::size_t a, std::size_t b, std::size_t i) const noexcept {
    return (a * u.size() + b) * iota + i;
  }
  std::optional<std::size_t> position(const BitVec& x) const;

  friend bool operator==(const MStruct&, const MStruct&) = default;
};

struct MStructHash {
  std::size_t operator()(const MStruct& m) const noexcept;
};

// Empty when m is a structure over f.  Clause labels are "(a)".."(e)" and
// "(finite)" for the bound on ell and tree indices.
Diagnostics validate(const MStruct& m, const Forest& f);
bool is_valid(const MStruct& m, const Forest& f);

MStruct translate(const MStruct& m, const BitVec& rho);
MStruct restrict(const MStruct& m, const std::vector<BitVec>& u2);

// Restriction of n to a lower level; empty when n admits none there.
std::optional<MStruct> restrict_to_level(const MStruct& n, std::size_t ell);

bool extends(const MStruct& m, const MStruct& n);
bool essentially_same(const MStruct& m, const MStruct& n);
bool essentially_extends(const MStruct& m, const MStruct& n);

// Every structure at level ell with 2 <= |u| <= max_u, in canonical order.
void for_each_structure(const Forest& f, std::size_t iota, std::size_t ell, std::size_t max_u,
                        const std::function<void(const MStruct&)>& visit);
std::vector<MStruct> enumerate(const Forest& f, std::size_t iota, std::size_t ell,
                               std::size_t max_u);

}  // namespace overlap
