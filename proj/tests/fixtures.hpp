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

// Small fixed inputs shared by the unit and acceptance tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "overlap/forest.hpp"
#include "overlap/structures.hpp"

namespace fixture {

inline overlap::BitVec bv(const std::string& s) { return overlap::BitVec::parse(s); }

inline overlap::Forest forest(std::size_t n, const std::vector<std::vector<std::string>>& trees) {
  std::vector<overlap::Tree> ts;
  for (const auto& t : trees) {
    std::vector<overlap::BitVec> tops;
    for (const auto& s : t) tops.push_back(bv(s));
    ts.emplace_back(n, tops);
  }
  return overlap::Forest(n, ts);
}

struct Cell {
  std::string eta, nu;
  std::size_t i, h;
  std::string g;
};

inline overlap::MStruct structure(std::size_t ell, std::size_t iota,
                                  const std::vector<std::string>& u,
                                  const std::vector<Cell>& cells) {
  std::vector<overlap::BitVec> nodes;
  for (const auto& s : u) nodes.push_back(bv(s));
  overlap::MStruct m = overlap::MStruct::blank(ell, iota, nodes);
  for (const auto& c : cells) {
    std::size_t s = m.slot(*m.position(bv(c.eta)), *m.position(bv(c.nu)), c.i);
    m.h[s] = c.h;
    m.g[s] = bv(c.g);
  }
  return m;
}

// The two-node example: g_0 pair {00,11} in tree 0, g_1 pair {01,10} in tree 1.
inline overlap::Forest example_forest() { return forest(2, {{"00", "11"}, {"01", "10"}}); }

inline overlap::MStruct example_structure() {
  return structure(2, 2, {"00", "11"},
                   {{"00", "11", 0, 0, "00"}, {"11", "00", 0, 0, "11"},
                    {"00", "11", 1, 1, "01"}, {"11", "00", 1, 1, "10"}});
}

// Twenty small forests of height 2 or 3.
inline std::vector<overlap::Forest> corpus() {
  std::vector<overlap::Forest> out;
  out.push_back(example_forest());
  out.push_back(forest(2, {{"00", "01", "10", "11"}}));
  out.push_back(forest(2, {{"00"}, {"01"}, {"10"}, {"11"}}));
  out.push_back(forest(3, {{"000", "111"}, {"011", "100"}}));
  out.push_back(forest(3, {{"000", "001", "110", "111"}, {"010", "101"}}));
  std::mt19937_64 rng(2026);
  while (out.size() < 20) {
    std::size_t n = 2 + rng() % 2;
    out.push_back(brute::random_forest(rng, n, 1 + rng() % 3, 3));
  }
  return out;
}

}  // namespace fixture
