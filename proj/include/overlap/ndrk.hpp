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
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "overlap/error.hpp"
#include "overlap/forest.hpp"
#include "overlap/structures.hpp"

namespace overlap {

// All structures over a forest at levels 1..height with |u| <= max_u, and for
// each one the structures of larger level that extend it.
class StructurePoset {
 public:
  StructurePoset(const Forest& f, std::size_t iota, std::size_t max_u,
                 std::size_t cap = 4'000'000);

  std::size_t size() const noexcept { return nodes_.size(); }
  const MStruct& at(std::size_t i) const { return nodes_.at(i); }
  const std::vector<MStruct>& nodes() const noexcept { return nodes_; }
  std::optional<std::size_t> find(const MStruct& m) const;
  const std::vector<std::size_t>& upper(std::size_t i) const { return upper_.at(i); }
  const Forest& forest() const noexcept { return forest_; }
  std::size_t iota() const noexcept { return iota_; }
  std::size_t max_u() const noexcept { return max_u_; }

 private:
  Forest forest_;
  std::size_t iota_, max_u_;
  std::vector<MStruct> nodes_;
  std::unordered_map<MStruct, std::size_t, MStructHash> index_;
  std::vector<std::vector<std::size_t>> upper_;
};

// |{eta in u_n : nu is a prefix of eta}|
std::size_t branching(const MStruct& n, const BitVec& nu);

struct RankTable {
  std::vector<std::size_t> rank;
  // choice[m][v]: index of the extension used for the v-th node of u_m at
  // the last successful step; empty when rank is 0
  std::vector<std::vector<std::size_t>> choice;
};

RankTable ndrk_table(const StructurePoset& poset);

using RankStep = std::vector<std::pair<BitVec, MStruct>>;

struct RankResult {
  std::size_t value = 0;
  // steps[0] maps each node of u_m to its extension; steps[j+1] does the same
  // for the extension chosen for the first node in steps[j]
  std::vector<RankStep> steps;
};

RankResult ndrk_bounded(const MStruct& m, const Forest& f, std::size_t max_u);
RankResult ndrk_in(const StructurePoset& poset, const RankTable& table, const MStruct& m);
std::size_t ndrk_sup(const Forest& f, std::size_t iota, std::size_t max_u);

struct ChainWitness {
  std::vector<MStruct> chain;
  Forest forest;
};

Diagnostics check_chain(const ChainWitness& c);

// Greedy chain from poset node start; each link spends |u| rank levels.
ChainWitness witness_chain(const StructurePoset& poset, const RankTable& table, std::size_t start);

struct BranchCertificate {
  BitVec eta, nu;
  std::vector<BitVec> forward, backward;
  std::size_t overlap = 0;
  bool ok = false;
};

struct PerfectWitness {
  Tree perfect;
  std::vector<BranchCertificate> certificates;
};

PerfectWitness extract_perfect_witness(const ChainWitness& c);

}  // namespace overlap
