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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "overlap/model_rank.hpp"

namespace overlap {

using Ordinal = std::uint64_t;
using OrdinalSet = std::vector<Ordinal>;

struct RankTriple {
  int rk = -1;
  std::uint64_t zeta = 0;
  std::size_t k = 0;
  friend bool operator==(const RankTriple&, const RankTriple&) = default;
};

// rk(v), zeta(v), k(v) for finite sets of ordinals, either computed on a
// finite model or read from an explicit table.  Copies share one cache.
class RankOracle {
 public:
  static RankOracle table(std::map<OrdinalSet, RankTriple> entries);
  // embedding maps ordinals to model elements and must be increasing; empty
  // means the identity
  static RankOracle model(FiniteModel m, RankParams p, std::map<Ordinal, Element> embedding = {});
  static RankOracle order(std::size_t size, std::size_t theta);

  // v must be sorted without repeats; empty when v is outside the oracle
  std::optional<RankTriple> query(const OrdinalSet& v) const;
  std::string describe() const;

  struct State;

 private:
  explicit RankOracle(std::shared_ptr<State> s) : state_(std::move(s)) {}
  std::shared_ptr<State> state_;
};

std::uint64_t fingerprint_hash(const TypeFingerprint& fp);

}  // namespace overlap
