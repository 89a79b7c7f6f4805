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
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "overlap/bitvec.hpp"
#include "overlap/error.hpp"
#include "overlap/forest.hpp"
#include "overlap/oracle.hpp"
#include "overlap/structures.hpp"

namespace overlap {

using OrdinalPair = std::pair<Ordinal, Ordinal>;

struct Condition {
  std::size_t iota = 3;
  std::vector<Ordinal> w;
  std::size_t n = 0;
  std::size_t M = 0;
  std::map<Ordinal, BitVec> eta;
  Forest forest;
  std::vector<std::size_t> r;
  std::map<OrdinalPair, std::vector<std::size_t>> h;
  std::map<OrdinalPair, std::vector<BitVec>> g;

  friend bool operator==(const Condition&, const Condition&) = default;
};

enum class RhoSearch { PairwiseSums, Exhaustive };

struct ValidateOptions {
  RhoSearch rho = RhoSearch::PairwiseSums;
  // the exhaustive sweep covers levels up to this bound; higher levels fall
  // back to pairwise sums
  std::size_t exhaustive_max_level = 10;
  std::size_t max_reports = 25;
};

// Clause labels "(*)_1" .. "(*)_11"; "(iota)" when iota < 3.
Diagnostics validate_condition(const Condition& p, const RankOracle& o, ValidateOptions opt = {});

bool leq(const Condition& p, const Condition& q);

struct CalMWitness {
  std::size_t ell;
  std::vector<Ordinal> wstar;
};

struct CalMEntry {
  MStruct m;
  std::vector<CalMWitness> witnesses;
};

// The structures m(l*, w*) of a condition, one entry per distinct structure.
std::vector<CalMEntry> calM(const Condition& p);

// m(l*, w*) when (l*, w*) is admissible, else empty.
std::optional<MStruct> structure_of(const Condition& p, std::size_t ell,
                                    const std::vector<Ordinal>& wstar);

std::optional<std::pair<BitVec, MStruct>> capture_translate(const Condition& p, const MStruct& m);

Condition bootstrap(std::vector<Ordinal> w, std::size_t iota);
Condition extend_add_element(const Condition& p, Ordinal beta);

// Supplies ordinals above a floor that are not yet in use.
class FreshOrdinals {
 public:
  FreshOrdinals(Ordinal start, Ordinal limit) : next_(start), limit_(limit) {}
  Ordinal next(const std::vector<Ordinal>& used);

 private:
  Ordinal next_, limit_;
};

Condition extend_dense(const Condition& p, Ordinal beta, std::size_t n0, std::size_t M0,
                       FreshOrdinals& fresh);

// Renames ordinals; unmapped ordinals stay.  The map must be injective on w.
Condition relabel(const Condition& p, const std::map<Ordinal, Ordinal>& to);

using OrderIso = std::map<Ordinal, Ordinal>;

std::optional<OrderIso> check_twin(const Condition& p1, const Condition& p2, const RankOracle& o);

struct AmalgamShape {
  std::size_t k, ell, N0, N;
};

AmalgamShape amalgam_shape(std::size_t iota, std::size_t k, std::size_t ell);
// Position of a tagged triple in the enumeration of the index set.
std::size_t theta_index(std::size_t iota, std::size_t k, std::size_t ell, int tag, std::size_t x,
                        std::size_t y, std::size_t i);

Condition amalgamate(const Condition& p1, const Condition& p2, const RankOracle& o);

struct OverlapCertificate {
  Ordinal alpha = 0, beta = 0;
  std::size_t overlap = 0;
  std::vector<BitVec> points;
  bool ok = false;
  friend bool operator==(const OverlapCertificate&, const OverlapCertificate&) = default;
};

std::vector<OverlapCertificate> overlap_certificates(const Condition& p);

struct ScheduleStep {
  Ordinal beta;
  std::size_t n0 = 0, M0 = 0;
};

struct GenericRun {
  std::size_t iota = 3;
  std::vector<Condition> chain;
  std::vector<Diagnostics> step_diagnostics;
  Forest forest;
  std::map<Ordinal, BitVec> eta;
  std::vector<OverlapCertificate> certificates;
};

GenericRun build_chain(const Condition& seed, const std::vector<ScheduleStep>& schedule,
                       const RankOracle& o, FreshOrdinals& fresh);

// The order-model oracle sized for the ordinals of the given conditions.
RankOracle default_oracle(const std::vector<const Condition*>& conditions);

}  // namespace overlap
