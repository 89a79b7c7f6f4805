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

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "overlap/bitvec.hpp"

namespace overlap {

using BitPair = std::pair<BitVec, BitVec>;

// Dimension of the span.  All vectors must share one length.
std::size_t gf2_rank(std::span<const BitVec> vectors);

// Linear independence as a list: repeated vectors make it dependent.
bool is_independent(std::span<const BitVec> vectors);

// Finds the x with A + x contained in B.  Requires |A| >= 5 and B independent.
// Empty result when no such x exists.
std::optional<BitVec> solve_translate(std::span<const BitVec> a, std::span<const BitVec> b);

// Checks a family of pairs drawn from (B u (b* + B)) \ {0, b*} with no repeated
// element and a common pairwise sum.  True when every pair is {b, b + b*} for
// some b in B other than b*.  Hypothesis violations throw UsageError.
bool check_pair_family(const BitVec& bstar, std::span<const BitVec> basis,
                       std::span<const BitPair> pairs);

}  // namespace overlap
