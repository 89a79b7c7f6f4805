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

#include "overlap/gf2.hpp"

#include <string>
#include <unordered_set>

#include "overlap/error.hpp"

namespace overlap {

namespace {

void require_common_length(std::span<const BitVec> vs, std::size_t len, const char* what) {
  for (const auto& v : vs)
    if (v.size() != len)
      throw UsageError(std::string(what) + ": mixed lengths " + std::to_string(len) + " and " +
                       std::to_string(v.size()));
}

}  // namespace

std::size_t gf2_rank(std::span<const BitVec> vectors) {
  if (vectors.empty()) return 0;
  std::size_t len = vectors[0].size();
  require_common_length(vectors, len, "rank");
  // pivot[p] holds a reduced row whose first 1 is at p
  std::vector<std::optional<BitVec>> pivot(len);
  std::size_t r = 0;
  for (BitVec v : vectors) {
    for (std::size_t p = v.first_one(); p < len; p = v.first_one()) {
      if (!pivot[p]) {
        pivot[p] = v;
        ++r;
        break;
      }
      v ^= *pivot[p];
    }
  }
  return r;
}

bool is_independent(std::span<const BitVec> vectors) {
  return gf2_rank(vectors) == vectors.size();
}

std::optional<BitVec> solve_translate(std::span<const BitVec> a, std::span<const BitVec> b) {
  if (a.size() < 5) throw UsageError("solve_translate needs |A| >= 5");
  if (b.empty()) throw UsageError("solve_translate needs a nonempty B");
  std::size_t len = b[0].size();
  require_common_length(b, len, "solve_translate B");
  require_common_length(a, len, "solve_translate A");
  if (!is_independent(b)) throw UsageError("solve_translate needs B independent");

  std::unordered_set<BitVec, BitVecHash> bset(b.begin(), b.end());
  std::optional<BitVec> found;
  for (const auto& y : b) {
    BitVec x = a[0] + y;
    bool inside = true;
    for (const auto& e : a)
      if (!bset.count(e + x)) {
        inside = false;
        break;
      }
    if (!inside) continue;
    if (found && *found != x)
      throw InternalError("two translations " + found->str() + " and " + x.str() +
                          " carry A into an independent B");
    found = x;
  }
  return found;
}

bool check_pair_family(const BitVec& bstar, std::span<const BitVec> basis,
                       std::span<const BitPair> pairs) {
  std::size_t len = bstar.size();
  require_common_length(basis, len, "check_pair_family B");
  if (!is_independent(basis)) throw UsageError("check_pair_family needs B independent");
  std::unordered_set<BitVec, BitVecHash> bset(basis.begin(), basis.end());
  if (!bset.count(bstar)) throw UsageError("b* is not a member of B");

  auto allowed = [&](const BitVec& x) {
    if (x.is_zero() || x == bstar) return false;
    return bset.count(x) > 0 || bset.count(x + bstar) > 0;
  };

  std::unordered_set<BitVec, BitVecHash> seen;
  for (const auto& [x, y] : pairs) {
    if (x.size() != len || y.size() != len)
      throw UsageError("check_pair_family: pair of wrong length");
    for (const BitVec* e : {&x, &y}) {
      if (!allowed(*e))
        throw UsageError("element " + e->str() + " lies outside (B u (b*+B)) \\ {0, b*}");
      if (!seen.insert(*e).second)
        throw UsageError("hypothesis (a) fails: element " + e->str() + " repeats");
    }
  }
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].first + pairs[i].second != pairs[0].first + pairs[0].second)
      throw UsageError("hypothesis (b) fails: pair " + std::to_string(i) +
                       " has a different sum");

  for (const auto& [x, y] : pairs) {
    bool ok = false;
    for (const auto& b : basis) {
      if (b == bstar) continue;
      BitVec partner = b + bstar;
      if ((x == b && y == partner) || (y == b && x == partner)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace overlap
