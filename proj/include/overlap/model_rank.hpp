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
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace overlap {

using Element = std::size_t;

struct Relation {
  std::string name;
  std::size_t arity = 0;
  std::vector<std::vector<Element>> tuples;
};

class FiniteModel {
 public:
  FiniteModel(std::size_t size, std::vector<Relation> relations);

  std::size_t size() const noexcept { return size_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }
  bool holds(std::size_t rel, std::span<const Element> args) const;

 private:
  std::string key(std::span<const Element> args) const;

  std::size_t size_;
  std::vector<Relation> relations_;
  std::vector<std::unordered_set<std::string>> index_;
};

struct RankParams {
  std::size_t theta = 1;
  std::size_t max_w = 3;
};

// Complete quantifier-free type of a tuple: the equality pattern, then for
// each relation its truth value on every tuple of positions.
using TypeFingerprint = std::string;

TypeFingerprint qf_type(const FiniteModel& m, std::span<const Element> tuple);

// rk and rk* with "uncountable" read as "at least theta"; memoized by
// sorted w.  Not thread safe.
class ThetaRank {
 public:
  ThetaRank(const FiniteModel& m, RankParams p);

  int rk(std::vector<Element> w);
  int rk_star(std::vector<Element> w);
  // Least k at which rank does not rise further (for rk = -1, the least k
  // at which the replacement count falls short of theta).
  std::size_t witness_k(std::vector<Element> w);

  const FiniteModel& model() const noexcept { return model_; }
  const RankParams& params() const noexcept { return params_; }

 private:
  using Key = std::vector<Element>;
  Key normalize(std::vector<Element> w) const;
  // replacements of position k realizing the type of w, excluding w[k]
  std::vector<Element> realizers(const Key& w, std::size_t k) const;
  // first k where fewer than theta realizers exist, or w.size()
  std::size_t first_thin(const Key& w) const;
  int rk_impl(const Key& w);
  int star_impl(const Key& w);
  int best_extension(const Key& w, std::size_t k);
  int best_star(const Key& w, std::size_t k);

  const FiniteModel& model_;
  RankParams params_;
  std::map<Key, int> rk_memo_, star_memo_;
};

int rk(const FiniteModel& m, const std::vector<Element>& w, RankParams p);
int rk_star(const FiniteModel& m, const std::vector<Element>& w, RankParams p);

// max rk over nonempty w with |w| <= p.max_w is below eps
bool npr_check(const FiniteModel& m, int eps, RankParams p);

FiniteModel order_model(std::size_t n);

// f[gamma] lists f_gamma(0..gamma-1) for gamma in [l, lp); f[l] must be the
// identity.  Values must lie below l.
FiniteModel build_successor_model(const FiniteModel& m, std::size_t l, std::size_t lp,
                                  const std::map<std::size_t, std::vector<Element>>& f);

}  // namespace overlap
