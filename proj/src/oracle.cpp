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

#include "overlap/oracle.hpp"

#include <mutex>

#include "overlap/error.hpp"

namespace overlap {

struct RankOracle::State {
  std::string description;
  std::map<OrdinalSet, RankTriple> table;
  bool from_model = false;
  std::unique_ptr<FiniteModel> model;
  std::unique_ptr<ThetaRank> rank;
  std::map<Ordinal, Element> embedding;
  std::mutex mu;
  std::map<OrdinalSet, std::optional<RankTriple>> cache;
};

std::uint64_t fingerprint_hash(const TypeFingerprint& fp) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : fp) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  // keep values exactly representable as JSON doubles
  return h & ((std::uint64_t{1} << 53) - 1);
}

RankOracle RankOracle::table(std::map<OrdinalSet, RankTriple> entries) {
  auto s = std::make_shared<State>();
  for (const auto& [v, t] : entries) {
    if (v.empty()) throw UsageError("oracle table has an entry for the empty set");
    if (t.k >= v.size()) throw UsageError("oracle table entry has k >= |v|");
    if (t.rk < -1) throw UsageError("oracle table entry has rank below -1");
  }
  s->description = "table(" + std::to_string(entries.size()) + " entries)";
  s->table = std::move(entries);
  return RankOracle(s);
}

RankOracle RankOracle::model(FiniteModel m, RankParams p, std::map<Ordinal, Element> embedding) {
  auto s = std::make_shared<State>();
  s->from_model = true;
  Element last = 0;
  bool first = true;
  for (const auto& [o, e] : embedding) {
    if (e >= m.size()) throw UsageError("embedding leaves the model universe");
    if (!first && e <= last) throw UsageError("embedding is not increasing");
    last = e;
    first = false;
  }
  s->description = "model(size " + std::to_string(m.size()) + ", theta " +
                   std::to_string(p.theta) + ")";
  s->model = std::make_unique<FiniteModel>(std::move(m));
  s->rank = std::make_unique<ThetaRank>(*s->model, p);
  s->embedding = std::move(embedding);
  return RankOracle(s);
}

RankOracle RankOracle::order(std::size_t size, std::size_t theta) {
  RankOracle o = model(order_model(size), RankParams{theta, size});
  o.state_->description = "order(size " + std::to_string(size) + ", theta " +
                          std::to_string(theta) + ")";
  return o;
}

std::optional<RankTriple> RankOracle::query(const OrdinalSet& v) const {
  State& s = *state_;
  if (v.empty()) return std::nullopt;
  if (!s.from_model) {
    auto it = s.table.find(v);
    if (it == s.table.end()) return std::nullopt;
    return it->second;
  }
  std::lock_guard<std::mutex> lock(s.mu);
  if (auto it = s.cache.find(v); it != s.cache.end()) return it->second;
  std::optional<RankTriple> out;
  std::vector<Element> elems;
  bool inside = true;
  for (auto o : v) {
    Element e = o;
    if (!s.embedding.empty()) {
      auto it = s.embedding.find(o);
      if (it == s.embedding.end()) {
        inside = false;
        break;
      }
      e = it->second;
    }
    if (e >= s.model->size()) {
      inside = false;
      break;
    }
    elems.push_back(e);
  }
  if (inside) {
    RankTriple t;
    t.rk = s.rank->rk(elems);
    t.zeta = fingerprint_hash(qf_type(*s.model, elems));
    t.k = s.rank->witness_k(elems);
    out = t;
  }
  s.cache[v] = out;
  return out;
}

std::string RankOracle::describe() const { return state_->description; }

}  // namespace overlap
