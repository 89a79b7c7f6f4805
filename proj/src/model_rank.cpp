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

#include "overlap/model_rank.hpp"

#include <algorithm>
#include <functional>

#include "overlap/error.hpp"

namespace overlap {

FiniteModel::FiniteModel(std::size_t size, std::vector<Relation> relations)
    : size_(size), relations_(std::move(relations)) {
  for (auto& r : relations_) {
    for (const auto& t : r.tuples) {
      if (t.size() != r.arity)
        throw UsageError("relation " + r.name + " has a tuple of the wrong arity");
      for (auto e : t)
        if (e >= size_)
          throw UsageError("relation " + r.name + " mentions element " + std::to_string(e) +
                           " outside the universe");
    }
    std::sort(r.tuples.begin(), r.tuples.end());
    r.tuples.erase(std::unique(r.tuples.begin(), r.tuples.end()), r.tuples.end());
    std::unordered_set<std::string> idx;
    for (const auto& t : r.tuples) idx.insert(key(t));
    index_.push_back(std::move(idx));
  }
}

std::string FiniteModel::key(std::span<const Element> args) const {
  std::string k;
  for (auto e : args) {
    k += std::to_string(e);
    k += ',';
  }
  return k;
}

bool FiniteModel::holds(std::size_t rel, std::span<const Element> args) const {
  return index_.at(rel).count(key(args)) > 0;
}

TypeFingerprint qf_type(const FiniteModel& m, std::span<const Element> tuple) {
  for (auto e : tuple)
    if (e >= m.size())
      throw UsageError("element " + std::to_string(e) + " outside the universe");
  std::size_t t = tuple.size();
  TypeFingerprint fp = "=";
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j) fp += tuple[i] == tuple[j] ? '1' : '0';
  std::vector<Element> args;
  for (std::size_t r = 0; r < m.relations().size(); ++r) {
    std::size_t arity = m.relations()[r].arity;
    fp += '|';
    if (t == 0 && arity > 0) continue;
    std::vector<std::size_t> pos(arity, 0);
    while (true) {
      args.clear();
      for (auto p : pos) args.push_back(tuple[p]);
      fp += m.holds(r, args) ? '1' : '0';
      std::size_t d = arity;
      while (d > 0 && ++pos[d - 1] == t) pos[--d] = 0;
      if (d == 0) break;
    }
  }
  return fp;
}

ThetaRank::ThetaRank(const FiniteModel& m, RankParams p) : model_(m), params_(p) {
  if (p.theta < 1) throw UsageError("theta must be at least 1");
}

ThetaRank::Key ThetaRank::normalize(std::vector<Element> w) const {
  if (w.empty()) throw UsageError("rank of the empty set");
  std::sort(w.begin(), w.end());
  if (std::adjacent_find(w.begin(), w.end()) != w.end())
    throw UsageError("w lists an element twice");
  for (auto e : w)
    if (e >= model_.size())
      throw UsageError("element " + std::to_string(e) + " outside the universe");
  return w;
}

std::vector<Element> ThetaRank::realizers(const Key& w, std::size_t k) const {
  TypeFingerprint fp = qf_type(model_, w);
  std::vector<Element> out;
  Key t = w;
  for (Element a = 0; a < model_.size(); ++a) {
    if (a == w[k]) continue;
    t[k] = a;
    if (qf_type(model_, t) == fp) out.push_back(a);
  }
  return out;
}

std::size_t ThetaRank::first_thin(const Key& w) const {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (realizers(w, k).size() < params_.theta) return k;
  return w.size();
}

namespace {

std::vector<Element> with(std::vector<Element> w, Element a) {
  w.insert(std::lower_bound(w.begin(), w.end(), a), a);
  return w;
}

}  // namespace

int ThetaRank::best_extension(const Key& w, std::size_t k) {
  int best = -1;
  for (auto a : realizers(w, k)) best = std::max(best, rk_impl(with(w, a)));
  return best;
}

int ThetaRank::rk_impl(const Key& w) {
  if (auto it = rk_memo_.find(w); it != rk_memo_.end()) return it->second;
  int r = -1;
  if (first_thin(w) == w.size()) {
    int s = w.size() == model_.size() ? -1 : best_extension(w, 0);
    for (std::size_t k = 1; k < w.size() && s >= 0; ++k) s = std::min(s, best_extension(w, k));
    r = std::max(s + 1, 0);
  }
  rk_memo_[w] = r;
  return r;
}

int ThetaRank::best_star(const Key& w, std::size_t k) {
  std::vector<Element> cand = realizers(w, k);
  std::size_t c = cand.size();
  if (c < params_.theta) return -1;
  std::vector<int> single(c);
  for (std::size_t x = 0; x < c; ++x) single[x] = star_impl(with(w, cand[x]));
  Key rest = w;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::vector<int>> pair(c, std::vector<int>(c, -1));
  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = x + 1; y < c; ++y)
      pair[x][y] = pair[y][x] = star_impl(with(with(rest, cand[x]), cand[y]));

  auto clique = [&](int alpha) {
    std::vector<std::size_t> pool;
    for (std::size_t x = 0; x < c; ++x)
      if (single[x] >= alpha) pool.push_back(x);
    std::vector<std::size_t> chosen;
    std::function<bool(std::size_t)> grow = [&](std::size_t from) {
      if (chosen.size() == params_.theta) return true;
      if (pool.size() - from < params_.theta - chosen.size()) return false;
      for (std::size_t i = from; i < pool.size(); ++i) {
        bool ok = true;
        for (auto y : chosen) ok = ok && pair[pool[i]][y] >= alpha;
        if (!ok) continue;
        chosen.push_back(pool[i]);
        if (grow(i + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    return grow(0);
  };

  int top = *std::max_element(single.begin(), single.end());
  for (int alpha = top; alpha >= 0; --alpha)
    if (clique(alpha)) return alpha;
  return -1;
}

int ThetaRank::star_impl(const Key& w) {
  if (auto it = star_memo_.find(w); it != star_memo_.end()) return it->second;
  int r = -1;
  if (first_thin(w) == w.size()) {
    int s = best_star(w, 0);
    for (std::size_t k = 1; k < w.size() && s >= 0; ++k) s = std::min(s, best_star(w, k));
    r = std::max(s + 1, 0);
  }
  star_memo_[w] = r;
  return r;
}

int ThetaRank::rk(std::vector<Element> w) {
  Key k = normalize(std::move(w));
  return rk_impl(k);
}

int ThetaRank::rk_star(std::vector<Element> w) {
  Key k = normalize(std::move(w));
  return star_impl(k);
}

std::size_t ThetaRank::witness_k(std::vector<Element> w) {
  Key key = normalize(std::move(w));
  int r = rk_impl(key);
  if (r < 0) return first_thin(key);
  for (std::size_t k = 0; k < key.size(); ++k)
    if (best_extension(key, k) < r) return k;
  throw InternalError("no position witnesses the rank");
}

int rk(const FiniteModel& m, const std::vector<Element>& w, RankParams p) {
  if (w.size() > p.max_w) throw UsageError("|w| exceeds max_w");
  return ThetaRank(m, p).rk(w);
}

int rk_star(const FiniteModel& m, const std::vector<Element>& w, RankParams p) {
  if (w.size() > p.max_w) throw UsageError("|w| exceeds max_w");
  return ThetaRank(m, p).rk_star(w);
}

bool npr_check(const FiniteModel& m, int eps, RankParams p) {
  ThetaRank r(m, p);
  std::vector<Element> w;
  std::function<bool(Element)> walk = [&](Element from) {
    for (Element a = from; a < m.size(); ++a) {
      w.push_back(a);
      if (r.rk(w) >= eps) return false;
      if (w.size() < p.max_w && !walk(a + 1)) return false;
      w.pop_back();
    }
    return true;
  };
  return walk(0);
}

FiniteModel order_model(std::size_t n) {
  if (n < 1) throw UsageError("order model needs a nonempty universe");
  Relation q{"Q", 2, {}};
  for (Element a = 0; a < n; ++a)
    for (Element b = a + 1; b < n; ++b) q.tuples.push_back({a, b});
  return FiniteModel(n, {q});
}

FiniteModel build_successor_model(const FiniteModel& m, std::size_t l, std::size_t lp,
                                  const std::map<std::size_t, std::vector<Element>>& f) {
  if (m.size() != l) throw UsageError("model universe differs from L");
  if (lp < l) throw UsageError("L' below L");
  for (std::size_t gamma = l; gamma < lp; ++gamma) {
    auto it = f.find(gamma);
    if (it == f.end()) throw UsageError("no map given for " + std::to_string(gamma));
    if (it->second.size() != gamma)
      throw UsageError("map for " + std::to_string(gamma) + " has the wrong domain");
    for (std::size_t a = 0; a < gamma; ++a) {
      if (it->second[a] >= l)
        throw UsageError("map for " + std::to_string(gamma) + " leaves the universe");
      if (gamma == l && it->second[a] != a)
        throw UsageError("map for L must be the identity");
    }
  }
  std::vector<Relation> rels = m.relations();
  for (const auto& r : rels)
    if (r.name == "S" || r.name == "T" || r.name.rfind("Q:", 0) == 0)
      throw UsageError("relation name " + r.name + " clashes with the added vocabulary");
  for (std::size_t i = 0; i < m.relations().size(); ++i) {
    const Relation& r = m.relations()[i];
    Relation q{"Q:" + r.name, r.arity + 1, {}};
    for (std::size_t top = l; top < lp; ++top) {
      const auto& fg = f.at(top);
      std::vector<Element> args(r.arity, 0), image(r.arity);
      while (true) {
        for (std::size_t j = 0; j < r.arity; ++j) image[j] = fg[args[j]];
        if (m.holds(i, image)) {
          auto t = args;
          t.push_back(top);
          q.tuples.push_back(std::move(t));
        }
        std::size_t d = r.arity;
        while (d > 0 && ++args[d - 1] == top) args[--d] = 0;
        if (d == 0) break;
      }
    }
    rels.push_back(std::move(q));
  }
  Relation s{"S", 2, {}};
  for (Element a = 0; a < lp; ++a)
    for (Element b = a + 1; b < lp; ++b) s.tuples.push_back({a, b});
  Relation t{"T", 1, {}};
  for (Element c = l; c < lp; ++c) t.tuples.push_back({c});
  rels.push_back(std::move(s));
  rels.push_back(std::move(t));
  return FiniteModel(lp, std::move(rels));
}

}  // namespace overlap
