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

#include "overlap/forcing.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "overlap/gf2.hpp"
#include "overlap/ndrk.hpp"

namespace overlap {

namespace {

std::string show(const std::vector<Ordinal>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

std::string show(Ordinal a, Ordinal b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

class Reporter {
 public:
  Reporter(Diagnostics& d, std::size_t cap) : d_(d), cap_(cap) {}
  void add(const std::string& clause, std::string msg) {
    if (++count_[clause] <= cap_) d_.push_back({clause, std::move(msg)});
  }
  void close() {
    for (const auto& [clause, c] : count_)
      if (c > cap_) d_.push_back({clause, std::to_string(c - cap_) + " further violations"});
  }

 private:
  Diagnostics& d_;
  std::size_t cap_;
  std::map<std::string, std::size_t> count_;
};

std::vector<OrdinalPair> ordered_pairs(const std::vector<Ordinal>& w) {
  std::vector<OrdinalPair> out;
  for (auto a : w)
    for (auto b : w)
      if (a != b) out.emplace_back(a, b);
  return out;
}

// Clauses (*)_1 .. (*)_7.
void structural(const Condition& p, Reporter& rep) {
  if (p.iota < 3) rep.add("(iota)", "iota must be at least 3");
  if (p.w.size() < 5) rep.add("(*)_1", "|w| = " + std::to_string(p.w.size()) + " < 5");
  if (!std::is_sorted(p.w.begin(), p.w.end()) ||
      std::adjacent_find(p.w.begin(), p.w.end()) != p.w.end())
    rep.add("(*)_1", "w is not a strictly increasing list");
  if (p.n == 0) rep.add("(*)_1", "n must be positive");
  if (p.M == 0) rep.add("(*)_1", "M must be positive");

  std::vector<BitVec> etas;
  if (p.eta.size() != p.w.size()) rep.add("(*)_2", "eta is not indexed by w");
  for (auto a : p.w) {
    auto it = p.eta.find(a);
    if (it == p.eta.end()) {
      rep.add("(*)_2", "eta missing for " + std::to_string(a));
      continue;
    }
    if (it->second.size() != p.n) {
      rep.add("(*)_2", "eta of " + std::to_string(a) + " has length " +
                           std::to_string(it->second.size()));
      continue;
    }
    etas.push_back(it->second);
  }
  if (etas.size() == p.w.size() && !is_independent(etas))
    rep.add("(*)_2", "eta vectors are linearly dependent");

  if (p.forest.height() != p.n)
    rep.add("(*)_3", "forest height " + std::to_string(p.forest.height()) + " differs from n");
  if (p.forest.size() != p.M)
    rep.add("(*)_3", "forest has " + std::to_string(p.forest.size()) + " trees, M = " +
                         std::to_string(p.M));
  if (!p.forest.disjoint_tops()) rep.add("(*)_3", "top levels of the trees intersect");

  if (p.r.size() != p.M) rep.add("(*)_4", "r has " + std::to_string(p.r.size()) + " entries");
  for (std::size_t m = 0; m < p.r.size(); ++m)
    if (p.r[m] == 0 || p.r[m] > p.n)
      rep.add("(*)_4", "r_" + std::to_string(m) + " = " + std::to_string(p.r[m]) +
                           " outside [1, n]");

  auto pairs = ordered_pairs(p.w);
  if (p.h.size() != pairs.size()) rep.add("(*)_5", "h is not indexed by the pairs of w");
  if (p.g.size() != pairs.size()) rep.add("(*)_6", "g is not indexed by the pairs of w");
  std::vector<BitVec> all;
  for (auto [a, b] : pairs) {
    auto hi = p.h.find({a, b});
    auto gi = p.g.find({a, b});
    if (hi == p.h.end() || hi->second.size() != p.iota) {
      rep.add("(*)_5", "h" + show(a, b) + " missing or not of length iota");
      continue;
    }
    if (gi == p.g.end() || gi->second.size() != p.iota) {
      rep.add("(*)_6", "g" + show(a, b) + " missing or not of length iota");
      continue;
    }
    for (std::size_t i = 0; i < p.iota; ++i) {
      std::size_t hv = hi->second[i];
      const BitVec& gv = gi->second[i];
      std::string at = show(a, b) + " i=" + std::to_string(i);
      if (hv >= p.M) {
        rep.add("(*)_5", "h" + at + " = " + std::to_string(hv) + " is not below M");
        continue;
      }
      if (gv.size() != p.n) {
        rep.add("(*)_6", "g" + at + " has the wrong length");
        continue;
      }
      all.push_back(gv);
      if (hv < p.forest.size() && !p.forest.tree(hv).contains(gv))
        rep.add("(*)_6", "g" + at + " is not a top node of tree " + std::to_string(hv));
      auto ea = p.eta.find(a), eb = p.eta.find(b);
      auto gb = p.g.find({b, a});
      if (ea != p.eta.end() && eb != p.eta.end() && gb != p.g.end() &&
          gb->second.size() == p.iota && ea->second.size() == p.n && eb->second.size() == p.n &&
          gb->second[i].size() == p.n && ea->second + gv != eb->second + gb->second[i])
        rep.add("(*)_6", "sum identity fails at " + at);
    }
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i] == all[i - 1]) rep.add("(*)_7", "g value " + all[i].str() + " repeats");
}

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Clause (*)_11: inside each class of top-node pairs with a common sum, every
// iota-subset must be the g-family of some pair of w.
void sum_closure(const Condition& p, Reporter& rep) {
  const auto& top = p.forest.top_level();
  std::unordered_map<BitVec, std::vector<std::pair<std::size_t, std::size_t>>, BitVecHash> cls;
  for (std::size_t x = 0; x < top.size(); ++x)
    for (std::size_t y = x + 1; y < top.size(); ++y) cls[top[x] + top[y]].emplace_back(x, y);

  // g-families keyed by sum, each as a sorted list of top-node index pairs
  std::unordered_map<BitVec, std::set<std::vector<std::pair<std::size_t, std::size_t>>>, BitVecHash>
      fam;
  auto index_of = [&](const BitVec& v) {
    return static_cast<std::size_t>(std::lower_bound(top.begin(), top.end(), v) - top.begin());
  };
  for (auto a : p.w)
    for (auto b : p.w) {
      if (a >= b) continue;
      const auto& gf = p.g.at({a, b});
      const auto& gb = p.g.at({b, a});
      std::vector<std::pair<std::size_t, std::size_t>> f;
      for (std::size_t i = 0; i < p.iota; ++i) {
        std::size_t x = index_of(gf[i]), y = index_of(gb[i]);
        f.emplace_back(std::min(x, y), std::max(x, y));
      }
      std::sort(f.begin(), f.end());
      fam[gf[0] + gb[0]].insert(std::move(f));
    }

  std::vector<BitVec> sums;
  for (const auto& [s, v] : cls)
    if (v.size() >= p.iota) sums.push_back(s);
  std::sort(sums.begin(), sums.end());
  for (const auto& s : sums) {
    auto& pairs = cls[s];
    std::sort(pairs.begin(), pairs.end());
    const auto& have = fam[s];
    std::size_t need = binom(pairs.size(), p.iota);
    if (have.size() == need) continue;
    // name one iota-subset that is no g-family
    std::vector<std::size_t> idx(p.iota);
    for (std::size_t j = 0; j < p.iota; ++j) idx[j] = j;
    while (true) {
      std::vector<std::pair<std::size_t, std::size_t>> f;
      for (auto j : idx) f.push_back(pairs[j]);
      if (!have.count(f)) {
        std::string msg = "pairs with sum " + s.str() + ": {";
        for (std::size_t j = 0; j < f.size(); ++j)
          msg += (j ? ", {" : "{") + top[f[j].first].str() + "," + top[f[j].second].str() + "}";
        rep.add("(*)_11", msg + "} is not the g-family of any pair (" +
                              std::to_string(pairs.size()) + " pairs in the class)");
        break;
      }
      std::size_t k = p.iota;
      while (k > 0 && idx[k - 1] == pairs.size() - p.iota + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < p.iota; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

Diagnostics oracle_free(const Condition& p) {
  Diagnostics d;
  Reporter rep(d, 5);
  structural(p, rep);
  if (d.empty()) sum_closure(p, rep);
  rep.close();
  return d;
}

}  // namespace

std::optional<MStruct> structure_of(const Condition& p, std::size_t ell,
                                    const std::vector<Ordinal>& wstar) {
  if (wstar.size() < 5 || ell == 0 || ell > p.n) return std::nullopt;
  for (auto a : wstar)
    for (auto b : wstar) {
      if (a == b) continue;
      for (auto hv : p.h.at({a, b}))
        if (p.r.at(hv) > ell) return std::nullopt;
    }
  std::vector<BitVec> pre;
  for (auto a : wstar) pre.push_back(p.eta.at(a).prefix(ell));
  std::vector<BitVec> u = pre;
  std::sort(u.begin(), u.end());
  if (std::adjacent_find(u.begin(), u.end()) != u.end()) return std::nullopt;
  MStruct m = MStruct::blank(ell, p.iota, u);
  std::vector<std::size_t> pos;
  for (const auto& x : pre) pos.push_back(*m.position(x));
  for (std::size_t a = 0; a < wstar.size(); ++a)
    for (std::size_t b = 0; b < wstar.size(); ++b) {
      if (a == b) continue;
      const auto& hv = p.h.at({wstar[a], wstar[b]});
      const auto& gv = p.g.at({wstar[a], wstar[b]});
      for (std::size_t i = 0; i < p.iota; ++i) {
        m.h[m.slot(pos[a], pos[b], i)] = hv[i];
        m.g[m.slot(pos[a], pos[b], i)] = gv[i].prefix(ell);
      }
    }
  if (!is_valid(m, p.forest)) return std::nullopt;
  return m;
}

std::vector<CalMEntry> calM(const Condition& p) {
  {
    Diagnostics d;
    Reporter rep(d, 1);
    structural(p, rep);
    if (!d.empty()) throw UsageError("calM needs a condition passing (*)_1 .. (*)_7");
  }
  std::size_t W = p.w.size();
  if (W > 20) throw ResourceError("calM over more than 2^20 subsets");
  std::vector<CalMEntry> out;
  std::unordered_map<MStruct, std::size_t, MStructHash> seen;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << W); ++mask) {
    if (std::popcount(mask) < 5) continue;
    std::vector<Ordinal> ws;
    for (std::size_t j = 0; j < W; ++j)
      if ((mask >> j) & 1) ws.push_back(p.w[j]);
    std::size_t lo = 1;
    for (auto a : ws)
      for (auto b : ws)
        if (a != b)
          for (auto hv : p.h.at({a, b})) lo = std::max(lo, p.r.at(hv));
    for (std::size_t ell = lo; ell <= p.n; ++ell) {
      auto m = structure_of(p, ell, ws);
      if (!m) continue;
      auto [it, fresh] = seen.emplace(*m, out.size());
      if (fresh) out.push_back({std::move(*m), {}});
      out[it->second].witnesses.push_back({ell, ws});
    }
  }
  return out;
}

Diagnostics validate_condition(const Condition& p, const RankOracle& o, ValidateOptions opt) {
  Diagnostics d;
  Reporter rep(d, opt.max_reports);
  structural(p, rep);
  if (!d.empty()) {
    rep.close();
    return d;
  }
  auto entries = calM(p);

  struct Flat {
    std::size_t entry;
    const CalMWitness* wit;
  };
  std::map<std::size_t, std::vector<Flat>> by_level;
  for (std::size_t e = 0; e < entries.size(); ++e)
    for (const auto& wt : entries[e].witnesses) by_level[wt.ell].push_back({e, &wt});

  auto triple = [&](const std::vector<Ordinal>& v, const char* clause) -> std::optional<RankTriple> {
    auto t = o.query(v);
    if (!t) rep.add(clause, "oracle " + o.describe() + " has no entry for " + show(v));
    else if (t->k >= v.size()) {
      rep.add(clause, "oracle gives k >= |v| for " + show(v));
      return std::nullopt;
    }
    return t;
  };

  // (*)_9
  for (const auto& [ell, group] : by_level) {
    bool sweep = opt.rho == RhoSearch::Exhaustive && ell <= opt.exhaustive_max_level;
    // translation leaves pairwise sums and g-pair families unchanged
    std::map<std::string, std::vector<const Flat*>> buckets;
    for (const auto& x : group) {
      const MStruct& m = entries[x.entry].m;
      std::vector<std::string> sums, fams;
      for (std::size_t a = 0; a < m.width(); ++a)
        for (std::size_t b = a + 1; b < m.width(); ++b) {
          sums.push_back((m.u[a] + m.u[b]).str());
          std::vector<std::string> f;
          for (std::size_t i = 0; i < m.iota; ++i) {
            std::string g0 = m.g[m.slot(a, b, i)].str(), g1 = m.g[m.slot(b, a, i)].str();
            f.push_back(std::min(g0, g1) + "/" + std::max(g0, g1));
          }
          std::sort(f.begin(), f.end());
          std::string joined;
          for (const auto& e : f) joined += e + ";";
          fams.push_back(joined);
        }
      std::sort(sums.begin(), sums.end());
      std::sort(fams.begin(), fams.end());
      std::string key = std::to_string(x.wit->wstar.size()) + "#";
      for (const auto& e : sums) key += e + ",";
      key += "#";
      for (const auto& e : fams) key += e + "|";
      buckets[key].push_back(&x);
    }
    for (const auto& [key, bucket] : buckets)
      for (const Flat* xp : bucket)
        for (const Flat* yp : bucket) {
        const Flat& x = *xp;
        const Flat& y = *yp;
        if (xp == yp) continue;
        const auto& w0 = x.wit->wstar;
        const auto& w1 = y.wit->wstar;
        const MStruct& m0 = entries[x.entry].m;
        const MStruct& m1 = entries[y.entry].m;
        std::vector<BitVec> rhos;
        if (sweep) {
          for (std::uint64_t v = 0; v < (std::uint64_t{1} << ell); ++v) {
            BitVec r(ell);
            for (std::size_t i = 0; i < ell; ++i)
              if ((v >> (ell - 1 - i)) & 1) r.set(i);
            rhos.push_back(std::move(r));
          }
        } else {
          for (const auto& v : m1.u) rhos.push_back(m0.u[0] + v);
        }
        for (const auto& rho : rhos) {
          std::vector<BitVec> moved;
          for (const auto& v : m1.u) moved.push_back(v + rho);
          std::sort(moved.begin(), moved.end());
          if (moved != m0.u) continue;
          if (!essentially_same(m0, translate(m1, rho))) continue;
          auto t0 = triple(w0, "(*)_9");
          auto t1 = triple(w1, "(*)_9");
          if (!t0 || !t1) continue;
          std::string at = "m(" + std::to_string(ell) + "," + show(w0) + ") vs m(" +
                           std::to_string(ell) + "," + show(w1) + ")+" + rho.str();
          if (!(*t0 == *t1)) {
            rep.add("(*)_9", at + ": rank data differ");
            continue;
          }
          Ordinal a = w0[t0->k], b = w1[t1->k];
          if (p.eta.at(a).prefix(ell) + rho != p.eta.at(b).prefix(ell))
            rep.add("(*)_9", at + ": eta of " + std::to_string(a) + " and " + std::to_string(b) +
                                 " are not aligned by the translation");
        }
      }
  }

  // (*)_10
  for (std::size_t e = 0; e < entries.size(); ++e)
    for (const auto& wt : entries[e].witnesses) {
      auto t = triple(wt.wstar, "(*)_10");
      if (!t || t->rk != -1) continue;
      Ordinal a = wt.wstar[t->k];
      BitVec root = p.eta.at(a).prefix(wt.ell);
      std::vector<Ordinal> same;
      for (auto b : p.w)
        if (p.eta.at(b).prefix(wt.ell) == root) same.push_back(b);
      if (same.size() < 2) continue;
      for (std::size_t f = 0; f < entries.size(); ++f) {
        const MStruct& n = entries[f].m;
        if (n.ell <= wt.ell) continue;
        if (branching(n, root) < 2) continue;
        if (!essentially_extends(entries[e].m, n)) continue;
        rep.add("(*)_10", "m(" + std::to_string(wt.ell) + "," + show(wt.wstar) +
                              ") has rank -1 but eta of " + std::to_string(a) +
                              " branches in a structure of level " + std::to_string(n.ell));
      }
    }

  sum_closure(p, rep);
  rep.close();
  return d;
}

bool leq(const Condition& p, const Condition& q) {
  if (p.iota != q.iota) return false;
  if (!std::includes(q.w.begin(), q.w.end(), p.w.begin(), p.w.end())) return false;
  if (p.n > q.n || p.M > q.M) return false;
  if (p.forest.size() < p.M || q.forest.size() < p.M || p.r.size() < p.M || q.r.size() < p.M)
    return false;
  if (q.forest.height() < p.n) return false;
  for (std::size_t m = 0; m < p.M; ++m) {
    if (p.r[m] != q.r[m]) return false;
    if (!(q.forest.tree(m).truncate(p.n) == p.forest.tree(m))) return false;
  }
  for (auto a : p.w) {
    auto pa = p.eta.find(a), qa = q.eta.find(a);
    if (pa == p.eta.end() || qa == q.eta.end() || !pa->second.is_prefix_of(qa->second))
      return false;
  }
  for (const auto& [key, hv] : p.h) {
    auto qh = q.h.find(key);
    if (qh == q.h.end() || qh->second != hv) return false;
    auto pg = p.g.find(key), qg = q.g.find(key);
    if (pg == p.g.end() || qg == q.g.end() || pg->second.size() != qg->second.size())
      return false;
    for (std::size_t i = 0; i < pg->second.size(); ++i)
      if (!pg->second[i].is_prefix_of(qg->second[i])) return false;
  }
  return true;
}

std::optional<std::pair<BitVec, MStruct>> capture_translate(const Condition& p, const MStruct& m) {
  auto d = oracle_free(p);
  if (!d.empty()) throw UsageError("condition fails " + d[0].clause + ": " + d[0].message);
  if (!is_valid(m, p.forest)) throw UsageError("structure is not valid over the condition's forest");
  if (m.ell != p.n) throw UsageError("structure level differs from n");
  if (m.width() < 5) throw UsageError("structure needs |u| >= 5");
  if (m.iota != p.iota) throw UsageError("structure iota differs from the condition's");
  std::vector<BitVec> etas;
  for (auto a : p.w) etas.push_back(p.eta.at(a));
  auto rho = solve_translate(m.u, etas);
  if (!rho) throw InternalError("no translation carries u into the eta family");
  std::vector<Ordinal> w0;
  for (auto a : p.w)
    if (m.position(p.eta.at(a) + *rho)) w0.push_back(a);
  auto n = structure_of(p, p.n, w0);
  if (!n) throw InternalError("m(n, w0) is not a structure of the condition");
  if (!essentially_same(translate(m, *rho), *n))
    throw InternalError("translated structure is not essentially the captured one");
  return std::make_pair(*rho, *n);
}

Condition bootstrap(std::vector<Ordinal> w, std::size_t iota) {
  std::sort(w.begin(), w.end());
  if (std::adjacent_find(w.begin(), w.end()) != w.end()) throw UsageError("w repeats an ordinal");
  if (w.size() < 5) throw UsageError("bootstrap needs |w| >= 5");
  if (iota < 3) throw UsageError("bootstrap needs iota >= 3");
  std::size_t W = w.size();
  std::size_t P = W * (W - 1) / 2;
  Condition p;
  p.iota = iota;
  p.w = w;
  p.n = W + P * iota;
  p.M = P * iota;
  for (std::size_t a = 0; a < W; ++a) p.eta[w[a]] = BitVec::unit(p.n, a);
  std::vector<Tree> trees;
  std::size_t pair = 0;
  for (std::size_t a = 0; a < W; ++a)
    for (std::size_t b = a + 1; b < W; ++b, ++pair) {
      auto& gab = p.g[{w[a], w[b]}];
      auto& gba = p.g[{w[b], w[a]}];
      auto& hab = p.h[{w[a], w[b]}];
      auto& hba = p.h[{w[b], w[a]}];
      for (std::size_t i = 0; i < iota; ++i) {
        BitVec mark = BitVec::unit(p.n, W + pair * iota + i);
        gab.push_back(BitVec::unit(p.n, b) + mark);
        gba.push_back(BitVec::unit(p.n, a) + mark);
        hab.push_back(pair * iota + i);
        hba.push_back(pair * iota + i);
        trees.emplace_back(p.n, std::vector<BitVec>{gab.back(), gba.back()});
      }
    }
  p.forest = Forest(p.n, std::move(trees));
  p.r.assign(p.M, p.n);
  return p;
}

Condition extend_add_element(const Condition& p, Ordinal beta) {
  if (std::binary_search(p.w.begin(), p.w.end(), beta))
    throw UsageError("ordinal " + std::to_string(beta) + " is already in w");
  std::size_t W = p.w.size(), iota = p.iota;
  std::size_t N = W * iota + 2;
  Condition q;
  q.iota = iota;
  q.w = p.w;
  q.w.insert(std::lower_bound(q.w.begin(), q.w.end(), beta), beta);
  q.n = p.n + N;
  q.M = p.M + N - 2;
  BitVec pad = BitVec::zeros(N);
  for (const auto& [a, e] : p.eta) q.eta[a] = e.concat(pad);
  q.eta[beta] = BitVec::zeros(p.n + 1).concat(BitVec::ones(N - 1));
  for (const auto& [key, hv] : p.h) q.h[key] = hv;
  for (const auto& [key, gv] : p.g)
    for (const auto& x : gv) q.g[key].push_back(x.concat(pad));

  std::vector<Tree> trees;
  for (const auto& t : p.forest.trees()) {
    std::vector<BitVec> tops;
    for (const auto& x : t.tops()) tops.push_back(x.concat(pad));
    trees.emplace_back(q.n, std::move(tops));
  }
  q.r = p.r;
  for (std::size_t j = 0; j < W; ++j) {
    Ordinal a = p.w[j];
    for (std::size_t i = 0; i < iota; ++i) {
      std::size_t s = j * iota + i;
      BitVec up = BitVec::zeros(p.n);
      up.append(true).append(false, s + 1).append(true, N - s - 2);
      BitVec down = p.eta.at(a);
      down.append(true, s + 2).append(false, N - s - 2);
      q.g[{a, beta}].push_back(up);
      q.g[{beta, a}].push_back(down);
      q.h[{a, beta}].push_back(p.M + s);
      q.h[{beta, a}].push_back(p.M + s);
      trees.emplace_back(q.n, std::vector<BitVec>{up, down});
      q.r.push_back(q.n);
    }
  }
  q.forest = Forest(q.n, std::move(trees));
  return q;
}

Ordinal FreshOrdinals::next(const std::vector<Ordinal>& used) {
  while (next_ <= limit_ && std::binary_search(used.begin(), used.end(), next_)) ++next_;
  if (next_ > limit_) throw ResourceError("fresh ordinal supply exhausted");
  return next_++;
}

Condition extend_dense(const Condition& p, Ordinal beta, std::size_t n0, std::size_t M0,
                       FreshOrdinals& fresh) {
  Condition q = p;
  if (!std::binary_search(q.w.begin(), q.w.end(), beta)) q = extend_add_element(q, beta);
  while (q.n <= n0 || q.M <= M0) q = extend_add_element(q, fresh.next(q.w));
  return q;
}

Condition relabel(const Condition& p, const std::map<Ordinal, Ordinal>& to) {
  auto f = [&](Ordinal a) {
    auto it = to.find(a);
    return it == to.end() ? a : it->second;
  };
  Condition q = p;
  q.w.clear();
  for (auto a : p.w) q.w.push_back(f(a));
  std::sort(q.w.begin(), q.w.end());
  if (std::adjacent_find(q.w.begin(), q.w.end()) != q.w.end())
    throw UsageError("relabelling is not injective on w");
  q.eta.clear();
  for (const auto& [a, e] : p.eta) q.eta[f(a)] = e;
  q.h.clear();
  q.g.clear();
  for (const auto& [key, hv] : p.h) q.h[{f(key.first), f(key.second)}] = hv;
  for (const auto& [key, gv] : p.g) q.g[{f(key.first), f(key.second)}] = gv;
  return q;
}

std::optional<OrderIso> check_twin(const Condition& p1, const Condition& p2, const RankOracle& o) {
  if (p1.iota != p2.iota || p1.w.size() != p2.w.size() || p1.n != p2.n || p1.M != p2.M)
    return std::nullopt;
  if (!(p1.forest == p2.forest) || p1.r != p2.r) return std::nullopt;
  OrderIso pi;
  for (std::size_t j = 0; j < p1.w.size(); ++j) pi[p1.w[j]] = p2.w[j];
  for (auto a : p1.w)
    if (std::binary_search(p2.w.begin(), p2.w.end(), a) && pi[a] != a) return std::nullopt;
  for (auto a : p1.w) {
    auto e1 = p1.eta.find(a), e2 = p2.eta.find(pi[a]);
    if (e1 == p1.eta.end() || e2 == p2.eta.end() || e1->second != e2->second) return std::nullopt;
  }
  for (const auto& [key, hv] : p1.h) {
    OrdinalPair k2{pi[key.first], pi[key.second]};
    auto h2 = p2.h.find(k2);
    auto g1 = p1.g.find(key), g2 = p2.g.find(k2);
    if (h2 == p2.h.end() || h2->second != hv) return std::nullopt;
    if (g1 == p1.g.end() || g2 == p2.g.end() || g1->second != g2->second) return std::nullopt;
  }
  if (p1.w.size() > 20) throw ResourceError("twin check over more than 2^20 subsets");
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p1.w.size()); ++mask) {
    std::vector<Ordinal> v, pv;
    for (std::size_t j = 0; j < p1.w.size(); ++j)
      if ((mask >> j) & 1) {
        v.push_back(p1.w[j]);
        pv.push_back(p2.w[j]);
      }
    auto a = o.query(v), b = o.query(pv);
    if (!a || !b || !(*a == *b)) return std::nullopt;
  }
  return pi;
}

std::vector<OverlapCertificate> overlap_certificates(const Condition& p) {
  std::vector<OverlapCertificate> out;
  for (auto a : p.w)
    for (auto b : p.w) {
      if (a >= b) continue;
      OverlapCertificate c;
      c.alpha = a;
      c.beta = b;
      const BitVec& ea = p.eta.at(a);
      const BitVec& eb = p.eta.at(b);
      c.overlap = overlap(p.forest, ea, eb);
      bool ok = true;
      for (std::size_t i = 0; i < p.iota; ++i) {
        c.points.push_back(ea + p.g.at({a, b})[i]);
        c.points.push_back(ea + p.g.at({b, a})[i]);
      }
      for (const auto& z : c.points)
        ok = ok && p.forest.in_top_level(z + ea) && p.forest.in_top_level(z + eb);
      std::vector<BitVec> sorted = c.points;
      std::sort(sorted.begin(), sorted.end());
      ok = ok && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      c.ok = ok && c.overlap >= 2 * p.iota;
      out.push_back(std::move(c));
    }
  return out;
}

GenericRun build_chain(const Condition& seed, const std::vector<ScheduleStep>& schedule,
                       const RankOracle& o, FreshOrdinals& fresh) {
  auto d = validate_condition(seed, o);
  if (!d.empty()) throw UsageError("seed fails " + d[0].clause + ": " + d[0].message);
  GenericRun run;
  run.iota = seed.iota;
  run.chain.push_back(seed);
  run.step_diagnostics.push_back({});
  for (const auto& step : schedule) {
    const Condition& last = run.chain.back();
    Condition q = extend_dense(last, step.beta, step.n0, step.M0, fresh);
    if (!leq(last, q)) throw InternalError("extension is not above its predecessor");
    run.step_diagnostics.push_back(validate_condition(q, o));
    run.chain.push_back(std::move(q));
  }
  const Condition& top = run.chain.back();
  run.forest = top.forest;
  run.eta = top.eta;
  run.certificates = overlap_certificates(top);
  return run;
}

RankOracle default_oracle(const std::vector<const Condition*>& conditions) {
  Ordinal top = 0;
  for (const auto* c : conditions)
    for (auto a : c->w) top = std::max(top, a);
  std::size_t size = static_cast<std::size_t>(top) + 2;
  return RankOracle::order(size, size - 1);
}

}  // namespace overlap
