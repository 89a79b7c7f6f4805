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

#include "overlap/ndrk.hpp"

#include <algorithm>
#include <string>

#include "overlap/parallel.hpp"

namespace overlap {

StructurePoset::StructurePoset(const Forest& f, std::size_t iota, std::size_t max_u,
                               std::size_t cap)
    : forest_(f), iota_(iota), max_u_(max_u) {
  for (std::size_t ell = 1; ell <= f.height(); ++ell)
    for_each_structure(f, iota, ell, max_u, [&](const MStruct& m) {
      if (nodes_.size() >= cap)
        throw ResourceError("structure poset exceeds " + std::to_string(cap) + " elements");
      index_.emplace(m, nodes_.size());
      nodes_.push_back(m);
    });
  upper_.resize(nodes_.size());
  for (std::size_t j = 0; j < nodes_.size(); ++j)
    for (std::size_t ell = 1; ell < nodes_[j].ell; ++ell) {
      auto r = restrict_to_level(nodes_[j], ell);
      if (!r) continue;
      auto it = index_.find(*r);
      if (it != index_.end()) upper_[it->second].push_back(j);
    }
}

std::optional<std::size_t> StructurePoset::find(const MStruct& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t branching(const MStruct& n, const BitVec& nu) {
  auto it = std::lower_bound(n.u.begin(), n.u.end(), nu);
  std::size_t c = 0;
  for (; it != n.u.end() && nu.is_prefix_of(*it); ++it) ++c;
  return c;
}

RankTable ndrk_table(const StructurePoset& poset) {
  std::size_t size = poset.size();
  RankTable t;
  t.rank.assign(size, 0);
  t.choice.assign(size, {});
  std::vector<char> alive(size, 1);
  std::vector<std::size_t> live(size);
  for (std::size_t i = 0; i < size; ++i) live[i] = i;
  std::vector<std::vector<std::size_t>> picks(size);

  for (std::size_t level = 0; !live.empty(); ++level) {
    for (auto m : live) t.rank[m] = level;
    std::vector<char> survive(live.size(), 0);
    parallel_for(live.size(), [&](std::size_t k) {
      std::size_t m = live[k];
      const MStruct& s = poset.at(m);
      std::vector<std::size_t> pick;
      for (const auto& nu : s.u) {
        bool found = false;
        for (auto n : poset.upper(m))
          if (alive[n] && branching(poset.at(n), nu) >= 2) {
            pick.push_back(n);
            found = true;
            break;
          }
        if (!found) return;
      }
      picks[m] = std::move(pick);
      survive[k] = 1;
    });
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < live.size(); ++k) {
      if (survive[k]) {
        next.push_back(live[k]);
        t.choice[live[k]] = picks[live[k]];
      }
    }
    for (auto m : live) alive[m] = 0;
    for (auto m : next) alive[m] = 1;
    live = std::move(next);
  }
  return t;
}

namespace {

RankStep step_of(const StructurePoset& poset, const RankTable& table, std::size_t m) {
  RankStep step;
  const MStruct& s = poset.at(m);
  for (std::size_t v = 0; v < table.choice[m].size(); ++v)
    step.emplace_back(s.u[v], poset.at(table.choice[m][v]));
  return step;
}

}  // namespace

RankResult ndrk_in(const StructurePoset& poset, const RankTable& table, const MStruct& m) {
  RankResult r;
  if (auto idx = poset.find(m)) {
    r.value = table.rank[*idx];
    for (std::size_t cur = *idx; table.rank[cur] > 0;) {
      r.steps.push_back(step_of(poset, table, cur));
      cur = table.choice[cur][0];
    }
    return r;
  }
  // m lies outside the enumerated poset: apply the successor clause once
  std::vector<std::size_t> best(m.width(), 0);
  std::vector<char> any(m.width(), 0);
  RankStep first(m.width());
  for (std::size_t n = 0; n < poset.size(); ++n) {
    const MStruct& s = poset.at(n);
    if (s.ell <= m.ell) continue;
    auto rst = restrict_to_level(s, m.ell);
    if (!rst || *rst != m) continue;
    for (std::size_t v = 0; v < m.width(); ++v) {
      if (branching(s, m.u[v]) < 2) continue;
      if (!any[v] || table.rank[n] > best[v]) {
        any[v] = 1;
        best[v] = table.rank[n];
        first[v] = {m.u[v], s};
      }
    }
  }
  if (std::find(any.begin(), any.end(), 0) != any.end()) return r;
  r.value = 1 + *std::min_element(best.begin(), best.end());
  r.steps.push_back(first);
  for (std::size_t cur = *poset.find(first[0].second); table.rank[cur] > 0;) {
    r.steps.push_back(step_of(poset, table, cur));
    cur = table.choice[cur][0];
  }
  return r;
}

RankResult ndrk_bounded(const MStruct& m, const Forest& f, std::size_t max_u) {
  auto d = validate(m, f);
  if (!d.empty()) throw UsageError("structure is not valid: " + d[0].clause + " " + d[0].message);
  StructurePoset poset(f, m.iota, max_u);
  return ndrk_in(poset, ndrk_table(poset), m);
}

std::size_t ndrk_sup(const Forest& f, std::size_t iota, std::size_t max_u) {
  StructurePoset poset(f, iota, max_u);
  if (poset.size() == 0) return 0;
  auto t = ndrk_table(poset);
  return *std::max_element(t.rank.begin(), t.rank.end()) + 1;
}

Diagnostics check_chain(const ChainWitness& c) {
  Diagnostics d;
  for (std::size_t j = 0; j < c.chain.size(); ++j) {
    for (const auto& e : validate(c.chain[j], c.forest))
      d.push_back({"structure", "link " + std::to_string(j) + " " + e.clause + ": " + e.message});
  }
  if (!d.empty()) return d;
  for (std::size_t j = 0; j + 1 < c.chain.size(); ++j) {
    const MStruct& a = c.chain[j];
    const MStruct& b = c.chain[j + 1];
    std::string at = "link " + std::to_string(j);
    if (a.iota != b.iota) {
      d.push_back({"(i)", at + ": iota changes"});
      continue;
    }
    if (b.ell <= a.ell) d.push_back({"(ii)", at + ": level does not grow"});
    if (!extends(a, b)) d.push_back({"(i)", at + ": next link does not extend it"});
    for (const auto& nu : a.u)
      if (branching(b, nu) < 2)
        d.push_back({"(iii)", at + ": node " + nu.str() + " has fewer than two extensions"});
  }
  return d;
}

ChainWitness witness_chain(const StructurePoset& poset, const RankTable& table, std::size_t start) {
  ChainWitness c;
  c.forest = poset.forest();
  c.chain.push_back(poset.at(start));
  std::size_t cur = start;
  while (true) {
    const MStruct& base = poset.at(cur);
    std::size_t n = cur;
    bool complete = true;
    for (const auto& nu : base.u) {
      if (table.rank[n] == 0) {
        complete = false;
        break;
      }
      const MStruct& s = poset.at(n);
      auto it = std::lower_bound(s.u.begin(), s.u.end(), nu);
      std::size_t v = static_cast<std::size_t>(it - s.u.begin());
      n = table.choice[n][v];
    }
    if (!complete) break;
    c.chain.push_back(poset.at(n));
    cur = n;
  }
  return c;
}

PerfectWitness extract_perfect_witness(const ChainWitness& c) {
  if (c.chain.empty()) throw UsageError("empty chain");
  auto d = check_chain(c);
  if (!d.empty()) throw UsageError("invalid chain: " + d[0].clause + " " + d[0].message);
  const MStruct& last = c.chain.back();
  PerfectWitness w{Tree(last.ell, last.u), {}};
  Forest top = c.forest.truncate(last.ell);
  for (std::size_t a = 0; a < last.width(); ++a)
    for (std::size_t b = a + 1; b < last.width(); ++b) {
      BranchCertificate cert;
      cert.eta = last.u[a];
      cert.nu = last.u[b];
      for (std::size_t i = 0; i < last.iota; ++i) {
        BitVec fwd, bwd;
        for (const auto& m : c.chain) {
          BitVec x = cert.eta.prefix(m.ell), y = cert.nu.prefix(m.ell);
          if (x == y) continue;
          std::size_t pa = *m.position(x), pb = *m.position(y);
          const BitVec& gf = m.g[m.slot(pa, pb, i)];
          const BitVec& gb = m.g[m.slot(pb, pa, i)];
          if (!fwd.is_prefix_of(gf) || !bwd.is_prefix_of(gb))
            throw InternalError("g values along the chain do not cohere");
          fwd = gf;
          bwd = gb;
        }
        cert.forward.push_back(fwd);
        cert.backward.push_back(bwd);
      }
      bool ok = true;
      std::vector<BitVec> all;
      for (std::size_t i = 0; i < last.iota; ++i) {
        ok = ok && cert.eta + cert.forward[i] == cert.nu + cert.backward[i];
        all.push_back(cert.forward[i]);
        all.push_back(cert.backward[i]);
      }
      std::sort(all.begin(), all.end());
      ok = ok && std::adjacent_find(all.begin(), all.end()) == all.end();
      cert.overlap = overlap(top, cert.eta, cert.nu);
      cert.ok = ok && cert.overlap >= 2 * last.iota;
      w.certificates.push_back(std::move(cert));
    }
  return w;
}

}  // namespace overlap
