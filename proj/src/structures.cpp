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

#include "overlap/structures.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace overlap {

namespace {

using PairSet = std::vector<std::pair<BitVec, BitVec>>;

std::pair<BitVec, BitVec> unordered(BitVec x, BitVec y) {
  if (y < x) std::swap(x, y);
  return {std::move(x), std::move(y)};
}

// Unordered g-pair family of pair (a, b), with g restricted to len.
PairSet family(const MStruct& m, std::size_t a, std::size_t b, std::size_t len) {
  PairSet out;
  for (std::size_t i = 0; i < m.iota; ++i)
    out.push_back(unordered(m.g[m.slot(a, b, i)].prefix(len), m.g[m.slot(b, a, i)].prefix(len)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Clause shared by the essentially-same and essentially-extends relations:
// pair (pa, pb) of m against pair (a, b) of n, n's g restricted to m.ell.
bool families_match(const MStruct& m, std::size_t pa, std::size_t pb, const MStruct& n,
                    std::size_t a, std::size_t b) {
  if (family(m, pa, pb, m.ell) != family(n, a, b, m.ell)) return false;
  for (std::size_t i = 0; i < m.iota; ++i) {
    const BitVec& gm = m.g[m.slot(pa, pb, i)];
    std::size_t hm = m.h[m.slot(pa, pb, i)];
    for (std::size_t j = 0; j < n.iota; ++j) {
      if (gm == n.g[n.slot(a, b, j)].prefix(m.ell) && hm != n.h[n.slot(a, b, j)]) return false;
      if (gm == n.g[n.slot(b, a, j)].prefix(m.ell) && hm != n.h[n.slot(b, a, j)]) return false;
    }
  }
  return true;
}

bool shape_ok(const MStruct& m) {
  std::size_t cells = m.u.size() * m.u.size() * m.iota;
  return m.h.size() == cells && m.g.size() == cells;
}

void require_shape(const MStruct& m) {
  if (!shape_ok(m)) throw UsageError("structure has malformed h/g tables");
}

}  // namespace

MStruct MStruct::blank(std::size_t ell, std::size_t iota, std::vector<BitVec> u) {
  std::sort(u.begin(), u.end());
  if (std::adjacent_find(u.begin(), u.end()) != u.end())
    throw UsageError("u has a repeated node");
  MStruct m;
  m.ell = ell;
  m.iota = iota;
  std::size_t cells = u.size() * u.size() * iota;
  m.u = std::move(u);
  m.h.assign(cells, 0);
  m.g.assign(cells, BitVec());
  return m;
}

std::optional<std::size_t> MStruct::position(const BitVec& x) const {
  auto it = std::lower_bound(u.begin(), u.end(), x);
  if (it == u.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - u.begin());
}

std::size_t MStructHash::operator()(const MStruct& m) const noexcept {
  std::size_t h = m.ell * 0x9e3779b97f4a7c15ull ^ m.iota;
  auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  for (const auto& x : m.u) mix(x.hash());
  for (auto x : m.h) mix(x);
  for (const auto& x : m.g) mix(x.hash());
  return h;
}

Diagnostics validate(const MStruct& m, const Forest& f) {
  Diagnostics d;
  if (m.ell == 0) d.push_back({"(a)", "level must be positive"});
  if (m.u.size() < 2) d.push_back({"(a)", "u needs at least two nodes"});
  for (const auto& x : m.u)
    if (x.size() != m.ell) d.push_back({"(a)", "node " + x.str() + " is not at the level"});
  if (!std::is_sorted(m.u.begin(), m.u.end()) ||
      std::adjacent_find(m.u.begin(), m.u.end()) != m.u.end())
    d.push_back({"(a)", "u is not a sorted set"});
  if (m.ell > f.height())
    d.push_back({"(finite)", "level " + std::to_string(m.ell) + " exceeds forest height " +
                                 std::to_string(f.height())});
  if (!shape_ok(m)) {
    d.push_back({"(b)", "h and g are not defined on exactly the ordered pairs of u"});
    return d;
  }
  if (!d.empty()) return d;

  std::size_t w = m.width();
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b) {
      if (a == b) continue;
      for (std::size_t i = 0; i < m.iota; ++i) {
        std::size_t s = m.slot(a, b, i);
        std::string at = "(" + m.u[a].str() + "," + m.u[b].str() + ") i=" + std::to_string(i);
        if (m.h[s] >= f.size()) {
          d.push_back({"(finite)", "h at " + at + " names tree " + std::to_string(m.h[s])});
          continue;
        }
        if (m.g[s].size() != m.ell || !f.tree(m.h[s]).contains(m.g[s]))
          d.push_back({"(c)", "g at " + at + " is not a level node of tree " +
                                  std::to_string(m.h[s])});
      }
    }
  if (!d.empty()) return d;

  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = a + 1; b < w; ++b) {
      std::vector<BitVec> seen;
      for (std::size_t i = 0; i < m.iota; ++i) {
        if (m.u[a] + m.g[m.slot(a, b, i)] != m.u[b] + m.g[m.slot(b, a, i)])
          d.push_back({"(d)", "sum identity fails at (" + m.u[a].str() + "," + m.u[b].str() +
                                  ") i=" + std::to_string(i)});
        seen.push_back(m.g[m.slot(a, b, i)]);
        seen.push_back(m.g[m.slot(b, a, i)]);
      }
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        d.push_back({"(e)", "repeated g value on pair (" + m.u[a].str() + "," + m.u[b].str() +
                                ")"});
    }
  return d;
}

bool is_valid(const MStruct& m, const Forest& f) { return validate(m, f).empty(); }

MStruct translate(const MStruct& m, const BitVec& rho) {
  require_shape(m);
  if (rho.size() < m.ell)
    throw UsageError("translation vector shorter than the structure level");
  BitVec r = rho.prefix(m.ell);
  std::vector<BitVec> moved;
  for (const auto& x : m.u) moved.push_back(x + r);
  MStruct out = MStruct::blank(m.ell, m.iota, moved);
  std::vector<std::size_t> to(m.width());
  for (std::size_t a = 0; a < m.width(); ++a) to[a] = *out.position(moved[a]);
  for (std::size_t a = 0; a < m.width(); ++a)
    for (std::size_t b = 0; b < m.width(); ++b) {
      if (a == b) continue;
      for (std::size_t i = 0; i < m.iota; ++i) {
        out.h[out.slot(to[a], to[b], i)] = m.h[m.slot(a, b, i)];
        out.g[out.slot(to[a], to[b], i)] = m.g[m.slot(a, b, i)];
      }
    }
  return out;
}

MStruct restrict(const MStruct& m, const std::vector<BitVec>& u2) {
  require_shape(m);
  MStruct out = MStruct::blank(m.ell, m.iota, u2);
  if (out.width() < 2) throw UsageError("restriction needs at least two nodes");
  std::vector<std::size_t> from;
  for (const auto& x : out.u) {
    auto p = m.position(x);
    if (!p) throw UsageError("node " + x.str() + " is not in u");
    from.push_back(*p);
  }
  for (std::size_t a = 0; a < out.width(); ++a)
    for (std::size_t b = 0; b < out.width(); ++b) {
      if (a == b) continue;
      for (std::size_t i = 0; i < m.iota; ++i) {
        out.h[out.slot(a, b, i)] = m.h[m.slot(from[a], from[b], i)];
        out.g[out.slot(a, b, i)] = m.g[m.slot(from[a], from[b], i)];
      }
    }
  return out;
}

std::optional<MStruct> restrict_to_level(const MStruct& n, std::size_t ell) {
  require_shape(n);
  if (ell == 0 || ell > n.ell) return std::nullopt;
  std::vector<BitVec> pre;
  for (const auto& x : n.u) pre.push_back(x.prefix(ell));
  std::vector<BitVec> u = pre;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (u.size() < 2) return std::nullopt;
  MStruct m = MStruct::blank(ell, n.iota, u);
  std::vector<std::size_t> to;
  for (const auto& x : pre) to.push_back(*m.position(x));
  std::vector<char> set(m.h.size(), 0);
  for (std::size_t a = 0; a < n.width(); ++a)
    for (std::size_t b = 0; b < n.width(); ++b) {
      if (to[a] == to[b]) continue;
      for (std::size_t i = 0; i < n.iota; ++i) {
        std::size_t s = m.slot(to[a], to[b], i);
        BitVec gv = n.g[n.slot(a, b, i)].prefix(std::min(ell, n.g[n.slot(a, b, i)].size()));
        std::size_t hv = n.h[n.slot(a, b, i)];
        if (!set[s]) {
          set[s] = 1;
          m.g[s] = std::move(gv);
          m.h[s] = hv;
        } else if (m.g[s] != gv || m.h[s] != hv) {
          return std::nullopt;
        }
      }
    }
  return m;
}

bool extends(const MStruct& m, const MStruct& n) {
  if (m.iota != n.iota) throw UsageError("comparing structures with different iota");
  if (m.ell > n.ell) return false;
  auto r = restrict_to_level(n, m.ell);
  return r && *r == m;
}

bool essentially_same(const MStruct& m, const MStruct& n) {
  if (m.iota != n.iota || m.ell != n.ell || m.u != n.u) return false;
  if (!shape_ok(m) || !shape_ok(n)) return false;
  for (std::size_t a = 0; a < m.width(); ++a)
    for (std::size_t b = 0; b < m.width(); ++b)
      if (a != b && !families_match(m, a, b, n, a, b)) return false;
  return true;
}

bool essentially_extends(const MStruct& m, const MStruct& n) {
  if (m.iota != n.iota || m.ell > n.ell) return false;
  if (!shape_ok(m) || !shape_ok(n)) return false;
  std::vector<BitVec> pre;
  for (const auto& x : n.u) pre.push_back(x.prefix(m.ell));
  std::vector<BitVec> u = pre;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (u != m.u) return false;
  for (std::size_t a = 0; a < n.width(); ++a)
    for (std::size_t b = 0; b < n.width(); ++b) {
      if (pre[a] == pre[b]) continue;
      if (!families_match(m, *m.position(pre[a]), *m.position(pre[b]), n, a, b)) return false;
    }
  return true;
}

namespace {

struct PairOption {
  std::vector<BitVec> fwd, bwd;
  std::vector<std::size_t> hf, hb;
};

// All admissible (g, h) columns for one unordered pair with sum s.
std::vector<PairOption> pair_options(const std::vector<BitVec>& level,
                                     const std::vector<std::vector<std::size_t>>& owners,
                                     const BitVec& s, std::size_t iota) {
  std::vector<std::size_t> cand;
  std::vector<std::size_t> partner(level.size());
  for (std::size_t x = 0; x < level.size(); ++x) {
    BitVec y = level[x] + s;
    auto it = std::lower_bound(level.begin(), level.end(), y);
    if (it != level.end() && *it == y) {
      cand.push_back(x);
      partner[x] = static_cast<std::size_t>(it - level.begin());
    }
  }
  std::vector<PairOption> out;
  std::vector<std::size_t> pick;
  std::vector<char> used(level.size(), 0);
  std::function<void()> choose = [&]() {
    if (pick.size() == iota) {
      // expand tree choices
      PairOption o;
      for (auto x : pick) {
        o.fwd.push_back(level[x]);
        o.bwd.push_back(level[partner[x]]);
      }
      o.hf.assign(iota, 0);
      o.hb.assign(iota, 0);
      std::function<void(std::size_t)> trees = [&](std::size_t k) {
        if (k == 2 * iota) {
          out.push_back(o);
          return;
        }
        std::size_t i = k / 2;
        const auto& own = owners[k % 2 == 0 ? pick[i] : partner[pick[i]]];
        for (auto t : own) {
          (k % 2 == 0 ? o.hf : o.hb)[i] = t;
          trees(k + 1);
        }
      };
      trees(0);
      return;
    }
    for (auto x : cand) {
      if (used[x]) continue;
      used[x] = used[partner[x]] = 1;
      pick.push_back(x);
      choose();
      pick.pop_back();
      used[x] = used[partner[x]] = 0;
    }
  };
  choose();
  return out;
}

}  // namespace

void for_each_structure(const Forest& f, std::size_t iota, std::size_t ell, std::size_t max_u,
                        const std::function<void(const MStruct&)>& visit) {
  if (ell > f.height()) throw UsageError("level exceeds forest height");
  if (ell == 0 || iota == 0 || max_u < 2) return;
  if (ell > 30) throw ResourceError("enumeration over 2^" + std::to_string(ell) + " nodes");
  std::vector<BitVec> level = f.level(ell);
  std::vector<std::vector<std::size_t>> owners;
  for (const auto& x : level) owners.push_back(f.trees_containing(x));

  // options per admissible pair sum; a sum with no option rules the pair out
  std::unordered_map<BitVec, std::vector<PairOption>, BitVecHash> by_sum;
  std::vector<BitVec> sums;
  for (std::size_t x = 0; x < level.size(); ++x)
    for (std::size_t y = x + 1; y < level.size(); ++y) {
      BitVec s = level[x] + level[y];
      if (by_sum.count(s)) continue;
      auto opts = pair_options(level, owners, s, iota);
      if (!opts.empty()) sums.push_back(s);
      by_sum.emplace(s, std::move(opts));
    }
  auto good = [&](const BitVec& s) {
    auto it = by_sum.find(s);
    return it != by_sum.end() && !it->second.empty();
  };

  auto node = [&](std::uint64_t x) {
    BitVec v(ell);
    for (std::size_t i = 0; i < ell; ++i)
      if ((x >> (ell - 1 - i)) & 1) v.set(i);
    return v;
  };

  auto emit = [&](const std::vector<BitVec>& u) {
    std::size_t size = u.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<const std::vector<PairOption>*> opts;
    for (std::size_t a = 0; a < size; ++a)
      for (std::size_t b = a + 1; b < size; ++b) {
        pairs.emplace_back(a, b);
        opts.push_back(&by_sum.at(u[a] + u[b]));
      }
    MStruct m = MStruct::blank(ell, iota, u);
    std::vector<std::size_t> odo(pairs.size(), 0);
    while (true) {
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [a, b] = pairs[p];
        const PairOption& o = (*opts[p])[odo[p]];
        for (std::size_t i = 0; i < iota; ++i) {
          m.g[m.slot(a, b, i)] = o.fwd[i];
          m.g[m.slot(b, a, i)] = o.bwd[i];
          m.h[m.slot(a, b, i)] = o.hf[i];
          m.h[m.slot(b, a, i)] = o.hb[i];
        }
      }
      visit(m);
      bool done = true;
      for (std::size_t p = pairs.size(); p-- > 0;) {
        if (++odo[p] < opts[p]->size()) {
          done = false;
          break;
        }
        odo[p] = 0;
      }
      if (done) break;
    }
  };

  if (sums.empty()) return;
  // u in order of size, then lexicographically; every element after the
  // first differs from it by an admissible sum
  for (std::size_t size = 2; size <= max_u; ++size) {
    for (std::uint64_t first = 0; first < (std::uint64_t{1} << ell); ++first) {
      BitVec u0 = node(first);
      std::vector<BitVec> cands;
      for (const auto& s : sums) {
        BitVec c = u0 + s;
        if (u0 < c) cands.push_back(std::move(c));
      }
      std::sort(cands.begin(), cands.end());
      std::vector<BitVec> u{u0};
      std::function<void(std::size_t)> grow = [&](std::size_t from) {
        if (u.size() == size) {
          emit(u);
          return;
        }
        for (std::size_t c = from; c < cands.size(); ++c) {
          bool ok = true;
          for (std::size_t j = 1; j < u.size() && ok; ++j) ok = good(u[j] + cands[c]);
          if (!ok) continue;
          u.push_back(cands[c]);
          grow(c + 1);
          u.pop_back();
        }
      };
      grow(0);
    }
  }
}

std::vector<MStruct> enumerate(const Forest& f, std::size_t iota, std::size_t ell,
                               std::size_t max_u) {
  std::vector<MStruct> out;
  for_each_structure(f, iota, ell, max_u, [&](const MStruct& m) { out.push_back(m); });
  return out;
}

}  // namespace overlap
