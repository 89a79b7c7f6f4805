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

#include <algorithm>

#include "overlap/forcing.hpp"

namespace overlap {

AmalgamShape amalgam_shape(std::size_t iota, std::size_t k, std::size_t ell) {
  std::size_t N0 = iota * ell * (ell + k) + iota * ell * (ell - (ell ? 1 : 0)) / 2 + 1;
  return {k, ell, N0, N0 + ell + 1};
}

std::size_t theta_index(std::size_t iota, std::size_t k, std::size_t ell, int tag, std::size_t x,
                        std::size_t y, std::size_t i) {
  std::size_t base1 = k * ell * iota;
  std::size_t base2 = base1 + iota * ell * (ell - (ell ? 1 : 0)) / 2;
  switch (tag) {
    case 0:
      if (x >= k || y >= ell || i >= iota) break;
      return (x * ell + y) * iota + i;
    case 1: {
      if (!(x < y && y < ell) || i >= iota) break;
      std::size_t pair = x * (2 * ell - x - 1) / 2 + (y - x - 1);
      return base1 + pair * iota + i;
    }
    case 2:
      if (x >= ell || y >= ell || i >= iota) break;
      return base2 + (x * ell + y) * iota + i;
    default:
      break;
  }
  throw UsageError("index outside the domain of Theta");
}

namespace {

BitVec nu(std::size_t N0, std::size_t d, bool star) {
  BitVec v = star ? BitVec::ones(N0) : BitVec::zeros(N0);
  v.set(d, !star);
  return v;
}

BitVec tail(std::size_t zeros, std::size_t ones) {
  BitVec v = BitVec::zeros(zeros);
  v.append(true, ones);
  return v;
}

}  // namespace

Condition amalgamate(const Condition& p1, const Condition& p2, const RankOracle& o) {
  if (p1.iota != p2.iota) throw UsageError("conditions have different iota");
  auto pi = check_twin(p1, p2, o);
  if (!pi) throw UsageError("conditions are not twins");

  std::vector<Ordinal> alpha, beta, gamma;
  std::set_intersection(p1.w.begin(), p1.w.end(), p2.w.begin(), p2.w.end(),
                        std::back_inserter(alpha));
  std::set_difference(p1.w.begin(), p1.w.end(), p2.w.begin(), p2.w.end(),
                      std::back_inserter(beta));
  std::set_difference(p2.w.begin(), p2.w.end(), p1.w.begin(), p1.w.end(),
                      std::back_inserter(gamma));
  const std::size_t iota = p1.iota, k = alpha.size(), ell = beta.size();
  const AmalgamShape sh = amalgam_shape(iota, k, ell);
  const std::size_t N0 = sh.N0, N = sh.N;
  const BitVec pad = BitVec::zeros(N);

  Condition q;
  q.iota = iota;
  std::set_union(p1.w.begin(), p1.w.end(), p2.w.begin(), p2.w.end(), std::back_inserter(q.w));
  q.n = p1.n + N;
  q.M = p1.M + (ell ? 1 : 0);

  for (const auto& [a, e] : p1.eta) q.eta[a] = e.concat(pad);
  for (std::size_t c = 0; c < ell; ++c) {
    BitVec e = p2.eta.at(gamma[c]);
    e.append(false).append(true, N0).append(tail(c, ell - c));
    q.eta[gamma[c]] = std::move(e);
  }

  for (const auto& [key, hv] : p1.h) q.h[key] = hv;
  for (const auto& [key, gv] : p1.g)
    for (const auto& x : gv) q.g[key].push_back(x.concat(pad));

  auto put = [&](Ordinal x, Ordinal y, std::size_t hv, const BitVec& head, const BitVec& nv,
                 const BitVec& t) {
    BitVec v = head.concat(BitVec::ones(1));
    v.append(nv).append(t);
    q.h[{x, y}].push_back(hv);
    q.g[{x, y}].push_back(std::move(v));
  };

  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t c = 0; c < ell; ++c)
      for (std::size_t i = 0; i < iota; ++i) {
        std::size_t d = theta_index(iota, k, ell, 0, a, c, i);
        put(alpha[a], gamma[c], p2.h.at({alpha[a], gamma[c]})[i], p2.g.at({alpha[a], gamma[c]})[i],
            nu(N0, d, false), BitVec::zeros(ell));
        put(gamma[c], alpha[a], p2.h.at({gamma[c], alpha[a]})[i], p2.g.at({gamma[c], alpha[a]})[i],
            nu(N0, d, true), tail(c, ell - c));
      }
  for (std::size_t b = 0; b < ell; ++b)
    for (std::size_t c = b + 1; c < ell; ++c)
      for (std::size_t i = 0; i < iota; ++i) {
        std::size_t d = theta_index(iota, k, ell, 1, b, c, i);
        put(gamma[b], gamma[c], p2.h.at({gamma[b], gamma[c]})[i], p2.g.at({gamma[b], gamma[c]})[i],
            nu(N0, d, false), tail(b, ell - b));
        put(gamma[c], gamma[b], p2.h.at({gamma[c], gamma[b]})[i], p2.g.at({gamma[c], gamma[b]})[i],
            nu(N0, d, false), tail(c, ell - c));
      }
  for (std::size_t b = 0; b < ell; ++b)
    for (std::size_t c = 0; c < ell; ++c)
      for (std::size_t i = 0; i < iota; ++i) {
        std::size_t d = theta_index(iota, k, ell, 2, b, c, i);
        if (b != c) {
          put(beta[b], gamma[c], p1.M, p1.g.at({beta[b], beta[c]})[i], nu(N0, d, false),
              tail(c, ell - c));
          put(gamma[c], beta[b], p1.M, p2.g.at({gamma[c], gamma[b]})[i], nu(N0, d, true),
              BitVec::zeros(ell));
        } else {
          put(beta[b], gamma[b], p1.M, p1.eta.at(beta[b]), nu(N0, d, false), tail(b, ell - b));
          put(gamma[b], beta[b], p1.M, p2.eta.at(gamma[b]), nu(N0, d, true), BitVec::zeros(ell));
        }
      }

  std::vector<std::vector<BitVec>> tops(q.M);
  for (std::size_t m = 0; m < p1.M; ++m)
    for (const auto& x : p1.forest.tree(m).tops()) tops[m].push_back(x.concat(pad));
  for (const auto& [key, hv] : q.h)
    for (std::size_t i = 0; i < iota; ++i) tops.at(hv[i]).push_back(q.g.at(key)[i]);
  std::vector<Tree> trees;
  for (auto& t : tops) trees.emplace_back(q.n, std::move(t));
  q.forest = Forest(q.n, std::move(trees));
  q.r = p1.r;
  if (ell) q.r.push_back(q.n);
  return q;
}

}  // namespace overlap
