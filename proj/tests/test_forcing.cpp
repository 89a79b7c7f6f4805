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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "cond_check.hpp"
#include "overlap/forcing.hpp"
#include "overlap/json_io.hpp"

using namespace overlap;

namespace {

bool names(const Diagnostics& d, const std::string& clause) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.clause == clause; });
}

Diagnostics check(const Condition& p, ValidateOptions opt = {}) {
  return validate_condition(p, default_oracle({&p}), opt);
}

const Condition& boot5() {
  static const Condition p = bootstrap({0, 1, 2, 3, 4}, 3);
  return p;
}

const Condition& boot6() {
  static const Condition p = bootstrap({0, 1, 2, 3, 4, 5}, 3);
  return p;
}

std::vector<std::vector<Ordinal>> subsets_at_least(const std::vector<Ordinal>& w, std::size_t k) {
  std::vector<std::vector<Ordinal>> out;
  for (std::uint32_t s = 0; s < (1u << w.size()); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) < k) continue;
    std::vector<Ordinal> sub;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (s >> i & 1) sub.push_back(w[i]);
    out.push_back(sub);
  }
  return out;
}

// m(l, w*) assembled directly from the demands; empty when (a)/(b) fail.
std::optional<MStruct> brute_structure(const Condition& p, std::size_t ell,
                                       const std::vector<Ordinal>& ws) {
  std::map<BitVec, Ordinal> at;
  for (auto a : ws) {
    for (auto b : ws)
      if (a != b)
        for (auto m : p.h.at({a, b}))
          if (p.r[m] > ell) return std::nullopt;
    if (!at.emplace(p.eta.at(a).prefix(ell), a).second) return std::nullopt;
  }
  std::vector<BitVec> u;
  for (const auto& [x, a] : at) u.push_back(x);
  MStruct m = MStruct::blank(ell, p.iota, u);
  for (std::size_t x = 0; x < u.size(); ++x)
    for (std::size_t y = 0; y < u.size(); ++y)
      if (x != y)
        for (std::size_t i = 0; i < p.iota; ++i) {
          OrdinalPair pr{at[u[x]], at[u[y]]};
          m.h[m.slot(x, y, i)] = p.h.at(pr)[i];
          m.g[m.slot(x, y, i)] = p.g.at(pr)[i].prefix(ell);
        }
  return m;
}

}  // namespace

TEST_CASE("bootstrap conditions are valid") {
  for (const Condition* p : {&boot5(), &boot6()}) {
    std::size_t W = p->w.size();
    CHECK(p->n == W + W * (W - 1) / 2 * 3);
    CHECK(p->M == W * (W - 1) / 2 * 3);
    CHECK(check(*p).empty());
    CHECK(cond::failing(*p).empty());
    for (const auto& c : overlap_certificates(*p)) {
      CHECK(c.ok);
      CHECK(c.overlap >= 6);
      CHECK(cond::top_overlap(*p, c.alpha, c.beta) == c.overlap);
    }
  }
  CHECK(bootstrap({0, 1, 2, 3, 4}, 3) == boot5());
  CHECK(check(bootstrap({2, 9, 11, 40, 41}, 4)).empty());
  CHECK_THROWS_AS(bootstrap({0, 1, 2, 3}, 3), UsageError);
  CHECK_THROWS_AS(bootstrap({0, 1, 2, 3, 4}, 2), UsageError);
}

TEST_CASE("broken conditions name the failing demand") {
  Condition dup = boot5();
  dup.g[{0, 1}][0] = dup.g[{2, 3}][0];
  CHECK(names(check(dup), "(*)_7"));
  CHECK(cond::failing(dup).count("7"));

  Condition four = boot5();
  four.w.pop_back();
  four.eta.erase(4);
  std::erase_if(four.h, [](const auto& kv) { return kv.first.first == 4 || kv.first.second == 4; });
  std::erase_if(four.g, [](const auto& kv) { return kv.first.first == 4 || kv.first.second == 4; });
  CHECK(names(check(four), "(*)_1"));
  CHECK(cond::failing(four).count("1"));

  Condition dep = boot5();
  dep.eta[2] = dep.eta[0] + dep.eta[1];
  CHECK(names(check(dep), "(*)_2"));
  CHECK(cond::failing(dep).count("2"));

  Condition r0 = boot5();
  r0.r[3] = 0;
  CHECK(names(check(r0), "(*)_4"));
  CHECK(cond::failing(r0) == std::set<std::string>{"4"});

  Condition wrong_tree = boot5();
  wrong_tree.h[{0, 1}][0] = wrong_tree.h[{0, 1}][1];
  CHECK(names(check(wrong_tree), "(*)_6"));
  CHECK(cond::failing(wrong_tree).count("6"));

  Condition low = boot5();
  low.iota = 2;
  CHECK(names(check(low), "(iota)"));
}

TEST_CASE("sum-collision closure is detected") {
  Condition p = boot5();
  // add a tree carrying three fresh pairs with a common sum
  std::vector<Tree> trees = p.forest.trees();
  std::vector<BitVec> tops;
  BitVec s = BitVec::unit(p.n, 0) + BitVec::unit(p.n, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    BitVec a = BitVec::unit(p.n, 2) + BitVec::unit(p.n, 5 + i) + BitVec::unit(p.n, 6 + i);
    a.set(p.n - 1, true);
    tops.push_back(a);
    tops.push_back(a + s);
  }
  std::sort(tops.begin(), tops.end());
  trees.emplace_back(p.n, tops);
  p.forest = Forest(p.n, trees);
  p.M += 1;
  p.r.push_back(p.n);
  REQUIRE(cond::failing(p) == std::set<std::string>{"11"});
  CHECK(names(check(p), "(*)_11"));
}

TEST_CASE("leq") {
  const Condition& p = boot5();
  Condition q = extend_add_element(p, 9);
  CHECK(leq(p, p));
  CHECK(leq(p, q));
  CHECK_FALSE(leq(q, p));
  CHECK(cond::leq(p, q));

  Condition bent = q;
  std::vector<Tree> trees = bent.forest.trees();
  trees[0] = trees[0].translate(BitVec::unit(q.n, 0));
  bent.forest = Forest(q.n, trees);
  CHECK_FALSE(leq(p, bent));
  CHECK_FALSE(cond::leq(p, bent));

  Condition moved = q;
  moved.h[{0, 1}][0] = 7;
  CHECK_FALSE(leq(p, moved));
  CHECK_FALSE(cond::leq(p, moved));

  Condition other = relabel(p, {{4, 5}});
  CHECK(leq(p, other) == cond::leq(p, other));
  CHECK_FALSE(leq(p, other));
}

TEST_CASE("calM agrees with generate-and-test") {
  for (const Condition* p : {&boot5(), &boot6()}) {
    auto entries = calM(*p);
    std::set<std::pair<std::size_t, std::vector<Ordinal>>> listed;
    for (const auto& e : entries) {
      CHECK(is_valid(e.m, p->forest));
      for (const auto& wt : e.witnesses) {
        listed.insert({wt.ell, wt.wstar});
        if (p->w.size() == 5) CHECK(wt.wstar == p->w);
        CHECK(structure_of(*p, wt.ell, wt.wstar) == e.m);
      }
    }
    std::set<std::pair<std::size_t, std::vector<Ordinal>>> expect;
    std::set<std::string> distinct;
    brute::SForest sf = brute::from(p->forest);
    for (const auto& ws : subsets_at_least(p->w, 5))
      for (std::size_t ell = 1; ell <= p->n; ++ell) {
        auto m = brute_structure(*p, ell, ws);
        if (!m || !brute::valid(*m, sf)) continue;
        expect.insert({ell, ws});
        distinct.insert(brute::key_of(*m));
        CHECK(structure_of(*p, ell, ws) == m);
      }
    CHECK(listed == expect);
    CHECK(entries.size() == distinct.size());
    for (const auto& ws : subsets_at_least(p->w, 5)) CHECK(expect.count({p->n, ws}));
  }
}

TEST_CASE("capture_translate") {
  const Condition& p = boot6();
  std::mt19937_64 rng(4);
  std::vector<BitVec> etas;
  for (const auto& [a, e] : p.eta) etas.push_back(e);
  for (const auto& ws : subsets_at_least(p.w, 5)) {
    MStruct base = *structure_of(p, p.n, ws);
    auto same = capture_translate(p, base);
    REQUIRE(same);
    CHECK(same->first.popcount() == 0);
    CHECK(same->second == base);

    for (int rep = 0; rep < 3; ++rep) {
      BitVec sigma = BitVec::zeros(p.n);
      for (std::size_t j = 0; j < p.n; ++j) sigma.set(j, rng() & 1);
      MStruct m = translate(base, sigma);
      // shuffle the index order of each unordered pair
      for (std::size_t a = 0; a < m.width(); ++a)
        for (std::size_t b = a + 1; b < m.width(); ++b) {
          std::vector<std::size_t> perm{0, 1, 2};
          std::shuffle(perm.begin(), perm.end(), rng);
          MStruct src = m;
          for (std::size_t i = 0; i < 3; ++i) {
            for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
              m.h[m.slot(x, y, i)] = src.h[src.slot(x, y, perm[i])];
              m.g[m.slot(x, y, i)] = src.g[src.slot(x, y, perm[i])];
            }
          }
        }
      REQUIRE(is_valid(m, p.forest));
      auto got = capture_translate(p, m);
      REQUIRE(got);
      CHECK(got->first == sigma);
      CHECK(got->second == base);
      CHECK(essentially_same(translate(m, got->first), got->second));
      // every rho moving u into the eta set
      std::size_t hits = 0;
      for (const auto& e : etas) {
        BitVec rho = m.u[0] + e;
        bool inside = std::all_of(m.u.begin(), m.u.end(), [&](const BitVec& x) {
          return std::find(etas.begin(), etas.end(), x + rho) != etas.end();
        });
        if (inside) {
          ++hits;
          CHECK(rho == got->first);
        }
      }
      CHECK(hits == 1);
    }
  }
  auto shallow = restrict_to_level(*structure_of(p, p.n, p.w), p.n - 1);
  REQUIRE(shallow);
  CHECK_THROWS_AS(capture_translate(p, *shallow), UsageError);
}

TEST_CASE("extend_add_element") {
  for (const Condition* p : {&boot5(), &boot6()}) {
    std::size_t W = p->w.size();
    Condition q = extend_add_element(*p, 20);
    CHECK(q.n - p->n == W * 3 + 2);
    CHECK(q.M - p->M == W * 3);
    CHECK(q.w.size() == W + 1);
    CHECK(leq(*p, q));
    CHECK(cond::leq(*p, q));
    CHECK(cond::failing(q).empty());
    CHECK(check(q).empty());
    for (const auto& [pr, gs] : q.g)
      for (std::size_t i = 0; i < 3; ++i)
        CHECK((q.eta.at(pr.first) + gs[i]) == (q.eta.at(pr.second) + q.g.at({pr.second, pr.first})[i]));
    CHECK_THROWS_AS(extend_add_element(*p, 3), UsageError);
  }
}

TEST_CASE("extend_dense") {
  const Condition& p = boot5();
  FreshOrdinals fresh(100, 200);
  CHECK(extend_dense(p, 2, 10, 10, fresh) == p);
  CHECK(extend_dense(p, 7, 10, 10, fresh) == extend_add_element(p, 7));
  Condition big = extend_dense(p, 3, 80, 10, fresh);
  CHECK(big.n > 80);
  CHECK(std::count(big.w.begin(), big.w.end(), 3));
  CHECK(leq(p, big));
  CHECK(cond::failing(big).empty());
  CHECK(check(big).empty());
  FreshOrdinals dry(100, 100);
  CHECK_THROWS_AS(extend_dense(p, 3, 80, 10, dry), ResourceError);
}

TEST_CASE("twins") {
  const Condition& p = boot5();
  RankOracle o = default_oracle({&p});
  auto id = check_twin(p, p, o);
  REQUIRE(id);
  for (auto a : p.w) CHECK(id->at(a) == a);

  Condition t = relabel(p, {{4, 5}});
  RankOracle o2 = default_oracle({&p, &t});
  auto pi = check_twin(p, t, o2);
  REQUIRE(pi);
  CHECK(pi->at(4) == 5);
  CHECK(pi->at(0) == 0);

  Condition off = t;
  off.g[{0, 5}][1] = off.g[{0, 5}][2];
  CHECK_FALSE(check_twin(p, off, o2));
  Condition tree = t;
  tree.r[0] = 1;
  CHECK_FALSE(check_twin(p, tree, o2));
}

TEST_CASE("amalgamation shape") {
  auto sh = amalgam_shape(3, 4, 1);
  CHECK(sh.N0 == 16);
  CHECK(sh.N == 18);
  for (std::size_t iota : {3u, 4u})
    for (std::size_t k = 0; k < 6; ++k)
      for (std::size_t ell = 0; ell < 5; ++ell) {
        auto s = amalgam_shape(iota, k, ell);
        CHECK(s.N0 - 1 == k * ell * iota + iota * ell * (ell ? ell - 1 : 0) / 2 + ell * ell * iota);
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < iota; ++i) {
          for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = 0; y < ell; ++y) seen.insert(theta_index(iota, k, ell, 0, x, y, i));
          for (std::size_t x = 0; x < ell; ++x)
            for (std::size_t y = x + 1; y < ell; ++y) seen.insert(theta_index(iota, k, ell, 1, x, y, i));
          for (std::size_t x = 0; x < ell; ++x)
            for (std::size_t y = 0; y < ell; ++y) seen.insert(theta_index(iota, k, ell, 2, x, y, i));
        }
        CHECK(seen.size() == s.N0 - 1);
        if (!seen.empty()) CHECK(*seen.rbegin() == s.N0 - 2);
      }
  CHECK_THROWS_AS(theta_index(3, 4, 1, 1, 0, 0, 0), UsageError);
}

TEST_CASE("amalgamate twins") {
  const Condition& p = boot5();
  for (const auto& to : {std::map<Ordinal, Ordinal>{{4, 5}}, {{3, 5}, {4, 6}}}) {
    Condition t = relabel(p, to);
    RankOracle o = default_oracle({&p, &t});
    Condition q = amalgamate(p, t, o);
    std::size_t ell = to.size(), k = 5 - ell;
    auto sh = amalgam_shape(3, k, ell);
    CHECK(q.w.size() == 5 + ell);
    CHECK(q.n == p.n + sh.N);
    CHECK(q.M == p.M + 1);
    CHECK(leq(p, q));
    CHECK(leq(t, q));
    CHECK(cond::leq(p, q));
    CHECK(cond::leq(t, q));
    CHECK(cond::failing(q).empty());
    CHECK(validate_condition(q, default_oracle({&q}), {}).empty());
  }
  Condition same = amalgamate(p, p, default_oracle({&p}));
  CHECK(same.n == p.n + 2);
  CHECK(same.w == p.w);
  CHECK(leq(p, same));
  CHECK(check(same).empty());

  Condition stranger = relabel(p, {{4, 5}});
  stranger.r[0] = 1;
  CHECK_THROWS_AS(amalgamate(p, stranger, default_oracle({&p, &stranger})), UsageError);
}

TEST_CASE("generic chain") {
  const Condition& p = boot5();
  RankOracle o = default_oracle({&p});
  FreshOrdinals fresh(50, 60);
  GenericRun empty = build_chain(p, {}, o, fresh);
  REQUIRE(empty.chain.size() == 1);
  CHECK(empty.certificates.size() == 10);
  CHECK(empty.certificates == overlap_certificates(p));

  RankOracle wide = RankOracle::order(70, 69);
  GenericRun run = build_chain(p, {{7, 0, 0}, {8, 0, 0}, {9, 0, 0}}, wide, fresh);
  REQUIRE(run.chain.size() == 4);
  CHECK(run.chain.back().w.size() == 8);
  for (std::size_t i = 0; i + 1 < run.chain.size(); ++i) CHECK(cond::leq(run.chain[i], run.chain[i + 1]));
  for (const auto& d : run.step_diagnostics) CHECK(d.empty());
  CHECK(run.certificates.size() == 28);
  for (const auto& c : run.certificates) {
    CHECK(c.ok);
    CHECK(cond::top_overlap(run.chain.back(), c.alpha, c.beta) >= 6);
  }
  CHECK(run.forest == run.chain.back().forest);

  Condition bad = p;
  bad.r[0] = 0;
  CHECK_THROWS_AS(build_chain(bad, {}, o, fresh), UsageError);
}

TEST_CASE("exhaustive and pairwise rho search agree") {
  Condition q = extend_add_element(boot5(), 9);
  for (const Condition* p : {&boot5(), &boot6(), static_cast<const Condition*>(&q)}) {
    ValidateOptions ex{RhoSearch::Exhaustive, 10, 25};
    CHECK(check(*p, ex) == check(*p));
  }
}

TEST_CASE("condition and run JSON round trip") {
  Condition q = extend_add_element(boot5(), 9);
  CHECK(condition_from_json(condition_to_json(q)) == q);
  CHECK(condition_from_json(parse_json(condition_to_json(q).dump())) == q);
  RankOracle o = default_oracle({&q});
  FreshOrdinals fresh(50, 60);
  GenericRun run = build_chain(boot5(), {{9, 0, 0}}, o, fresh);
  GenericRun back = run_from_json(parse_json(run_to_json(run).dump()));
  CHECK(back.chain == run.chain);
  CHECK(back.eta == run.eta);
  CHECK(back.forest == run.forest);
  CHECK(run_to_json(back) == run_to_json(run));
}
