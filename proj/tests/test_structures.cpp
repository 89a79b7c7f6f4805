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

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "overlap/structures.hpp"

using namespace overlap;
using fixture::bv;

namespace {

bool has_clause(const Diagnostics& d, const std::string& c) {
  for (const auto& x : d)
    if (x.clause == c) return true;
  return false;
}

}  // namespace

TEST_CASE("validate the two-node example and its breakages") {
  Forest f = fixture::example_forest();
  MStruct m = fixture::example_structure();
  CHECK(validate(m, f).empty());
  CHECK(brute::valid(m, brute::from(f)));

  MStruct rep = m;
  rep.g[rep.slot(0, 1, 1)] = rep.g[rep.slot(0, 1, 0)];
  rep.g[rep.slot(1, 0, 1)] = rep.g[rep.slot(1, 0, 0)];
  rep.h[rep.slot(0, 1, 1)] = 0;
  rep.h[rep.slot(1, 0, 1)] = 0;
  CHECK(has_clause(validate(rep, f), "(e)"));

  MStruct one = fixture::structure(2, 2, {"00"}, {});
  CHECK(has_clause(validate(one, f), "(a)"));

  MStruct bad_sum = m;
  bad_sum.g[bad_sum.slot(1, 0, 1)] = bv("01");
  CHECK(has_clause(validate(bad_sum, f), "(d)"));

  MStruct bad_tree = m;
  bad_tree.h[bad_tree.slot(0, 1, 0)] = 1;
  CHECK(has_clause(validate(bad_tree, f), "(c)"));

  MStruct far = m;
  far.h[far.slot(0, 1, 0)] = 7;
  CHECK(has_clause(validate(far, f), "(finite)"));
}

TEST_CASE("enumeration matches pair-by-pair counting") {
  for (const auto& f : fixture::corpus()) {
    auto sf = brute::from(f);
    for (std::size_t ell = 1; ell <= f.height(); ++ell)
      for (std::size_t max_u = 2; max_u <= 3; ++max_u) {
        auto all = enumerate(f, 2, ell, max_u);
        CHECK(all.size() == brute::count_structures(sf, 2, ell, max_u));
        std::set<std::vector<std::string>> seen;
        for (const auto& m : all) {
          CHECK(brute::valid(m, sf));
          std::vector<std::string> key;
          for (const auto& x : m.u) key.push_back(x.str());
          for (std::size_t s = 0; s < m.g.size(); ++s)
            key.push_back(m.g[s].str() + ":" + std::to_string(m.h[s]));
          CHECK(seen.insert(key).second);
        }
      }
  }
}

TEST_CASE("single top node admits no structure") {
  Forest f = fixture::forest(2, {{"01"}});
  CHECK(enumerate(f, 2, 2, 3).empty());
  CHECK(enumerate(f, 2, 1, 3).empty());
}

TEST_CASE("translation is a validity-preserving involution and a bijection") {
  Forest f = fixture::forest(2, {{"00", "11"}, {"01", "10"}, {"00", "01"}});
  for (std::size_t iota : {2, 3}) {
    auto all = enumerate(f, iota, 2, 3);
    std::set<std::vector<std::string>> base;
    auto key = [](const MStruct& m) {
      std::vector<std::string> k;
      for (const auto& x : m.u) k.push_back(x.str());
      for (std::size_t s = 0; s < m.g.size(); ++s) k.push_back(m.g[s].str() + std::to_string(m.h[s]));
      return k;
    };
    for (const auto& m : all) base.insert(key(m));
    for (const auto& r : brute::cube(2)) {
      std::set<std::vector<std::string>> image;
      for (const auto& m : all) {
        MStruct t = translate(m, bv(r));
        CHECK(is_valid(t, f));
        CHECK(translate(t, bv(r)) == m);
        image.insert(key(t));
      }
      CHECK(image == base);
    }
    if (!all.empty()) {
      CHECK(translate(all[0], BitVec::zeros(2)) == all[0]);
      CHECK(translate(all[0], bv("0110")) == translate(all[0], bv("01")));
      CHECK_THROWS_AS(translate(all[0], bv("0")), UsageError);
    }
  }
}

TEST_CASE("extension agrees with the definition and is a partial order") {
  for (std::size_t idx : {0u, 3u, 4u}) {
    Forest f = fixture::corpus()[idx];
    std::vector<MStruct> all;
    for (std::size_t ell = 1; ell <= f.height(); ++ell) {
      auto lv = enumerate(f, 2, ell, 2);
      all.insert(all.end(), lv.begin(), lv.end());
    }
    if (all.size() > 400) all.resize(400);
    std::vector<std::vector<char>> rel(all.size(), std::vector<char>(all.size()));
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j) {
        rel[i][j] = extends(all[i], all[j]);
        CHECK(bool(rel[i][j]) == brute::below(all[i], all[j]));
        if (rel[i][j]) CHECK(essentially_extends(all[i], all[j]));
      }
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(rel[i][i]);
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (i != j && rel[i][j]) CHECK_FALSE(rel[j][i]);
        if (!rel[i][j]) continue;
        for (std::size_t k = 0; k < all.size(); ++k)
          if (rel[j][k]) CHECK(rel[i][k]);
      }
    }
  }
}

TEST_CASE("one-level refinement copying g and h extends") {
  Forest f = fixture::forest(3, {{"000", "110"}, {"010", "100"}});
  MStruct m = fixture::structure(2, 2, {"00", "11"},
                                 {{"00", "11", 0, 0, "00"}, {"11", "00", 0, 0, "11"},
                                  {"00", "11", 1, 1, "01"}, {"11", "00", 1, 1, "10"}});
  MStruct n = fixture::structure(3, 2, {"000", "110"},
                                 {{"000", "110", 0, 0, "000"}, {"110", "000", 0, 0, "110"},
                                  {"000", "110", 1, 1, "010"}, {"110", "000", 1, 1, "100"}});
  REQUIRE(is_valid(m, f.truncate(2)));
  REQUIRE(is_valid(n, f));
  CHECK(extends(m, n));
  CHECK(restrict_to_level(n, 2) == m);
  CHECK_FALSE(extends(n, m));
}

TEST_CASE("essential sameness ignores index order and pair orientation") {
  MStruct m = fixture::example_structure();
  CHECK(essentially_same(m, m));

  MStruct perm = m;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      if (a == b) continue;
      std::swap(perm.g[perm.slot(a, b, 0)], perm.g[perm.slot(a, b, 1)]);
      std::swap(perm.h[perm.slot(a, b, 0)], perm.h[perm.slot(a, b, 1)]);
    }
  CHECK(perm != m);
  CHECK(essentially_same(m, perm));
  CHECK(essentially_same(perm, m));

  MStruct flip = m;
  std::swap(flip.g[flip.slot(0, 1, 0)], flip.g[flip.slot(1, 0, 0)]);
  std::swap(flip.h[flip.slot(0, 1, 0)], flip.h[flip.slot(1, 0, 0)]);
  CHECK(essentially_same(m, flip));

  MStruct moved = m;
  moved.h[moved.slot(0, 1, 1)] = 0;
  CHECK_FALSE(essentially_same(m, moved));
}

TEST_CASE("essential extension without extension") {
  MStruct m = fixture::example_structure();
  MStruct n = fixture::structure(3, 2, {"000", "110"},
                                 {{"000", "110", 1, 0, "000"}, {"110", "000", 1, 0, "110"},
                                  {"000", "110", 0, 1, "010"}, {"110", "000", 0, 1, "100"}});
  CHECK(essentially_extends(m, n));
  CHECK_FALSE(extends(m, n));
  CHECK(essentially_extends(m, m));
}

TEST_CASE("restriction") {
  Forest f = fixture::forest(2, {{"00", "11", "01", "10"}});
  auto all = enumerate(f, 2, 2, 3);
  std::size_t tested = 0;
  for (const auto& m : all) {
    if (m.width() != 3) continue;
    CHECK(restrict(m, m.u) == m);
    for (std::size_t drop = 0; drop < 3; ++drop) {
      std::vector<BitVec> u2;
      for (std::size_t a = 0; a < 3; ++a)
        if (a != drop) u2.push_back(m.u[a]);
      MStruct r = restrict(m, u2);
      CHECK(is_valid(r, f));
      CHECK(restrict(r, {u2[0], u2[1]}) == restrict(m, {u2[0], u2[1]}));
    }
    CHECK_THROWS_AS(restrict(m, {m.u[0]}), UsageError);
    ++tested;
  }
  CHECK(tested > 0);
}
