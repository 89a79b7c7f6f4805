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

#include "overlap/forest.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "overlap/error.hpp"

namespace overlap {

namespace {

void sort_unique(std::vector<BitVec>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Tree::Tree(std::size_t height, std::vector<BitVec> tops) : height_(height), tops_(std::move(tops)) {
  if (tops_.empty()) throw UsageError("a tree needs at least one top-level node");
  for (const auto& t : tops_)
    if (t.size() != height_)
      throw UsageError("top-level node " + t.str() + " is not of length " +
                       std::to_string(height_));
  sort_unique(tops_);
}

Tree Tree::full(std::size_t height) {
  if (height > 24) throw ResourceError("full tree of height " + std::to_string(height));
  std::vector<BitVec> tops;
  tops.reserve(std::size_t{1} << height);
  for (std::size_t x = 0; x < (std::size_t{1} << height); ++x) {
    BitVec v(height);
    for (std::size_t i = 0; i < height; ++i)
      if ((x >> (height - 1 - i)) & 1) v.set(i);
    tops.push_back(std::move(v));
  }
  return Tree(height, std::move(tops));
}

bool Tree::contains(const BitVec& node) const {
  if (node.size() > height_) return false;
  auto it = std::lower_bound(tops_.begin(), tops_.end(), node);
  return it != tops_.end() && node.is_prefix_of(*it);
}

std::vector<BitVec> Tree::level(std::size_t ell) const {
  if (ell > height_) return {};
  std::vector<BitVec> out;
  for (const auto& t : tops_) {
    BitVec p = t.prefix(ell);
    if (out.empty() || out.back() != p) out.push_back(std::move(p));
  }
  return out;
}

Tree Tree::truncate(std::size_t height) const {
  if (height > height_) throw UsageError("cannot truncate a tree upwards");
  return Tree(height, level(height));
}

Tree Tree::translate(const BitVec& w) const {
  std::vector<BitVec> moved;
  moved.reserve(tops_.size());
  for (const auto& t : tops_) moved.push_back(t + w);
  return Tree(height_, std::move(moved));
}

Forest::Forest(std::size_t height, std::vector<Tree> trees)
    : height_(height), trees_(std::move(trees)) {
  std::size_t total = 0;
  for (const auto& t : trees_) {
    if (t.height() != height_)
      throw UsageError("tree of height " + std::to_string(t.height()) + " in a forest of height " +
                       std::to_string(height_));
    top_.insert(top_.end(), t.tops().begin(), t.tops().end());
    total += t.tops().size();
  }
  sort_unique(top_);
  disjoint_ = top_.size() == total;
}

bool Forest::in_top_level(const BitVec& x) const {
  return std::binary_search(top_.begin(), top_.end(), x);
}

std::vector<BitVec> Forest::level(std::size_t ell) const {
  std::vector<BitVec> out;
  for (const auto& t : trees_) {
    auto l = t.level(ell);
    out.insert(out.end(), l.begin(), l.end());
  }
  sort_unique(out);
  return out;
}

std::vector<std::size_t> Forest::trees_containing(const BitVec& node) const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < trees_.size(); ++m)
    if (trees_[m].contains(node)) out.push_back(m);
  return out;
}

Forest Forest::truncate(std::size_t height) const {
  std::vector<Tree> ts;
  for (const auto& t : trees_) ts.push_back(t.truncate(height));
  return Forest(height, std::move(ts));
}

Forest Forest::translate(const BitVec& w) const {
  std::vector<Tree> ts;
  for (const auto& t : trees_) ts.push_back(t.translate(w));
  return Forest(height_, std::move(ts));
}

std::vector<BitVec> top_level(const Forest& f) { return f.top_level(); }

std::size_t overlap(const Forest& f, const BitVec& x, const BitVec& y) {
  if (x.size() != f.height() || y.size() != f.height())
    throw UsageError("overlap arguments must have the forest height " +
                     std::to_string(f.height()));
  BitVec s = x + y;
  std::size_t count = 0;
  for (const auto& b : f.top_level())
    if (f.in_top_level(b + s)) ++count;
  return count;
}

bool stnd_at_depth(const Forest& f, std::size_t k, const BitVec& x, const BitVec& y) {
  if (x.size() != f.height() || y.size() != f.height())
    throw UsageError("stnd arguments must have the forest height " + std::to_string(f.height()));
  if (k == 0) return true;
  std::unordered_set<BitVec, BitVecHash> zs;
  for (const auto& t : f.trees()) {
    for (const auto& b : t.tops()) {
      BitVec z = b + x;
      BitVec other = z + y;
      bool hit = false;
      for (const auto& t2 : f.trees())
        if (t2.contains(other)) {
          hit = true;
          break;
        }
      if (hit && zs.insert(std::move(z)).second && zs.size() >= k) return true;
    }
  }
  return false;
}

}  // namespace overlap
