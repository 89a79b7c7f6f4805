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
#include <vector>

#include "overlap/bitvec.hpp"

namespace overlap {

// Downward-closed subset of 2^{<=height}, stored by its top-level nodes.
class Tree {
 public:
  Tree(std::size_t height, std::vector<BitVec> tops);
  static Tree full(std::size_t height);

  std::size_t height() const noexcept { return height_; }
  const std::vector<BitVec>& tops() const noexcept { return tops_; }

  bool contains(const BitVec& node) const;
  std::vector<BitVec> level(std::size_t ell) const;
  Tree truncate(std::size_t height) const;
  Tree translate(const BitVec& w) const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::size_t height_;
  std::vector<BitVec> tops_;
};

class Forest {
 public:
  Forest() = default;
  Forest(std::size_t height, std::vector<Tree> trees);

  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return trees_.size(); }
  const Tree& tree(std::size_t m) const { return trees_.at(m); }
  const std::vector<Tree>& trees() const noexcept { return trees_; }

  // Pairwise disjoint top levels.
  bool disjoint_tops() const noexcept { return disjoint_; }
  // Sorted union of all top levels.
  const std::vector<BitVec>& top_level() const noexcept { return top_; }
  bool in_top_level(const BitVec& x) const;

  std::vector<BitVec> level(std::size_t ell) const;
  std::vector<std::size_t> trees_containing(const BitVec& node) const;

  Forest truncate(std::size_t height) const;
  Forest translate(const BitVec& w) const;

  friend bool operator==(const Forest& a, const Forest& b) {
    return a.height_ == b.height_ && a.trees_ == b.trees_;
  }

 private:
  std::size_t height_ = 0;
  std::vector<Tree> trees_;
  std::vector<BitVec> top_;
  bool disjoint_ = true;
};

std::vector<BitVec> top_level(const Forest& f);

// #{ z : z + x and z + y both lie in the top level }.
std::size_t overlap(const Forest& f, const BitVec& x, const BitVec& y);

// At least k distinct z with z + x in some tree and z + y in some tree.
bool stnd_at_depth(const Forest& f, std::size_t k, const BitVec& x, const BitVec& y);

}  // namespace overlap
