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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace overlap {

// Finite 0/1 sequence.  Bit i lives in word i/64 at position 63 - i%64, so
// comparing words compares sequences lexicographically with index 0 first.
// Bits past size() are kept zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

  static BitVec parse(std::string_view s);
  static BitVec zeros(std::size_t len) { return BitVec(len); }
  static BitVec ones(std::size_t len);
  static BitVec unit(std::size_t len, std::size_t i);

  std::size_t size() const noexcept { return len_; }
  bool empty() const noexcept { return len_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (63 - (i & 63))) & 1u;
  }
  bool test(std::size_t i) const;
  void set(std::size_t i, bool v = true);

  BitVec prefix(std::size_t len) const;
  bool is_prefix_of(const BitVec& other) const noexcept;
  BitVec concat(const BitVec& tail) const;
  BitVec& append(bool bit, std::size_t count = 1);
  BitVec& append(const BitVec& tail);

  bool is_zero() const noexcept;
  std::size_t popcount() const noexcept;
  // Index of the first 1, or size() when zero.
  std::size_t first_one() const noexcept;

  BitVec& operator^=(const BitVec& other);

  std::string str() const;
  std::size_t hash() const noexcept;

  friend bool operator==(const BitVec&, const BitVec&) = default;
  friend std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) noexcept;

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

inline BitVec operator+(BitVec a, const BitVec& b) {
  a ^= b;
  return a;
}

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const noexcept { return v.hash(); }
};

}  // namespace overlap
