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

#include "overlap/bitvec.hpp"

#include <bit>

#include "overlap/error.hpp"

namespace overlap {

namespace {

inline std::uint64_t high_mask(std::size_t bits) {
  return bits == 0 ? 0 : (~std::uint64_t{0} << (64 - bits));
}

}  // namespace

BitVec BitVec::parse(std::string_view s) {
  BitVec v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      v.set(i);
    } else if (s[i] != '0') {
      throw ParseError("bit string contains '" + std::string(1, s[i]) + "' at offset " +
                       std::to_string(i));
    }
  }
  return v;
}

BitVec BitVec::ones(std::size_t len) {
  BitVec v(len);
  for (auto& w : v.words_) w = ~std::uint64_t{0};
  if (len % 64) v.words_.back() = high_mask(len % 64);
  return v;
}

BitVec BitVec::unit(std::size_t len, std::size_t i) {
  BitVec v(len);
  v.set(i);
  return v;
}

bool BitVec::test(std::size_t i) const {
  if (i >= len_) throw UsageError("bit index " + std::to_string(i) + " out of range");
  return (*this)[i];
}

void BitVec::set(std::size_t i, bool v) {
  if (i >= len_) throw UsageError("bit index " + std::to_string(i) + " out of range");
  std::uint64_t m = std::uint64_t{1} << (63 - (i & 63));
  if (v)
    words_[i >> 6] |= m;
  else
    words_[i >> 6] &= ~m;
}

BitVec BitVec::prefix(std::size_t len) const {
  if (len > len_)
    throw UsageError("cannot restrict length " + std::to_string(len_) + " to " +
                     std::to_string(len));
  BitVec r;
  r.len_ = len;
  r.words_.assign(words_.begin(), words_.begin() + (len + 63) / 64);
  if (len % 64) r.words_.back() &= high_mask(len % 64);
  return r;
}

bool BitVec::is_prefix_of(const BitVec& other) const noexcept {
  if (len_ > other.len_) return false;
  std::size_t full = len_ / 64;
  for (std::size_t w = 0; w < full; ++w)
    if (words_[w] != other.words_[w]) return false;
  if (len_ % 64) {
    std::uint64_t m = high_mask(len_ % 64);
    if ((words_[full] & m) != (other.words_[full] & m)) return false;
  }
  return true;
}

BitVec BitVec::concat(const BitVec& tail) const {
  BitVec r = *this;
  r.append(tail);
  return r;
}

BitVec& BitVec::append(bool bit, std::size_t count) {
  std::size_t start = len_;
  len_ += count;
  words_.resize((len_ + 63) / 64, 0);
  if (bit)
    for (std::size_t i = start; i < len_; ++i) set(i);
  return *this;
}

BitVec& BitVec::append(const BitVec& tail) {
  std::size_t start = len_;
  append(false, tail.len_);
  for (std::size_t i = 0; i < tail.len_; ++i)
    if (tail[i]) set(start + i);
  return *this;
}

bool BitVec::is_zero() const noexcept {
  for (auto w : words_)
    if (w) return false;
  return true;
}

std::size_t BitVec::popcount() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::size_t BitVec::first_one() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return w * 64 + std::countl_zero(words_[w]);
  return len_;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  if (len_ != other.len_)
    throw UsageError("adding sequences of lengths " + std::to_string(len_) + " and " +
                     std::to_string(other.len_));
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::string BitVec::str() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i)
    if ((*this)[i]) s[i] = '1';
  return s;
}

std::size_t BitVec::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ len_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) noexcept {
  std::size_t common = std::min(a.len_, b.len_);
  std::size_t full = common / 64;
  for (std::size_t w = 0; w < full; ++w)
    if (a.words_[w] != b.words_[w]) return a.words_[w] <=> b.words_[w];
  if (common % 64) {
    std::uint64_t m = high_mask(common % 64);
    std::uint64_t x = a.words_[full] & m, y = b.words_[full] & m;
    if (x != y) return x <=> y;
  }
  return a.len_ <=> b.len_;
}

}  // namespace overlap
