// Copyright 2026 The Janus Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace janus {

/// Fixed-size bit set whose length is chosen at runtime.
template <class Block = std::uint64_t>
class BasicBitset {
  static_assert(std::numeric_limits<Block>::is_integer &&
                !std::numeric_limits<Block>::is_signed);
  static constexpr std::size_t kBits = std::numeric_limits<Block>::digits;

 public:
  BasicBitset() = default;
  explicit BasicBitset(std::size_t size, bool value = false)
      : size_(size), blocks_((size + kBits - 1) / kBits, value ? ~Block{0} : Block{0}) {
    trim();
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept {
    return (blocks_[i / kBits] >> (i % kBits)) & Block{1};
  }
  BasicBitset& set(std::size_t i, bool value = true) noexcept {
    const Block mask = Block{1} << (i % kBits);
    if (value) {
      blocks_[i / kBits] |= mask;
    } else {
      blocks_[i / kBits] &= ~mask;
    }
    return *this;
  }
  BasicBitset& reset(std::size_t i) noexcept { return set(i, false); }
  BasicBitset& set_all() noexcept {
    for (auto& b : blocks_) b = ~Block{0};
    trim();
    return *this;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (Block b : blocks_) n += static_cast<std::size_t>(std::popcount(b));
    return n;
  }
  bool none() const noexcept {
    for (Block b : blocks_) {
      if (b != 0) return false;
    }
    return true;
  }
  bool any() const noexcept { return !none(); }

  /// True when every bit set here is also set in `other`.
  bool is_subset_of(const BasicBitset& other) const noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k] & ~other.blocks_[k]) return false;
    }
    return true;
  }
  bool is_proper_subset_of(const BasicBitset& other) const noexcept {
    return is_subset_of(other) && *this != other;
  }

  BasicBitset& operator&=(const BasicBitset& o) noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] &= o.blocks_[k];
    return *this;
  }
  BasicBitset& operator|=(const BasicBitset& o) noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] |= o.blocks_[k];
    return *this;
  }
  BasicBitset& subtract(const BasicBitset& o) noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] &= ~o.blocks_[k];
    return *this;
  }
  friend BasicBitset operator&(BasicBitset a, const BasicBitset& b) noexcept { return a &= b; }
  friend BasicBitset operator|(BasicBitset a, const BasicBitset& b) noexcept { return a |= b; }

  /// Index of the lowest set bit, or size() when empty.
  std::size_t first() const noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k] != 0) return k * kBits + static_cast<std::size_t>(std::countr_zero(blocks_[k]));
    }
    return size_;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      Block b = blocks_[k];
      while (b != 0) {
        out.push_back(k * kBits + static_cast<std::size_t>(std::countr_zero(b)));
        b &= b - 1;
      }
    }
    return out;
  }

  friend bool operator==(const BasicBitset&, const BasicBitset&) = default;
  /// Orders by size, then by index list (lexicographic on ascending indices).
  friend bool operator<(const BasicBitset& a, const BasicBitset& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.indices() < b.indices();
  }

 private:
  void trim() noexcept {
    if (size_ % kBits != 0 && !blocks_.empty()) {
      blocks_.back() &= (Block{1} << (size_ % kBits)) - 1;
    }
  }

  std::size_t size_ = 0;
  std::vector<Block> blocks_;
};

using Bitset = BasicBitset<>;

}  // namespace janus
