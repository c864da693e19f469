#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "duokey/error.hpp"

namespace duokey {

// Fixed-length ordered bit sequence.
//
// Documentation and table literals number bits from 1, with bit 1 leftmost in
// the textual form ("1010000010" has bit 1 = 1, bit 2 = 0, ...). Accessors on
// this class take 0-based indices; `at()` takes the 1-based position.
class BitVec {
 public:
  static constexpr std::size_t kMaxLength = 1u << 16;

  BitVec() = default;
  explicit BitVec(std::size_t length);

  // Parses an ASCII '0'/'1' string. Throws InvalidArgument on any other char.
  static BitVec parse(std::string_view text);
  // Big-endian: bit 1 is the most significant of `width` bits.
  static BitVec from_uint(std::uint64_t value, std::size_t width);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  bool operator[](std::size_t index) const noexcept {
    return (words_[index / 64] >> (index % 64)) & 1u;
  }
  // 1-based, bounds checked.
  bool at(std::size_t position) const;

  void set(std::size_t index, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (index % 64);
    if (value) {
      words_[index / 64] |= mask;
    } else {
      words_[index / 64] &= ~mask;
    }
  }

  // Positional value, bit 1 most significant. Requires size() <= 64.
  std::uint64_t to_uint() const;
  std::size_t count_ones() const noexcept;
  std::string str() const;

  friend bool operator==(const BitVec& a, const BitVec& b) noexcept {
    return a.length_ == b.length_ && a.words_ == b.words_;
  }

 private:
  friend BitVec xor_bits(const BitVec&, const BitVec&);
  friend std::size_t hamming_distance(const BitVec&, const BitVec&);

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

// Table of 1-based source positions. Output bit i is input bit entries[i].
// Tables are validated on construction, so an invalid table cannot exist.
class PermTable {
 public:
  PermTable(std::vector<std::uint16_t> entries, std::size_t input_width);
  PermTable(std::initializer_list<std::uint16_t> entries, std::size_t input_width)
      : PermTable(std::vector<std::uint16_t>(entries), input_width) {}

  static PermTable identity(std::size_t width);

  const std::vector<std::uint16_t>& entries() const noexcept { return entries_; }
  std::size_t input_width() const noexcept { return input_width_; }
  std::size_t output_width() const noexcept { return entries_.size(); }
  // True when the entries are a permutation of 1..input_width.
  bool bijective() const noexcept { return bijective_; }

  friend bool operator==(const PermTable& a, const PermTable& b) noexcept {
    return a.input_width_ == b.input_width_ && a.entries_ == b.entries_;
  }

 private:
  std::vector<std::uint16_t> entries_;
  std::size_t input_width_;
  bool bijective_;
};

BitVec permute(const BitVec& v, const PermTable& table);
// Throws InvalidArgument for non-bijective tables.
PermTable invert_table(const PermTable& table);

// Circular: bit i of the result is bit ((i - 1 + k) mod n) + 1 of v.
BitVec rotate_left(const BitVec& v, std::size_t k);
// Halves of an even-length vector. Throws InvalidArgument on odd length.
std::pair<BitVec, BitVec> split(const BitVec& v);
BitVec concat(const BitVec& a, const BitVec& b);
BitVec xor_bits(const BitVec& a, const BitVec& b);
std::size_t hamming_distance(const BitVec& a, const BitVec& b);

}  // namespace duokey
