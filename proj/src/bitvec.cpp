#include "duokey/bitvec.hpp"

#include <bit>

namespace duokey {
namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

void require_length(std::size_t length) {
  if (length > BitVec::kMaxLength) {
    throw InvalidArgument("bit vector longer than " +
                          std::to_string(BitVec::kMaxLength) + " bits");
  }
}

}  // namespace

BitVec::BitVec(std::size_t length) : length_(length) {
  require_length(length);
  words_.assign(word_count(length), 0);
}

BitVec BitVec::parse(std::string_view text) {
  BitVec v(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      throw InvalidArgument("not a bit string: '" + std::string(text) + "'");
    }
    v.set(i, c == '1');
  }
  return v;
}

BitVec BitVec::from_uint(std::uint64_t value, std::size_t width) {
  if (width > 64 || (width < 64 && (value >> width) != 0)) {
    throw InvalidArgument(std::to_string(value) + " does not fit in " +
                          std::to_string(width) + " bits");
  }
  BitVec v(width);
  for (std::size_t i = 0; i < width; ++i) {
    v.set(i, (value >> (width - 1 - i)) & 1u);
  }
  return v;
}

bool BitVec::at(std::size_t position) const {
  if (position < 1 || position > length_) {
    throw InvalidArgument("bit position " + std::to_string(position) +
                          " outside 1.." + std::to_string(length_));
  }
  return (*this)[position - 1];
}

std::uint64_t BitVec::to_uint() const {
  if (length_ > 64) {
    throw InvalidArgument("to_uint on a " + std::to_string(length_) + "-bit vector");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < length_; ++i) {
    value = (value << 1) | static_cast<std::uint64_t>((*this)[i]);
  }
  return value;
}

std::size_t BitVec::count_ones() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::string BitVec::str() const {
  std::string out(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

PermTable::PermTable(std::vector<std::uint16_t> entries, std::size_t input_width)
    : entries_(std::move(entries)), input_width_(input_width), bijective_(false) {
  if (input_width_ == 0 || entries_.empty()) {
    throw InvalidArgument("permutation table must be non-empty");
  }
  std::vector<bool> seen(input_width_, false);
  bool repeated = false;
  for (auto e : entries_) {
    if (e < 1 || e > input_width_) {
      throw InvalidArgument("table entry " + std::to_string(e) + " outside 1.." +
                            std::to_string(input_width_));
    }
    if (seen[e - 1]) repeated = true;
    seen[e - 1] = true;
  }
  bijective_ = !repeated && entries_.size() == input_width_;
}

PermTable PermTable::identity(std::size_t width) {
  std::vector<std::uint16_t> entries(width);
  for (std::size_t i = 0; i < width; ++i) entries[i] = static_cast<std::uint16_t>(i + 1);
  return PermTable(std::move(entries), width);
}

BitVec permute(const BitVec& v, const PermTable& table) {
  if (v.size() != table.input_width()) {
    throw LengthMismatch("permute: " + std::to_string(v.size()) +
                         "-bit input for a table over " +
                         std::to_string(table.input_width()) + " bits");
  }
  BitVec out(table.output_width());
  const auto& entries = table.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out.set(i, v[entries[i] - 1u]);
  }
  return out;
}

PermTable invert_table(const PermTable& table) {
  if (!table.bijective()) {
    throw InvalidArgument("only bijective tables can be inverted");
  }
  const auto& entries = table.entries();
  std::vector<std::uint16_t> inverse(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    inverse[entries[i] - 1u] = static_cast<std::uint16_t>(i + 1);
  }
  return PermTable(std::move(inverse), table.input_width());
}

BitVec rotate_left(const BitVec& v, std::size_t k) {
  const std::size_t n = v.size();
  BitVec out(n);
  if (n == 0) return out;
  k %= n;
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, v[(i + k) % n]);
  }
  return out;
}

std::pair<BitVec, BitVec> split(const BitVec& v) {
  if (v.size() % 2 != 0) {
    throw InvalidArgument("split needs an even length, got " + std::to_string(v.size()));
  }
  const std::size_t half = v.size() / 2;
  BitVec left(half);
  BitVec right(half);
  for (std::size_t i = 0; i < half; ++i) {
    left.set(i, v[i]);
    right.set(i, v[half + i]);
  }
  return {std::move(left), std::move(right)};
}

BitVec concat(const BitVec& a, const BitVec& b) {
  BitVec out(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) out.set(a.size() + i, b[i]);
  return out;
}

BitVec xor_bits(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("xor of " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " bits");
  }
  BitVec out = a;
  for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] ^= b.words_[w];
  return out;
}

std::size_t hamming_distance(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("hamming distance of " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " bits");
  }
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    d += static_cast<std::size_t>(std::popcount(a.words_[w] ^ b.words_[w]));
  }
  return d;
}

}  // namespace duokey
