#pragma once

// Independent reference for the key schedule and the block network, written
// straight from the published step lists on plain integers. Shares no code
// with duokey::BitVec or duokey::PermTable. Bit 1 is the most significant bit.

#include <array>
#include <cstdint>

namespace oracle {

// Bit `pos` (1-based from the left) of a `width`-bit value.
constexpr unsigned bit(unsigned value, unsigned width, unsigned pos) {
  return (value >> (width - pos)) & 1u;
}

template <std::size_t N>
constexpr unsigned pick(unsigned value, unsigned width, const std::array<unsigned, N>& positions) {
  unsigned out = 0;
  for (unsigned p : positions) out = (out << 1) | bit(value, width, p);
  return out;
}

constexpr unsigned rotl5(unsigned v) { return ((v << 1) | (v >> 4)) & 0x1fu; }

constexpr unsigned key(unsigned seed10) {
  // "3rd bit of the array comes in 1st bit position", ...
  const unsigned p10 = pick(seed10, 10, std::array<unsigned, 10>{3, 5, 2, 7, 4, 10, 1, 9, 8, 6});
  const unsigned left = rotl5(p10 >> 5);
  const unsigned right = rotl5(p10 & 0x1fu);
  return pick((left << 5) | right, 10, std::array<unsigned, 8>{6, 3, 7, 4, 8, 5, 10, 9});
}

constexpr unsigned kS1[4][4] = {{1, 0, 3, 2}, {3, 2, 1, 0}, {0, 2, 1, 3}, {3, 1, 3, 2}};
constexpr unsigned kS2[4][4] = {{0, 1, 2, 3}, {2, 0, 1, 3}, {3, 0, 1, 0}, {2, 1, 0, 3}};

// Steps 5-19 (and 21-35): expand, mix key, two S-box lookups, P4.
constexpr unsigned round_fn(unsigned half4, unsigned key8) {
  const unsigned expanded = pick(half4, 4, std::array<unsigned, 8>{4, 1, 2, 3, 2, 3, 4, 1});
  const unsigned e = expanded ^ key8;
  const unsigned bin1 = (bit(e, 8, 1) << 1) | bit(e, 8, 4);
  const unsigned bin2 = (bit(e, 8, 2) << 1) | bit(e, 8, 3);
  const unsigned bin3 = (bit(e, 8, 5) << 1) | bit(e, 8, 8);
  const unsigned bin4 = (bit(e, 8, 6) << 1) | bit(e, 8, 7);
  const unsigned merged = (kS1[bin1][bin2] << 2) | kS2[bin3][bin4];
  return pick(merged, 4, std::array<unsigned, 4>{2, 4, 3, 1});
}

constexpr unsigned network(unsigned block8, unsigned first_key, unsigned second_key) {
  const unsigned array2 = pick(block8, 8, std::array<unsigned, 8>{2, 6, 3, 1, 4, 8, 5, 7});
  const unsigned array3 = array2 >> 4;
  const unsigned array4 = array2 & 0xfu;
  const unsigned array15 = round_fn(array4, first_key) ^ array3;
  const unsigned array26 = round_fn(array15, second_key) ^ array4;
  const unsigned array27 = (array26 << 4) | array15;
  return pick(array27, 8, std::array<unsigned, 8>{4, 1, 3, 5, 7, 2, 8, 6});
}

constexpr unsigned encrypt(unsigned p, unsigned k1, unsigned k2) { return network(p, k1, k2); }
constexpr unsigned decrypt(unsigned c, unsigned k1, unsigned k2) { return network(c, k2, k1); }

}  // namespace oracle
