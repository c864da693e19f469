#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "duokey/bitvec.hpp"

namespace duokey::cipher {

// A BitVec whose width is part of the type. Tag keeps same-width roles
// (round keys, blocks) from being mixed up.
template <std::size_t Width, class Tag>
class FixedBits {
 public:
  static constexpr std::size_t kWidth = Width;

  explicit FixedBits(BitVec bits) : bits_(std::move(bits)) {
    if (bits_.size() != Width) {
      throw InvalidArgument("expected " + std::to_string(Width) + " bits, got " +
                            std::to_string(bits_.size()));
    }
  }

  static FixedBits parse(std::string_view text) { return FixedBits(BitVec::parse(text)); }
  static FixedBits from_uint(std::uint64_t value) {
    return FixedBits(BitVec::from_uint(value, Width));
  }

  const BitVec& bits() const noexcept { return bits_; }
  std::uint64_t to_uint() const { return bits_.to_uint(); }
  std::string str() const { return bits_.str(); }

  friend bool operator==(const FixedBits& a, const FixedBits& b) noexcept {
    return a.bits_ == b.bits_;
  }

 private:
  BitVec bits_;
};

struct SeedTag;
struct RoundKeyTag;
struct BlockTag;

// 10-bit secret entered by the user; one per round key.
using Seed10 = FixedBits<10, SeedTag>;
using RoundKey8 = FixedBits<8, RoundKeyTag>;
using Block8 = FixedBits<8, BlockTag>;

// 4x4 substitution table with 2-bit cells, indexed [row][column].
class SBox {
 public:
  using Grid = std::array<std::array<std::uint8_t, 4>, 4>;

  explicit SBox(const Grid& cells);

  std::uint8_t lookup(std::size_t row, std::size_t col) const { return cells_.at(row).at(col); }
  const Grid& cells() const noexcept { return cells_; }

 private:
  Grid cells_;
};

// Permutation tables and S-boxes of the network. The constructor checks every
// width constraint and that ip_inv really inverts ip.
class CipherParams {
 public:
  CipherParams(PermTable p10, PermTable p8, PermTable ip, PermTable ip_inv, PermTable ep,
               PermTable p4, SBox s1, SBox s2);

  // P10, P8, IP, IP^-1, E/P, P4 as published, with the S-DES S-boxes.
  static const CipherParams& standard();

  const PermTable& p10() const noexcept { return p10_; }
  const PermTable& p8() const noexcept { return p8_; }
  const PermTable& ip() const noexcept { return ip_; }
  const PermTable& ip_inv() const noexcept { return ip_inv_; }
  const PermTable& ep() const noexcept { return ep_; }
  const PermTable& p4() const noexcept { return p4_; }
  const SBox& s1() const noexcept { return s1_; }
  const SBox& s2() const noexcept { return s2_; }

 private:
  PermTable p10_, p8_, ip_, ip_inv_, ep_, p4_;
  SBox s1_, s2_;
};

// P10, split 5/5, rotate each half left by one, merge, P8.
RoundKey8 derive_round_key(const Seed10& seed,
                           const CipherParams& params = CipherParams::standard());

// P4(S1 || S2) of the expanded half XOR key. `half` must be 4 bits.
BitVec round_function(const BitVec& half, const RoundKey8& key,
                      const CipherParams& params = CipherParams::standard());

Block8 encrypt_block(const Block8& plain, const RoundKey8& k1, const RoundKey8& k2,
                     const CipherParams& params = CipherParams::standard());
// Same network with the round keys applied in the order (k2, k1).
Block8 decrypt_block(const Block8& cipher, const RoundKey8& k1, const RoundKey8& k2,
                     const CipherParams& params = CipherParams::standard());

// Every intermediate of one pass through the network, in step order, named
// array1..array28, key1/key2, bin1..bin8 and var1..var4.
struct NetworkTrace {
  std::vector<std::pair<std::string, std::string>> steps;
  Block8 output;
};

NetworkTrace trace_encrypt(const Block8& plain, const RoundKey8& k1, const RoundKey8& k2,
                           const CipherParams& params = CipherParams::standard());
// Labels follow the network, so "key1" is the key used first (k2 here).
NetworkTrace trace_decrypt(const Block8& cipher, const RoundKey8& k1, const RoundKey8& k2,
                           const CipherParams& params = CipherParams::standard());

// Byte-level lookup tables generated by running the reference network over
// every input. Used wherever whole key spaces are swept.
class NetworkTables {
 public:
  explicit NetworkTables(const CipherParams& params = CipherParams::standard());

  std::uint8_t encrypt(std::uint8_t plain, std::uint8_t k1, std::uint8_t k2) const noexcept {
    return run(plain, k1, k2);
  }
  std::uint8_t decrypt(std::uint8_t cipher, std::uint8_t k1, std::uint8_t k2) const noexcept {
    return run(cipher, k2, k1);
  }

 private:
  std::uint8_t run(std::uint8_t in, std::uint8_t first, std::uint8_t second) const noexcept {
    const std::uint8_t x = ip_[in];
    const std::uint8_t left = x >> 4;
    const std::uint8_t right = x & 0x0f;
    const std::uint8_t a = left ^ round_[right][first];
    const std::uint8_t b = right ^ round_[a][second];
    return ip_inv_[static_cast<std::uint8_t>((b << 4) | a)];
  }

  std::array<std::uint8_t, 256> ip_{};
  std::array<std::uint8_t, 256> ip_inv_{};
  std::array<std::array<std::uint8_t, 256>, 16> round_{};
};

// Codebook mode: every byte goes through the block cipher independently, so
// equal plaintext bytes give equal ciphertext bytes.
std::vector<std::uint8_t> encrypt_message(std::span<const std::uint8_t> data, const Seed10& seed_a,
                                          const Seed10& seed_b,
                                          const CipherParams& params = CipherParams::standard());
std::vector<std::uint8_t> decrypt_message(std::span<const std::uint8_t> data, const Seed10& seed_a,
                                          const Seed10& seed_b,
                                          const CipherParams& params = CipherParams::standard());

}  // namespace duokey::cipher
