#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "duokey/cipher.hpp"

namespace duokey::cipher {

struct KnownPair {
  Block8 plain;
  Block8 cipher;
};

// Exhaustive search of all 2^16 (k1, k2) round-key pairs. Returns every pair
// consistent with all of `pairs`, ascending by (k1, k2). The result does not
// depend on `workers`. Throws InvalidArgument when `pairs` is empty.
std::vector<std::pair<RoundKey8, RoundKey8>> brute_force_recover(
    std::span<const KnownPair> pairs, const CipherParams& params = CipherParams::standard(),
    unsigned workers = 1);

// Seed-space variant: every (seed_a, seed_b) of the 2^20 seed pairs that is
// consistent with `pairs`, ascending. Equivalent to scanning all seed pairs;
// computed by expanding the round-key candidates through the preimages of the
// key schedule.
std::vector<std::pair<Seed10, Seed10>> brute_force_recover_seeds(
    std::span<const KnownPair> pairs, const CipherParams& params = CipherParams::standard(),
    unsigned workers = 1);

// Number of ciphertext bits that change when `flip_mask` is XORed into the
// plaintext.
unsigned flipped_bits(const NetworkTables& tables, std::uint8_t plain, std::uint8_t flip_mask,
                      std::uint8_t k1, std::uint8_t k2);

struct AvalancheReport {
  std::size_t trials = 0;
  double mean = 0.0;
  // histogram[n] = trials in which exactly n ciphertext bits flipped.
  std::array<std::size_t, 9> histogram{};
};

// Draws (plaintext, k1, k2, flipped bit) uniformly from a mt19937_64 seeded
// with `rng_seed`. Throws InvalidArgument when trials == 0.
AvalancheReport avalanche_report(std::size_t trials, std::uint64_t rng_seed,
                                 const CipherParams& params = CipherParams::standard());

}  // namespace duokey::cipher
