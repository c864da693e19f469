#include <doctest.h>

#include <algorithm>
#include <random>

#include "duokey/analysis.hpp"
#include "sdes_oracle.hpp"

using namespace duokey::cipher;

namespace {

std::vector<KnownPair> known_pairs(std::mt19937& rng, unsigned k1, unsigned k2, std::size_t n) {
  std::vector<unsigned> plains(256);
  for (unsigned i = 0; i < 256; ++i) plains[i] = i;
  for (std::size_t i = 0; i < n; ++i) std::swap(plains[i], plains[i + rng() % (256 - i)]);
  std::vector<KnownPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    pairs.push_back({Block8::from_uint(plains[i]), Block8::from_uint(oracle::encrypt(plains[i], k1, k2))});
  }
  return pairs;
}

}  // namespace

TEST_CASE("brute force needs at least one pair") {
  CHECK_THROWS_AS(brute_force_recover({}), duokey::InvalidArgument);
}

TEST_CASE("brute force is sound; four pairs leave a handful of candidates") {
  std::mt19937 rng(1234);
  std::size_t unique = 0;
  std::size_t total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned k1 = rng() & 0xff, k2 = rng() & 0xff;
    const auto pairs = known_pairs(rng, k1, k2, 4);
    const auto found = brute_force_recover(pairs, CipherParams::standard(), 4);
    const bool contains = std::any_of(found.begin(), found.end(), [&](const auto& kp) {
      return kp.first.to_uint() == k1 && kp.second.to_uint() == k2;
    });
    REQUIRE(contains);
    REQUIRE(std::is_sorted(found.begin(), found.end(), [](const auto& a, const auto& b) {
      return std::pair(a.first.to_uint(), a.second.to_uint()) <
             std::pair(b.first.to_uint(), b.second.to_uint());
    }));
    unique += found.size() == 1;
    total += found.size();
  }
  MESSAGE("trials with a unique candidate: " << unique << "/100, mean candidates " << total / 100.0);
  // Measured with rng seed 1234 (first run, pinned as a regression
  // baseline): 40/100 unique, 270 candidates in total. Every key pair gives a
  // distinct permutation, but four pairs constrain k1 only through the few
  // right halves they exercise.
  CHECK(unique == 40);
  CHECK(total == 270);
}

TEST_CASE("single-pair candidate counts partition the key space") {
  const unsigned plain = 0x5a;
  std::size_t sum = 0;
  for (unsigned c = 0; c < 256; ++c) {
    const std::vector<KnownPair> pair{{Block8::from_uint(plain), Block8::from_uint(c)}};
    sum += brute_force_recover(pair, CipherParams::standard(), 2).size();
  }
  CHECK(sum == 65536);
}

TEST_CASE("brute force output is independent of worker count") {
  std::mt19937 rng(77);
  const auto pairs = known_pairs(rng, 0x3c, 0xa1, 1);
  const auto one = brute_force_recover(pairs, CipherParams::standard(), 1);
  CHECK(one.size() > 1);
  for (unsigned w : {2u, 3u, 7u, 16u}) {
    CHECK(brute_force_recover(pairs, CipherParams::standard(), w) == one);
  }
}

TEST_CASE("seed-space search equals a direct scan of all seed pairs") {
  std::mt19937 rng(8);
  const unsigned seed_a = rng() & 0x3ff, seed_b = rng() & 0x3ff;
  const auto pairs = known_pairs(rng, oracle::key(seed_a), oracle::key(seed_b), 2);

  std::vector<std::pair<unsigned, unsigned>> expected;
  for (unsigned a = 0; a < 1024; ++a) {
    const unsigned k1 = oracle::key(a);
    for (unsigned b = 0; b < 1024; ++b) {
      const unsigned k2 = oracle::key(b);
      const bool ok = std::all_of(pairs.begin(), pairs.end(), [&](const KnownPair& p) {
        return oracle::encrypt(static_cast<unsigned>(p.plain.to_uint()), k1, k2) == p.cipher.to_uint();
      });
      if (ok) expected.emplace_back(a, b);
    }
  }

  const auto found = brute_force_recover_seeds(pairs, CipherParams::standard(), 3);
  REQUIRE(found.size() == expected.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    CHECK(found[i].first.to_uint() == expected[i].first);
    CHECK(found[i].second.to_uint() == expected[i].second);
  }
  CHECK(std::find(expected.begin(), expected.end(), std::pair(seed_a, seed_b)) != expected.end());
}

TEST_CASE("avalanche") {
  CHECK_THROWS_AS(avalanche_report(0, 1), duokey::InvalidArgument);

  const NetworkTables tables;
  for (unsigned p = 0; p < 256; p += 17) {
    CHECK(flipped_bits(tables, static_cast<std::uint8_t>(p), 0, 0x12, 0x34) == 0);
  }

  const auto a = avalanche_report(1000, 42);
  const auto b = avalanche_report(1000, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.histogram == b.histogram);
  CHECK(a.histogram[0] == 0);  // a bijection never maps two inputs to one output

  const auto big = avalanche_report(100000, 1);
  std::size_t sum = 0;
  for (auto n : big.histogram) sum += n;
  CHECK(sum == 100000);
  CHECK(big.mean > 0.0);
  CHECK(big.mean < 8.0);
  // Regression baseline, pinned from the first run with seed 1.
  CHECK(big.mean == doctest::Approx(3.79821).epsilon(1e-9));
}
