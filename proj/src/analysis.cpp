#include "duokey/analysis.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <thread>

namespace duokey::cipher {
namespace {

struct RawPair {
  std::uint8_t plain;
  std::uint8_t cipher;
};

std::vector<std::pair<std::uint8_t, std::uint8_t>> scan(std::span<const RawPair> pairs,
                                                        const NetworkTables& tables,
                                                        unsigned k1_begin, unsigned k1_end) {
  std::vector<std::pair<std::uint8_t, std::uint8_t>> hits;
  for (unsigned k1 = k1_begin; k1 < k1_end; ++k1) {
    for (unsigned k2 = 0; k2 < 256; ++k2) {
      const bool consistent = std::all_of(pairs.begin(), pairs.end(), [&](const RawPair& p) {
        return tables.encrypt(p.plain, static_cast<std::uint8_t>(k1),
                              static_cast<std::uint8_t>(k2)) == p.cipher;
      });
      if (consistent) hits.emplace_back(static_cast<std::uint8_t>(k1), static_cast<std::uint8_t>(k2));
    }
  }
  return hits;
}

std::vector<std::pair<std::uint8_t, std::uint8_t>> recover_raw(std::span<const KnownPair> pairs,
                                                               const CipherParams& params,
                                                               unsigned workers) {
  if (pairs.empty()) {
    throw InvalidArgument("brute force needs at least one known plaintext pair");
  }
  std::vector<RawPair> raw;
  raw.reserve(pairs.size());
  for (const auto& p : pairs) {
    raw.push_back({static_cast<std::uint8_t>(p.plain.to_uint()),
                   static_cast<std::uint8_t>(p.cipher.to_uint())});
  }
  const NetworkTables tables(params);
  workers = std::clamp(workers, 1u, 256u);

  // Each worker owns a contiguous k1 range; concatenating in range order keeps
  // the output sorted for any worker count.
  std::vector<std::vector<std::pair<std::uint8_t, std::uint8_t>>> parts(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    const unsigned begin = 256 * w / workers;
    const unsigned end = 256 * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] { parts[w] = scan(raw, tables, begin, end); });
  }
  for (auto& t : threads) t.join();

  std::vector<std::pair<std::uint8_t, std::uint8_t>> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

}  // namespace

std::vector<std::pair<RoundKey8, RoundKey8>> brute_force_recover(std::span<const KnownPair> pairs,
                                                                 const CipherParams& params,
                                                                 unsigned workers) {
  std::vector<std::pair<RoundKey8, RoundKey8>> out;
  for (auto [k1, k2] : recover_raw(pairs, params, workers)) {
    out.emplace_back(RoundKey8::from_uint(k1), RoundKey8::from_uint(k2));
  }
  return out;
}

std::vector<std::pair<Seed10, Seed10>> brute_force_recover_seeds(std::span<const KnownPair> pairs,
                                                                 const CipherParams& params,
                                                                 unsigned workers) {
  std::array<std::vector<std::uint16_t>, 256> preimages;
  for (unsigned s = 0; s < 1024; ++s) {
    const auto key = derive_round_key(Seed10::from_uint(s), params).to_uint();
    preimages[key].push_back(static_cast<std::uint16_t>(s));
  }
  std::vector<std::pair<std::uint16_t, std::uint16_t>> seeds;
  for (auto [k1, k2] : recover_raw(pairs, params, workers)) {
    for (auto a : preimages[k1]) {
      for (auto b : preimages[k2]) seeds.emplace_back(a, b);
    }
  }
  std::sort(seeds.begin(), seeds.end());
  std::vector<std::pair<Seed10, Seed10>> out;
  out.reserve(seeds.size());
  for (auto [a, b] : seeds) out.emplace_back(Seed10::from_uint(a), Seed10::from_uint(b));
  return out;
}

unsigned flipped_bits(const NetworkTables& tables, std::uint8_t plain, std::uint8_t flip_mask,
                      std::uint8_t k1, std::uint8_t k2) {
  const std::uint8_t a = tables.encrypt(plain, k1, k2);
  const std::uint8_t b = tables.encrypt(static_cast<std::uint8_t>(plain ^ flip_mask), k1, k2);
  return static_cast<unsigned>(std::popcount(static_cast<unsigned>(a ^ b)));
}

AvalancheReport avalanche_report(std::size_t trials, std::uint64_t rng_seed,
                                 const CipherParams& params) {
  if (trials == 0) throw InvalidArgument("avalanche needs at least one trial");
  const NetworkTables tables(params);
  // mt19937_64 output is fixed by the standard; the draws below use raw bits
  // rather than a distribution so reports match across standard libraries.
  std::mt19937_64 rng(rng_seed);
  AvalancheReport report;
  report.trials = trials;
  std::size_t total = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t r = rng();
    const auto plain = static_cast<std::uint8_t>(r);
    const auto k1 = static_cast<std::uint8_t>(r >> 8);
    const auto k2 = static_cast<std::uint8_t>(r >> 16);
    const auto mask = static_cast<std::uint8_t>(1u << ((r >> 24) & 7u));
    const unsigned n = flipped_bits(tables, plain, mask, k1, k2);
    ++report.histogram[n];
    total += n;
  }
  report.mean = static_cast<double>(total) / static_cast<double>(trials);
  return report;
}

}  // namespace duokey::cipher
