#include <doctest.h>

#include <random>
#include <set>

#include "duokey/cipher.hpp"
#include "sdes_oracle.hpp"

using namespace duokey::cipher;
using duokey::BitVec;

namespace {

// The oracle reproduces the hand traces before anything else is trusted.
static_assert(oracle::key(0b1010000010) == 0b10100100);
static_assert(oracle::key(0) == 0);
static_assert(oracle::key(0x3ff) == 0xff);
static_assert(oracle::round_fn(0b1110, 0b10100100) == 0b1011);
static_assert(oracle::round_fn(0b0000, 0b00000000) == 0b1000);
static_assert(oracle::round_fn(0b1100, 0b01000011) == 0b0000);
static_assert(oracle::encrypt(0b10111101, 0b10100100, 0b01000011) == 0b01110101);
static_assert(oracle::encrypt(0, 0, 0) == 0b11110000);
static_assert(oracle::decrypt(0b01110101, 0b10100100, 0b01000011) == 0b10111101);

RoundKey8 key(const char* s) { return RoundKey8::parse(s); }
Block8 block(const char* s) { return Block8::parse(s); }

}  // namespace

TEST_CASE("derive_round_key vectors") {
  CHECK(derive_round_key(Seed10::parse("1010000010")).str() == "10100100");
  CHECK(derive_round_key(Seed10::parse("0000000000")).str() == "00000000");
  CHECK(derive_round_key(Seed10::parse("1111111111")).str() == "11111111");
}

TEST_CASE("derive_round_key matches the oracle for every seed") {
  for (unsigned s = 0; s < 1024; ++s) {
    REQUIRE(derive_round_key(Seed10::from_uint(s)).to_uint() == oracle::key(s));
  }
}

TEST_CASE("round_function vectors") {
  CHECK(round_function(BitVec::parse("1110"), key("10100100")).str() == "1011");
  CHECK(round_function(BitVec::parse("0000"), key("00000000")).str() == "1000");
  CHECK(round_function(BitVec::parse("1100"), key("01000011")).str() == "0000");
  CHECK_THROWS_AS(round_function(BitVec::parse("111"), key("00000000")), duokey::LengthMismatch);
}

TEST_CASE("round_function matches the oracle exhaustively") {
  for (unsigned h = 0; h < 16; ++h) {
    for (unsigned k = 0; k < 256; ++k) {
      REQUIRE(round_function(BitVec::from_uint(h, 4), RoundKey8::from_uint(k)).to_uint() ==
              oracle::round_fn(h, k));
    }
  }
}

TEST_CASE("block vectors") {
  CHECK(encrypt_block(block("10111101"), key("10100100"), key("01000011")).str() == "01110101");
  CHECK(encrypt_block(block("00000000"), key("00000000"), key("00000000")).str() == "11110000");
  CHECK(decrypt_block(block("01110101"), key("10100100"), key("01000011")).str() == "10111101");
  CHECK(decrypt_block(block("11110000"), key("00000000"), key("00000000")).str() == "00000000");
}

TEST_CASE("encrypt_block matches the oracle on sampled key pairs") {
  std::mt19937 rng(99);
  for (int i = 0; i < 64; ++i) {
    const unsigned k1 = rng() & 0xff, k2 = rng() & 0xff;
    for (unsigned p = 0; p < 256; ++p) {
      const auto c = encrypt_block(Block8::from_uint(p), RoundKey8::from_uint(k1), RoundKey8::from_uint(k2));
      REQUIRE(c.to_uint() == oracle::encrypt(p, k1, k2));
    }
  }
}

TEST_CASE("decrypt inverts encrypt and encrypt is a bijection") {
  std::mt19937 rng(5);
  for (int i = 0; i < 64; ++i) {
    const auto k1 = derive_round_key(Seed10::from_uint(rng() & 0x3ff));
    const auto k2 = derive_round_key(Seed10::from_uint(rng() & 0x3ff));
    std::set<std::uint64_t> image;
    for (unsigned p = 0; p < 256; ++p) {
      const Block8 plain = Block8::from_uint(p);
      const Block8 c = encrypt_block(plain, k1, k2);
      image.insert(c.to_uint());
      REQUIRE(decrypt_block(c, k1, k2) == plain);
      REQUIRE(encrypt_block(decrypt_block(plain, k1, k2), k1, k2) == plain);
    }
    CHECK(image.size() == 256);
  }
  const auto k = key("01101100");
  for (unsigned p = 0; p < 256; ++p) {
    REQUIRE(decrypt_block(encrypt_block(Block8::from_uint(p), k, k), k, k) == Block8::from_uint(p));
  }
}

TEST_CASE("with k1 = k2 the network is an involution; otherwise double encryption is not") {
  // Decryption is the same network with the keys swapped, so equal keys make
  // encryption its own inverse.
  for (unsigned k = 0; k < 256; ++k) {
    const auto rk = RoundKey8::from_uint(k);
    for (unsigned p = 0; p < 256; ++p) {
      const auto b = Block8::from_uint(p);
      REQUIRE(encrypt_block(encrypt_block(b, rk, rk), rk, rk) == b);
    }
  }
  const auto k1 = key("10100100"), k2 = key("01000011");
  std::size_t fixed = 0;
  for (unsigned p = 0; p < 256; ++p) {
    const auto b = Block8::from_uint(p);
    fixed += encrypt_block(encrypt_block(b, k1, k2), k1, k2) == b;
  }
  CHECK(fixed < 256);
}

TEST_CASE("default params") {
  const auto& params = CipherParams::standard();
  CHECK(params.ip_inv() == duokey::invert_table(params.ip()));
  CHECK(params.ip_inv().entries() == std::vector<std::uint16_t>{4, 1, 3, 5, 7, 2, 8, 6});
}

TEST_CASE("params validation") {
  const auto& d = CipherParams::standard();
  CHECK_THROWS_AS(SBox({{{0, 1, 2, 4}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}}),
                  duokey::InvalidArgument);
  CHECK_THROWS_AS(CipherParams(d.p10(), d.p8(), d.ip(), d.ip(), d.ep(), d.p4(), d.s1(), d.s2()),
                  duokey::InvalidArgument);
  CHECK_THROWS_AS(CipherParams(d.p10(), d.p10(), d.ip(), d.ip_inv(), d.ep(), d.p4(), d.s1(), d.s2()),
                  duokey::InvalidArgument);

  // Swapping the S-boxes is a valid configuration and changes the cipher.
  const CipherParams swapped(d.p10(), d.p8(), d.ip(), d.ip_inv(), d.ep(), d.p4(), d.s2(), d.s1());
  const auto b = block("10111101");
  const auto k1 = key("10100100"), k2 = key("01000011");
  CHECK_FALSE(encrypt_block(b, k1, k2, swapped) == encrypt_block(b, k1, k2));
  CHECK(decrypt_block(encrypt_block(b, k1, k2, swapped), k1, k2, swapped) == b);
}

TEST_CASE("fixed-width types reject other widths") {
  CHECK_THROWS_AS(Seed10::parse("101"), duokey::InvalidArgument);
  CHECK_THROWS_AS(Block8::parse("1011110"), duokey::InvalidArgument);
  CHECK_THROWS_AS(RoundKey8::from_uint(256), duokey::InvalidArgument);
}

TEST_CASE("trace names every intermediate") {
  const auto trace = trace_encrypt(block("10111101"), key("10100100"), key("01000011"));
  CHECK(trace.output.str() == "01110101");
  CHECK(trace.steps.size() == 28 + 2 + 8 + 4);
  CHECK(trace.steps.front() == std::pair<std::string, std::string>{"array1", "10111101"});
  CHECK(trace.steps.back() == std::pair<std::string, std::string>{"array28", "01110101"});

  std::set<std::string> names;
  for (const auto& [name, _] : trace.steps) names.insert(name);
  for (int i = 1; i <= 28; ++i) CHECK(names.contains("array" + std::to_string(i)));

  auto value = [&](const std::string& name) {
    for (const auto& [n, v] : trace.steps) {
      if (n == name) return v;
    }
    return std::string();
  };
  CHECK(value("array14") == "1011");
  CHECK(value("array6") == "11011001");
  CHECK(value("var1") == "3");
  CHECK(value("var2") == "2");

  const auto back = trace_decrypt(block("01110101"), key("10100100"), key("01000011"));
  CHECK(back.output.str() == "10111101");
}

TEST_CASE("NetworkTables agree with the reference network") {
  const NetworkTables tables;
  std::mt19937 rng(3);
  for (int i = 0; i < 32; ++i) {
    const auto k1 = static_cast<std::uint8_t>(rng()), k2 = static_cast<std::uint8_t>(rng());
    for (unsigned p = 0; p < 256; ++p) {
      const auto ref = encrypt_block(Block8::from_uint(p), RoundKey8::from_uint(k1), RoundKey8::from_uint(k2));
      REQUIRE(tables.encrypt(static_cast<std::uint8_t>(p), k1, k2) == ref.to_uint());
      REQUIRE(tables.decrypt(static_cast<std::uint8_t>(ref.to_uint()), k1, k2) == p);
    }
  }
}

TEST_CASE("message mode") {
  const auto zero = Seed10::parse("0000000000");
  CHECK(encrypt_message({}, zero, zero).empty());
  const std::vector<std::uint8_t> one{0x00};
  CHECK(encrypt_message(one, zero, zero) == std::vector<std::uint8_t>{0xf0});

  const auto a = Seed10::parse("1010000010"), b = Seed10::parse("0111010011");
  const std::vector<std::uint8_t> twin{0x41, 0x41};
  const auto c = encrypt_message(twin, a, b);
  CHECK(c[0] == c[1]);

  std::vector<std::uint8_t> data(1000);
  std::mt19937 rng(11);
  for (auto& x : data) x = static_cast<std::uint8_t>(rng());
  const auto enc = encrypt_message(data, a, b);
  CHECK(enc.size() == data.size());
  CHECK(decrypt_message(enc, a, b) == data);
}
