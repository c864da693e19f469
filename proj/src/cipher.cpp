#include "duokey/cipher.hpp"

namespace duokey::cipher {
namespace {

using Steps = std::vector<std::pair<std::string, std::string>>;

class Recorder {
 public:
  explicit Recorder(Steps* steps) : steps_(steps) {}

  void bits(const std::string& name, const BitVec& v) {
    if (steps_) steps_->emplace_back(name, v.str());
  }
  void number(const std::string& name, unsigned value) {
    if (steps_) steps_->emplace_back(name, std::to_string(value));
  }

 private:
  Steps* steps_;
};

std::string array(int n) { return "array" + std::to_string(n); }

// Pairs bit (a, b) of e into a 2-bit row/column selector (1-based positions).
unsigned select2(const BitVec& e, std::size_t a, std::size_t b) {
  return (static_cast<unsigned>(e.at(a)) << 1) | static_cast<unsigned>(e.at(b));
}

// One round. `first_array` is the number of the expanded-half array (5 or
// 16); the remaining intermediates are numbered relative to it.
BitVec round_impl(const BitVec& half, const RoundKey8& key, const CipherParams& params,
                  Recorder& rec, int first_array, int round) {
  if (half.size() != 4) {
    throw LengthMismatch("round function takes a 4-bit half, got " +
                         std::to_string(half.size()));
  }
  const int a = first_array;
  const int bin = round == 1 ? 1 : 5;
  const int var = round == 1 ? 1 : 3;

  const BitVec expanded = permute(half, params.ep());
  rec.bits(array(a), expanded);
  rec.bits("key" + std::to_string(round), key.bits());
  const BitVec mixed = xor_bits(expanded, key.bits());
  rec.bits(array(a + 1), mixed);

  const unsigned row1 = select2(mixed, 1, 4);
  const unsigned col1 = select2(mixed, 2, 3);
  rec.bits(array(a + 2), BitVec::from_uint(row1, 2));
  rec.bits(array(a + 3), BitVec::from_uint(col1, 2));
  rec.number("bin" + std::to_string(bin), row1);
  rec.number("bin" + std::to_string(bin + 1), col1);
  const unsigned out1 = params.s1().lookup(row1, col1);
  rec.number("var" + std::to_string(var), out1);
  const BitVec s1_bits = BitVec::from_uint(out1, 2);
  rec.bits(array(a + 4), s1_bits);

  const unsigned row2 = select2(mixed, 5, 8);
  const unsigned col2 = select2(mixed, 6, 7);
  rec.bits(array(a + 5), BitVec::from_uint(row2, 2));
  rec.bits(array(a + 6), BitVec::from_uint(col2, 2));
  rec.number("bin" + std::to_string(bin + 2), row2);
  rec.number("bin" + std::to_string(bin + 3), col2);
  const unsigned out2 = params.s2().lookup(row2, col2);
  rec.number("var" + std::to_string(var + 1), out2);
  const BitVec s2_bits = BitVec::from_uint(out2, 2);
  rec.bits(array(a + 7), s2_bits);

  const BitVec merged = concat(s1_bits, s2_bits);
  rec.bits(array(a + 8), merged);
  const BitVec result = permute(merged, params.p4());
  rec.bits(array(a + 9), result);
  return result;
}

Block8 run_network(const Block8& input, const RoundKey8& first, const RoundKey8& second,
                   const CipherParams& params, Steps* steps) {
  Recorder rec(steps);
  rec.bits(array(1), input.bits());
  const BitVec permuted = permute(input.bits(), params.ip());
  rec.bits(array(2), permuted);
  auto [left, right] = split(permuted);
  rec.bits(array(3), left);
  rec.bits(array(4), right);

  const BitVec f1 = round_impl(right, first, params, rec, 5, 1);
  const BitVec a = xor_bits(f1, left);
  rec.bits(array(15), a);

  const BitVec f2 = round_impl(a, second, params, rec, 16, 2);
  const BitVec b = xor_bits(f2, right);
  rec.bits(array(26), b);

  const BitVec merged = concat(b, a);
  rec.bits(array(27), merged);
  Block8 out(permute(merged, params.ip_inv()));
  rec.bits(array(28), out.bits());
  return out;
}

void require_width(const PermTable& t, std::size_t in, std::size_t out, const char* name) {
  if (t.input_width() != in || t.output_width() != out) {
    throw InvalidArgument(std::string(name) + " must map " + std::to_string(in) + " to " +
                          std::to_string(out) + " bits");
  }
}

}  // namespace

SBox::SBox(const Grid& cells) : cells_(cells) {
  for (const auto& row : cells_) {
    for (auto cell : row) {
      if (cell > 3) throw InvalidArgument("S-box cells must be in 0..3");
    }
  }
}

CipherParams::CipherParams(PermTable p10, PermTable p8, PermTable ip, PermTable ip_inv,
                           PermTable ep, PermTable p4, SBox s1, SBox s2)
    : p10_(std::move(p10)),
      p8_(std::move(p8)),
      ip_(std::move(ip)),
      ip_inv_(std::move(ip_inv)),
      ep_(std::move(ep)),
      p4_(std::move(p4)),
      s1_(s1),
      s2_(s2) {
  require_width(p10_, 10, 10, "P10");
  require_width(p8_, 10, 8, "P8");
  require_width(ip_, 8, 8, "IP");
  require_width(ip_inv_, 8, 8, "IP^-1");
  require_width(ep_, 4, 8, "E/P");
  require_width(p4_, 4, 4, "P4");
  if (!ip_.bijective() || !p4_.bijective()) {
    throw InvalidArgument("IP and P4 must be bijective");
  }
  if (!(invert_table(ip_) == ip_inv_)) {
    throw InvalidArgument("IP^-1 is not the inverse of IP");
  }
}

const CipherParams& CipherParams::standard() {
  static const CipherParams params(
      PermTable({3, 5, 2, 7, 4, 10, 1, 9, 8, 6}, 10),
      PermTable({6, 3, 7, 4, 8, 5, 10, 9}, 10),
      PermTable({2, 6, 3, 1, 4, 8, 5, 7}, 8),
      PermTable({4, 1, 3, 5, 7, 2, 8, 6}, 8),
      PermTable({4, 1, 2, 3, 2, 3, 4, 1}, 4),
      PermTable({2, 4, 3, 1}, 4),
      SBox({{{1, 0, 3, 2}, {3, 2, 1, 0}, {0, 2, 1, 3}, {3, 1, 3, 2}}}),
      SBox({{{0, 1, 2, 3}, {2, 0, 1, 3}, {3, 0, 1, 0}, {2, 1, 0, 3}}}));
  return params;
}

RoundKey8 derive_round_key(const Seed10& seed, const CipherParams& params) {
  auto [left, right] = split(permute(seed.bits(), params.p10()));
  return RoundKey8(permute(concat(rotate_left(left, 1), rotate_left(right, 1)), params.p8()));
}

BitVec round_function(const BitVec& half, const RoundKey8& key, const CipherParams& params) {
  Recorder rec(nullptr);
  return round_impl(half, key, params, rec, 5, 1);
}

Block8 encrypt_block(const Block8& plain, const RoundKey8& k1, const RoundKey8& k2,
                     const CipherParams& params) {
  return run_network(plain, k1, k2, params, nullptr);
}

Block8 decrypt_block(const Block8& cipher, const RoundKey8& k1, const RoundKey8& k2,
                     const CipherParams& params) {
  return run_network(cipher, k2, k1, params, nullptr);
}

NetworkTrace trace_encrypt(const Block8& plain, const RoundKey8& k1, const RoundKey8& k2,
                           const CipherParams& params) {
  Steps steps;
  Block8 out = run_network(plain, k1, k2, params, &steps);
  return {std::move(steps), std::move(out)};
}

NetworkTrace trace_decrypt(const Block8& cipher, const RoundKey8& k1, const RoundKey8& k2,
                           const CipherParams& params) {
  Steps steps;
  Block8 out = run_network(cipher, k2, k1, params, &steps);
  return {std::move(steps), std::move(out)};
}

NetworkTables::NetworkTables(const CipherParams& params) {
  for (unsigned v = 0; v < 256; ++v) {
    const BitVec bits = BitVec::from_uint(v, 8);
    ip_[v] = static_cast<std::uint8_t>(permute(bits, params.ip()).to_uint());
    ip_inv_[v] = static_cast<std::uint8_t>(permute(bits, params.ip_inv()).to_uint());
  }
  for (unsigned half = 0; half < 16; ++half) {
    const BitVec half_bits = BitVec::from_uint(half, 4);
    for (unsigned k = 0; k < 256; ++k) {
      round_[half][k] = static_cast<std::uint8_t>(
          round_function(half_bits, RoundKey8::from_uint(k), params).to_uint());
    }
  }
}

namespace {

std::array<std::uint8_t, 256> codebook(const Seed10& seed_a, const Seed10& seed_b,
                                       const CipherParams& params, bool decrypt) {
  const RoundKey8 k1 = derive_round_key(seed_a, params);
  const RoundKey8 k2 = derive_round_key(seed_b, params);
  std::array<std::uint8_t, 256> table{};
  for (unsigned v = 0; v < 256; ++v) {
    const Block8 in = Block8::from_uint(v);
    const Block8 out = decrypt ? decrypt_block(in, k1, k2, params) : encrypt_block(in, k1, k2, params);
    table[v] = static_cast<std::uint8_t>(out.to_uint());
  }
  return table;
}

std::vector<std::uint8_t> apply(std::span<const std::uint8_t> data,
                                const std::array<std::uint8_t, 256>& table) {
  std::vector<std::uint8_t> out;
  out.reserve(data.size());
  for (auto b : data) out.push_back(table[b]);
  return out;
}

}  // namespace

std::vector<std::uint8_t> encrypt_message(std::span<const std::uint8_t> data, const Seed10& seed_a,
                                          const Seed10& seed_b, const CipherParams& params) {
  return apply(data, codebook(seed_a, seed_b, params, false));
}

std::vector<std::uint8_t> decrypt_message(std::span<const std::uint8_t> data, const Seed10& seed_a,
                                          const Seed10& seed_b, const CipherParams& params) {
  return apply(data, codebook(seed_a, seed_b, params, true));
}

}  // namespace duokey::cipher
