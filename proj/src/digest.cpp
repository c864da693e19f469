#include "duokey/digest.hpp"

#include <openssl/rand.h>
#include <openssl/sha.h>

#include <array>
#include <vector>

#include "duokey/error.hpp"
#include "duokey/hex.hpp"

namespace duokey {

std::string sha256_hex(std::string_view data) {
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> md{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md.data());
  return to_hex(md);
}

std::string random_token_hex(std::size_t bytes) {
  std::vector<std::uint8_t> buf(bytes);
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
    throw Error("system random generator failed");
  }
  return to_hex(buf);
}

}  // namespace duokey
