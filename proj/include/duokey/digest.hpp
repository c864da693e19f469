#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace duokey {

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

// Hex string of `bytes` bytes from the OpenSSL CSPRNG.
std::string random_token_hex(std::size_t bytes = 16);

}  // namespace duokey
