#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace duokey {

// Lowercase, two digits per byte, no separators.
std::string to_hex(std::span<const std::uint8_t> bytes);
// Accepts either case. Throws InvalidArgument on odd length or non-hex digits.
std::vector<std::uint8_t> from_hex(std::string_view text);

}  // namespace duokey
