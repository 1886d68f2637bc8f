#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace altcanvas {

using Bytes = std::vector<std::uint8_t>;

// Lower-case hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> data);
std::string sha256_hex(std::string_view data);

std::string base64_encode(std::span<const std::uint8_t> data);
// Throws std::invalid_argument on malformed input.
Bytes base64_decode(std::string_view text);

} // namespace altcanvas
