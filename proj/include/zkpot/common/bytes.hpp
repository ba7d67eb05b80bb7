#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zkpot {

using Bytes = std::vector<std::uint8_t>;
using Digest32 = std::array<std::uint8_t, 32>;

std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

}  // namespace zkpot
