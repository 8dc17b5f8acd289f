#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace erosion {

using Sha256Digest = std::array<std::uint8_t, 32>;

[[nodiscard]] std::string to_hex(std::span<const std::uint8_t> bytes);

/// Lowercase or uppercase hex, even length. Error(InvalidArgument) otherwise.
[[nodiscard]] std::vector<std::uint8_t> from_hex(std::string_view hex);

[[nodiscard]] Sha256Digest sha256(std::span<const std::byte> data);

inline Sha256Digest sha256(std::span<const std::uint8_t> data) { return sha256(std::as_bytes(data)); }

}  // namespace erosion
