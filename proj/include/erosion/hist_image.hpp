#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "erosion/byte_stats.hpp"

namespace erosion {

inline constexpr std::size_t kImageSide = 16;

/// 16x16 greyscale image of a byte histogram: pixel (r, c) holds the
/// max-normalized count of byte value 16 r + c, so 0x00 is top-left.
struct HistImage {
    std::array<std::uint8_t, kImageSide * kImageSide> pixels{};
    std::uint64_t source_total = 0;  // not serialized

    [[nodiscard]] std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * kImageSide + col]; }

    /// Compares pixels only; `source_total` is metadata.
    bool operator==(const HistImage& other) const noexcept { return pixels == other.pixels; }
};

/// pixel[b] = round_half_up(255 * counts[b] / max_count), with max_count
/// taken as 1 for an empty histogram (which then maps to all zeros).
[[nodiscard]] HistImage encode(const ByteHistogram& hist) noexcept;

/// Binary PGM: "P5\n16 16\n255\n" followed by 256 row-major bytes.
/// Error(IoFailure) when the file cannot be written.
void write_image(const HistImage& image, const std::filesystem::path& path);

/// Error(IoFailure) if unreadable, Error(MalformedImage) unless the file is a
/// binary 16x16 PGM with maxval 255.
[[nodiscard]] HistImage read_image(const std::filesystem::path& path);

}  // namespace erosion
