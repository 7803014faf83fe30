#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace d3f::idx {

// IDX container constants (big-endian 32-bit magic, then dimension sizes).
inline constexpr std::uint32_t IMAGE_MAGIC = 2051;
inline constexpr std::uint32_t LABEL_MAGIC = 2049;
inline constexpr std::uint32_t IMAGE_ROWS = 28;
inline constexpr std::uint32_t IMAGE_COLS = 28;
inline constexpr std::size_t PIXELS_PER_IMAGE = IMAGE_ROWS * IMAGE_COLS;

// A parsed image file: `count` grayscale grids stored row-major, 784 bytes each.
struct RawImages {
    std::size_t count = 0;
    std::vector<std::uint8_t> pixels; // count * 784 bytes
};

// Parse an image stream. Throws FormatError on a wrong magic, LengthError when
// the byte count disagrees with the header (truncated or trailing bytes).
RawImages parse_idx_images(std::span<const std::uint8_t> bytes);

// Parse a label stream; every byte must be a digit 0..9 (RangeError otherwise).
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

// Inverse of the parsers; parse(serialize(x)) == x byte for byte.
std::vector<std::uint8_t> serialize_idx_images(const RawImages& images);
std::vector<std::uint8_t> serialize_idx_labels(std::span<const std::uint8_t> labels);

// Read a whole file into memory. Files whose first two bytes are the gzip
// signature (0x1f 0x8b) are inflated transparently.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

} // namespace d3f::idx
