#include "d3f/idx.hpp"
#include "d3f/errors.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace d3f::idx {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
           (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t value) {
    out.push_back(std::uint8_t(value >> 24));
    out.push_back(std::uint8_t(value >> 16));
    out.push_back(std::uint8_t(value >> 8));
    out.push_back(std::uint8_t(value));
}

void require_length(std::size_t present, std::size_t expected, const char* what) {
    if (present != expected) {
        throw LengthError(std::string(what) + ": expected " + std::to_string(expected) +
                          " bytes, got " + std::to_string(present));
    }
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    // 16+MAX_WBITS: accept the gzip wrapper.
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) {
        throw FormatError("gzip: inflateInit2 failed");
    }
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> buffer(1 << 20);
    zs.next_in = const_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buffer.data();
        zs.avail_out = static_cast<uInt>(buffer.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw FormatError("gzip: corrupt stream (zlib rc " + std::to_string(rc) + ")");
        }
        out.insert(out.end(), buffer.data(), buffer.data() + (buffer.size() - zs.avail_out));
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            throw FormatError("gzip: truncated stream");
        }
    }
    inflateEnd(&zs);
    return out;
}

} // namespace

RawImages parse_idx_images(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 16) {
        throw LengthError("image stream: expected at least 16 header bytes, got " +
                          std::to_string(bytes.size()));
    }
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != IMAGE_MAGIC) {
        throw FormatError("image stream: magic " + std::to_string(magic) + ", expected " +
                          std::to_string(IMAGE_MAGIC));
    }
    const std::uint32_t count = read_be32(bytes, 4);
    const std::uint32_t rows = read_be32(bytes, 8);
    const std::uint32_t cols = read_be32(bytes, 12);
    if (rows != IMAGE_ROWS || cols != IMAGE_COLS) {
        throw FormatError("image stream: grid " + std::to_string(rows) + "x" +
                          std::to_string(cols) + ", expected " + std::to_string(IMAGE_ROWS) +
                          "x" + std::to_string(IMAGE_COLS));
    }
    require_length(bytes.size(), 16 + std::size_t(count) * PIXELS_PER_IMAGE, "image stream");
    RawImages result;
    result.count = count;
    result.pixels.assign(bytes.begin() + 16, bytes.end());
    return result;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8) {
        throw LengthError("label stream: expected at least 8 header bytes, got " +
                          std::to_string(bytes.size()));
    }
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != LABEL_MAGIC) {
        throw FormatError("label stream: magic " + std::to_string(magic) + ", expected " +
                          std::to_string(LABEL_MAGIC));
    }
    const std::uint32_t count = read_be32(bytes, 4);
    require_length(bytes.size(), 8 + std::size_t(count), "label stream");
    std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.end());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 9) {
            throw RangeError("label stream: byte " + std::to_string(labels[i]) + " at index " +
                             std::to_string(i) + " is not a digit");
        }
    }
    return labels;
}

std::vector<std::uint8_t> serialize_idx_images(const RawImages& images) {
    if (images.pixels.size() != images.count * PIXELS_PER_IMAGE) {
        throw ConsistencyError("serialize images: " + std::to_string(images.pixels.size()) +
                               " pixel bytes for " + std::to_string(images.count) + " images");
    }
    std::vector<std::uint8_t> out;
    out.reserve(16 + images.pixels.size());
    write_be32(out, IMAGE_MAGIC);
    write_be32(out, static_cast<std::uint32_t>(images.count));
    write_be32(out, IMAGE_ROWS);
    write_be32(out, IMAGE_COLS);
    out.insert(out.end(), images.pixels.begin(), images.pixels.end());
    return out;
}

std::vector<std::uint8_t> serialize_idx_labels(std::span<const std::uint8_t> labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 9) {
            throw RangeError("serialize labels: byte " + std::to_string(labels[i]) +
                             " at index " + std::to_string(i) + " is not a digit");
        }
    }
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    write_be32(out, LABEL_MAGIC);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
        return gunzip(bytes);
    }
    return bytes;
}

} // namespace d3f::idx
