#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "d3f/dataset.hpp"
#include "d3f/errors.hpp"
#include "d3f/idx.hpp"
#include "test_util.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace d3f;

namespace {

idx::RawImages make_images(std::size_t count, std::uint32_t seed) {
    idx::RawImages images;
    images.count = count;
    images.pixels.resize(count * idx::PIXELS_PER_IMAGE);
    std::mt19937 rng(seed);
    for (auto& b : images.pixels) {
        b = std::uint8_t(rng() & 0xff);
    }
    return images;
}

std::vector<std::uint8_t> gzip_compress(const std::vector<std::uint8_t>& raw) {
    z_stream zs{};
    REQUIRE(deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8,
                         Z_DEFAULT_STRATEGY) == Z_OK);
    std::vector<std::uint8_t> out(deflateBound(&zs, uLong(raw.size())) + 64);
    zs.next_in = const_cast<Bytef*>(raw.data());
    zs.avail_in = uInt(raw.size());
    zs.next_out = out.data();
    zs.avail_out = uInt(out.size());
    REQUIRE(deflate(&zs, Z_FINISH) == Z_STREAM_END);
    out.resize(out.size() - zs.avail_out);
    deflateEnd(&zs);
    return out;
}

std::string thrown_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("image container round trip preserves every byte") {
    const idx::RawImages images = make_images(3, 7);
    const std::vector<std::uint8_t> bytes = idx::serialize_idx_images(images);
    CHECK(bytes.size() == 16 + 3 * idx::PIXELS_PER_IMAGE);
    // big-endian magic 2051 = 0x00000803
    CHECK(bytes[0] == 0x00);
    CHECK(bytes[1] == 0x00);
    CHECK(bytes[2] == 0x08);
    CHECK(bytes[3] == 0x03);

    const idx::RawImages back = idx::parse_idx_images(bytes);
    CHECK(back.count == images.count);
    CHECK(back.pixels == images.pixels);
}

TEST_CASE("label container round trip") {
    const std::vector<std::uint8_t> labels{0, 5, 9, 9, 1};
    const std::vector<std::uint8_t> bytes = idx::serialize_idx_labels(labels);
    CHECK(bytes.size() == 8 + labels.size());
    CHECK(bytes[2] == 0x08);
    CHECK(bytes[3] == 0x01); // magic 2049 = 0x00000801
    CHECK(idx::parse_idx_labels(bytes) == labels);
}

TEST_CASE("empty containers round trip") {
    const idx::RawImages none = make_images(0, 1);
    CHECK(idx::parse_idx_images(idx::serialize_idx_images(none)).count == 0);
    CHECK(idx::parse_idx_labels(idx::serialize_idx_labels(std::vector<std::uint8_t>{})).empty());
}

TEST_CASE("wrong magic is rejected and both numbers are named") {
    // Long enough that the image parser gets past its header-length check
    // and fails on the magic number itself.
    const std::vector<std::uint8_t> labels =
        idx::serialize_idx_labels(std::vector<std::uint8_t>(16, 1));
    CHECK_THROWS_AS((void)idx::parse_idx_images(labels), FormatError);
    const std::string msg =
        thrown_message([&] { (void)idx::parse_idx_images(labels); });
    CHECK(msg.find("2051") != std::string::npos);
    CHECK(msg.find("2049") != std::string::npos);

    const std::vector<std::uint8_t> images = idx::serialize_idx_images(make_images(1, 2));
    CHECK_THROWS_AS((void)idx::parse_idx_labels(images), FormatError);
}

TEST_CASE("truncated and padded streams are rejected with the exact byte counts") {
    std::vector<std::uint8_t> bytes = idx::serialize_idx_images(make_images(2, 3));
    const std::size_t full = bytes.size();

    std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 10);
    CHECK_THROWS_AS((void)idx::parse_idx_images(truncated), LengthError);
    const std::string msg =
        thrown_message([&] { (void)idx::parse_idx_images(truncated); });
    CHECK(msg.find(std::to_string(full)) != std::string::npos);
    CHECK(msg.find(std::to_string(full - 10)) != std::string::npos);

    std::vector<std::uint8_t> padded = bytes;
    padded.push_back(0);
    CHECK_THROWS_AS((void)idx::parse_idx_images(padded), LengthError);

    CHECK_THROWS_AS((void)idx::parse_idx_images(std::vector<std::uint8_t>{0, 0, 8}),
                    LengthError);
    std::vector<std::uint8_t> labels = idx::serialize_idx_labels(std::vector<std::uint8_t>{1, 2, 3});
    labels.pop_back();
    CHECK_THROWS_AS((void)idx::parse_idx_labels(labels), LengthError);
}

TEST_CASE("images must be 28x28") {
    // Hand-build a header advertising 27x28.
    std::vector<std::uint8_t> bytes(16 + 27 * 28, 0);
    bytes[2] = 0x08;
    bytes[3] = 0x03;
    bytes[7] = 1;  // count 1
    bytes[11] = 27; // rows
    bytes[15] = 28; // cols
    CHECK_THROWS_AS((void)idx::parse_idx_images(bytes), FormatError);
}

TEST_CASE("label bytes above 9 are rejected with their index") {
    std::vector<std::uint8_t> bytes = idx::serialize_idx_labels(std::vector<std::uint8_t>{3, 1, 4});
    bytes[8 + 2] = 17;
    CHECK_THROWS_AS((void)idx::parse_idx_labels(bytes), RangeError);
    const std::string msg =
        thrown_message([&] { (void)idx::parse_idx_labels(bytes); });
    CHECK(msg.find("17") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
}

TEST_CASE("read_file inflates gzip transparently and passes plain bytes through") {
    testutil::temp_dir tmp("d3f-ingest");
    const std::vector<std::uint8_t> raw = idx::serialize_idx_images(make_images(4, 11));

    testutil::write_bytes(tmp.path() / "plain.idx", raw);
    CHECK(idx::read_file(tmp.path() / "plain.idx") == raw);

    testutil::write_bytes(tmp.path() / "packed.idx.gz", gzip_compress(raw));
    CHECK(idx::read_file(tmp.path() / "packed.idx.gz") == raw);

    CHECK_THROWS_AS((void)idx::read_file(tmp.path() / "missing.idx"), IoError);

    // Corrupt gzip payload: signature intact, body damaged.
    std::vector<std::uint8_t> broken = gzip_compress(raw);
    broken.resize(broken.size() / 2);
    testutil::write_bytes(tmp.path() / "broken.idx.gz", broken);
    CHECK_THROWS_AS((void)idx::read_file(tmp.path() / "broken.idx.gz"), FormatError);
}

TEST_CASE("binary task relabeling, counts, and pixel scaling") {
    idx::RawImages images = make_images(5, 23);
    // Pin a few pixels to the scaling endpoints.
    images.pixels[0] = 0;
    images.pixels[1] = 255;
    images.pixels[2] = 128;
    const std::vector<std::uint8_t> labels{0, 7, 0, 9, 1};

    const DatasetSplit split = build_binary_task(images, labels, Split::test);
    REQUIRE(split.size() == 5);
    CHECK(split.count(Hypothesis::h0) == 2);
    CHECK(split.count(Hypothesis::h1) == 3);

    CHECK(split.images[0].hypothesis == Hypothesis::h0);
    CHECK(split.images[1].hypothesis == Hypothesis::h1);
    CHECK(split.images[3].digit == 9);
    CHECK(split.images[0].origin == Split::test);

    CHECK(split.images[0].pixels[0] == 0.0f);
    CHECK(split.images[0].pixels[1] == 1.0f);
    CHECK(split.images[0].pixels[2] == doctest::Approx(128.0 / 255.0).epsilon(1e-7));
    for (const auto& img : split.images) {
        for (float p : img.pixels) {
            CHECK(p >= 0.0f);
            CHECK(p <= 1.0f);
        }
    }
}

TEST_CASE("count mismatch between images and labels is a consistency error") {
    const idx::RawImages images = make_images(3, 5);
    const std::vector<std::uint8_t> labels{0, 1};
    CHECK_THROWS_AS((void)build_binary_task(images, labels, Split::train),
                    ConsistencyError);
}

TEST_CASE("concat preserves order and per-class counts") {
    const idx::RawImages ia = make_images(2, 31);
    const idx::RawImages ib = make_images(3, 37);
    const DatasetSplit a = build_binary_task(ia, std::vector<std::uint8_t>{0, 4}, Split::train);
    const DatasetSplit b =
        build_binary_task(ib, std::vector<std::uint8_t>{0, 0, 8}, Split::test);
    const DatasetSplit both = concat(a, b);
    CHECK(both.size() == 5);
    CHECK(both.count(Hypothesis::h0) == 3);
    CHECK(both.count(Hypothesis::h1) == 2);
    CHECK(both.images[0].origin == Split::train);
    CHECK(both.images[4].origin == Split::test);
    CHECK(both.images[2].pixels == b.images[0].pixels);
}

TEST_CASE("bundled digit dataset has the canonical shape") {
    REQUIRE_MESSAGE(testutil::mnist_available(),
                    "dataset not found under " << testutil::mnist_dir().string());
    const auto dir = testutil::mnist_dir();
    auto find = [&](const std::string& stem) {
        const auto plain = dir / stem;
        return std::filesystem::exists(plain) ? plain
                                              : dir / (stem + ".gz");
    };

    const auto train_labels =
        idx::parse_idx_labels(idx::read_file(find("train-labels-idx1-ubyte")));
    const auto test_labels =
        idx::parse_idx_labels(idx::read_file(find("t10k-labels-idx1-ubyte")));
    REQUIRE(train_labels.size() == 60000);
    REQUIRE(test_labels.size() == 10000);
    CHECK(std::count(train_labels.begin(), train_labels.end(), 0) == 5923);
    CHECK(std::count(test_labels.begin(), test_labels.end(), 0) == 980);

    const auto test_images = idx::parse_idx_images(idx::read_file(find("t10k-images-idx3-ubyte")));
    REQUIRE(test_images.count == 10000);
    CHECK(test_images.pixels.size() == 10000 * idx::PIXELS_PER_IMAGE);
}
