#pragma once

#include "d3f/idx.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace d3f {

// The two hypotheses of the detection problem. Under h0 the image is a digit
// zero; under h1 it is any of the digits 1..9.
enum class Hypothesis : int { h0 = 0, h1 = 1 };

inline constexpr int index(Hypothesis h) { return static_cast<int>(h); }
inline constexpr Hypothesis other(Hypothesis h) {
    return h == Hypothesis::h0 ? Hypothesis::h1 : Hypothesis::h0;
}
inline const char* name(Hypothesis h) { return h == Hypothesis::h0 ? "h0" : "h1"; }

enum class Split : int { train = 0, test = 1 };

inline const char* name(Split s) { return s == Split::train ? "train" : "test"; }

// One image with its binary ground truth. Pixels are scaled to [0, 1] by
// dividing the raw byte by 255, so 0 maps to 0 and 255 maps to exactly 1.
struct LabeledImage {
    std::array<float, idx::PIXELS_PER_IMAGE> pixels;
    std::uint8_t digit = 0;
    Hypothesis hypothesis = Hypothesis::h0;
    Split origin = Split::train;
};

struct DatasetSplit {
    std::vector<LabeledImage> images;
    std::array<std::size_t, 2> counts{0, 0}; // indexed by Hypothesis

    std::size_t size() const { return images.size(); }
    std::size_t count(Hypothesis h) const { return counts[std::size_t(index(h))]; }
};

// Pair raw images with labels and relabel digits into the binary task.
// Throws ConsistencyError when the two inputs disagree in count.
DatasetSplit build_binary_task(const idx::RawImages& images,
                               std::span<const std::uint8_t> labels, Split origin);

// Convenience: read + parse + relabel in one step.
DatasetSplit load_split(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path, Split origin);

// Concatenate two splits, preserving per-hypothesis counts.
DatasetSplit concat(const DatasetSplit& a, const DatasetSplit& b);

} // namespace d3f
