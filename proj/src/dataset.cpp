#include "d3f/dataset.hpp"
#include "d3f/errors.hpp"

namespace d3f {

DatasetSplit build_binary_task(const idx::RawImages& images,
                               std::span<const std::uint8_t> labels, Split origin) {
    if (images.count != labels.size()) {
        throw ConsistencyError("binary task: " + std::to_string(images.count) + " images vs " +
                               std::to_string(labels.size()) + " labels");
    }
    DatasetSplit split;
    split.images.resize(images.count);
    for (std::size_t i = 0; i < images.count; ++i) {
        LabeledImage& img = split.images[i];
        const std::uint8_t* raw = images.pixels.data() + i * idx::PIXELS_PER_IMAGE;
        for (std::size_t p = 0; p < idx::PIXELS_PER_IMAGE; ++p) {
            img.pixels[p] = float(raw[p]) / 255.0f;
        }
        if (labels[i] > 9) {
            throw RangeError("binary task: label " + std::to_string(labels[i]) + " at index " +
                             std::to_string(i) + " is not a digit");
        }
        img.digit = labels[i];
        img.hypothesis = labels[i] == 0 ? Hypothesis::h0 : Hypothesis::h1;
        img.origin = origin;
        ++split.counts[std::size_t(index(img.hypothesis))];
    }
    return split;
}

DatasetSplit load_split(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path, Split origin) {
    const auto image_bytes = idx::read_file(images_path);
    const auto label_bytes = idx::read_file(labels_path);
    const auto images = idx::parse_idx_images(image_bytes);
    const auto labels = idx::parse_idx_labels(label_bytes);
    return build_binary_task(images, labels, origin);
}

DatasetSplit concat(const DatasetSplit& a, const DatasetSplit& b) {
    DatasetSplit out;
    out.images.reserve(a.images.size() + b.images.size());
    out.images.insert(out.images.end(), a.images.begin(), a.images.end());
    out.images.insert(out.images.end(), b.images.begin(), b.images.end());
    out.counts = {a.counts[0] + b.counts[0], a.counts[1] + b.counts[1]};
    return out;
}

} // namespace d3f
