#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mnet {

// Grayscale image, row-major, intensities in [0,1].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;

    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
    double& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
};

// Immutable after construction; safe to share across workers.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Image> images, std::vector<int> labels, int n_classes,
            std::string split_name = "");

    const std::vector<Image>& images() const { return images_; }
    const std::vector<int>& labels() const { return labels_; }
    int n_classes() const { return n_classes_; }
    const std::string& split_name() const { return split_name_; }
    std::size_t size() const { return images_.size(); }
    bool empty() const { return images_.empty(); }

    int image_height() const { return images_.empty() ? 0 : images_.front().height; }
    int image_width() const { return images_.empty() ? 0 : images_.front().width; }

    Dataset subset(const std::vector<std::size_t>& indices, std::string split_name) const;

private:
    std::vector<Image> images_;
    std::vector<int> labels_;
    int n_classes_ = 0;
    std::string split_name_;
};

struct SplitSpec {
    std::size_t train_count = 0;
    std::size_t validation_count = 0;
    std::size_t test_count = 0;
};

// Seed for split(): either the positional sentinel ("canonical") or a
// shuffling seed.
struct SplitSeed {
    static SplitSeed canonical() { return SplitSeed{std::nullopt}; }
    static SplitSeed shuffled(std::uint64_t seed) { return SplitSeed{seed}; }
    std::optional<std::uint64_t> seed;
    bool is_canonical() const { return !seed.has_value(); }
};

struct SplitResult {
    Dataset train;
    Dataset validation;
    Dataset test;
};

// Partition into disjoint train/validation/test. Canonical seed = positional
// (first train_count, next validation_count, next test_count); otherwise a
// seeded shuffle assigns indices. Deterministic for a fixed seed.
SplitResult split(const Dataset& dataset, const SplitSpec& spec, const SplitSeed& seed);

} // namespace mnet
