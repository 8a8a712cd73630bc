#include "mnet/dataset.hpp"

#include "mnet/errors.hpp"
#include "mnet/rng.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace mnet {

Dataset::Dataset(std::vector<Image> images, std::vector<int> labels, int n_classes,
                 std::string split_name)
    : images_(std::move(images)),
      labels_(std::move(labels)),
      n_classes_(n_classes),
      split_name_(std::move(split_name)) {
    if (images_.size() != labels_.size())
        throw DimensionError("dataset: image count " + std::to_string(images_.size()) +
                             " != label count " + std::to_string(labels_.size()));
    if (n_classes_ <= 0) throw DimensionError("dataset: n_classes must be positive");
    for (int label : labels_)
        if (label < 0 || label >= n_classes_)
            throw DimensionError("dataset: label " + std::to_string(label) +
                                 " outside [0, " + std::to_string(n_classes_) + ")");
    if (!images_.empty()) {
        const int h = images_.front().height;
        const int w = images_.front().width;
        for (const Image& img : images_) {
            if (img.height != h || img.width != w)
                throw DimensionError("dataset: images must share identical dimensions");
            if (img.pixels.size() != static_cast<std::size_t>(h) * w)
                throw DimensionError("dataset: pixel buffer size mismatch");
        }
    }
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices, std::string split_name) const {
    std::vector<Image> images;
    std::vector<int> labels;
    images.reserve(indices.size());
    labels.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= images_.size())
            throw DimensionError("subset: index " + std::to_string(i) + " out of range");
        images.push_back(images_[i]);
        labels.push_back(labels_[i]);
    }
    return Dataset(std::move(images), std::move(labels), n_classes_, std::move(split_name));
}

SplitResult split(const Dataset& dataset, const SplitSpec& spec, const SplitSeed& seed) {
    const std::size_t total = spec.train_count + spec.validation_count + spec.test_count;
    if (total > dataset.size())
        throw ConfigError("split: spec total " + std::to_string(total) +
                          " exceeds dataset size " + std::to_string(dataset.size()));

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!seed.is_canonical()) {
        Rng rng = make_rng(*seed.seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    auto take = [&](std::size_t offset, std::size_t count) {
        return std::vector<std::size_t>(order.begin() + offset, order.begin() + offset + count);
    };
    SplitResult out;
    out.train = dataset.subset(take(0, spec.train_count), "train");
    out.validation = dataset.subset(take(spec.train_count, spec.validation_count), "validation");
    out.test =
        dataset.subset(take(spec.train_count + spec.validation_count, spec.test_count), "test");
    return out;
}

} // namespace mnet
