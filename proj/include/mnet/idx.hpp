#pragma once

#include "mnet/dataset.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mnet::idx {

// IDX binary format, bit-exact: big-endian 32-bit magic (0x00000803 images,
// 0x00000801 labels) and dimension header, unsigned-byte payload.
// Byte b maps to intensity b/255.0 on parse; serialization rounds back.

inline constexpr std::uint32_t kImageMagic = 0x00000803;
inline constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<Image> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_idx_images(const std::vector<Image>& images);
std::vector<std::uint8_t> serialize_idx_labels(const std::vector<int>& labels);

// Reads a whole file; gzip-compressed IDX (magic 0x1f 0x8b) is inflated
// transparently.
std::vector<std::uint8_t> read_file_maybe_gzip(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

// Convenience: image file + label file -> Dataset.
Dataset load_dataset(const std::string& images_path, const std::string& labels_path,
                     int n_classes, std::string split_name = "");

void save_dataset(const Dataset& dataset, const std::string& images_path,
                  const std::string& labels_path);

} // namespace mnet::idx
