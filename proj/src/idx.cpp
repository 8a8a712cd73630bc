#include "mnet/idx.hpp"

#include "mnet/errors.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace mnet::idx {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    if (offset + 4 > bytes.size()) throw DataError("idx: truncated header");
    return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
           (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    // 16+MAX_WBITS: gzip wrapper
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw DataError("idx: inflateInit failed");
    std::vector<std::uint8_t> out;
    std::uint8_t buf[1 << 16];
    zs.next_in = const_cast<std::uint8_t*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf;
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw DataError("idx: gzip stream corrupt");
        }
        out.insert(out.end(), buf, buf + (sizeof(buf) - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

} // namespace

std::vector<Image> parse_idx_images(std::span<const std::uint8_t> bytes) {
    if (read_be32(bytes, 0) != kImageMagic) throw DataError("idx: malformed image magic");
    const std::size_t count = read_be32(bytes, 4);
    const std::size_t rows = read_be32(bytes, 8);
    const std::size_t cols = read_be32(bytes, 12);
    if (count > 0 && (rows == 0 || cols == 0)) throw DataError("idx: zero-dimension header");
    const std::size_t expected = 16 + count * rows * cols;
    if (bytes.size() != expected)
        throw DataError("idx: truncated payload: have " + std::to_string(bytes.size()) +
                        " bytes, expected " + std::to_string(expected));
    std::vector<Image> images(count);
    std::size_t p = 16;
    for (Image& img : images) {
        img.height = static_cast<int>(rows);
        img.width = static_cast<int>(cols);
        img.pixels.resize(rows * cols);
        for (double& px : img.pixels) px = bytes[p++] / 255.0;
    }
    return images;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    if (read_be32(bytes, 0) != kLabelMagic) throw DataError("idx: malformed label magic");
    const std::size_t count = read_be32(bytes, 4);
    if (bytes.size() != 8 + count)
        throw DataError("idx: truncated label payload");
    std::vector<int> labels(count);
    for (std::size_t i = 0; i < count; ++i) labels[i] = bytes[8 + i];
    return labels;
}

std::vector<std::uint8_t> serialize_idx_images(const std::vector<Image>& images) {
    std::vector<std::uint8_t> out;
    write_be32(out, kImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.size()));
    const std::uint32_t rows = images.empty() ? 0 : static_cast<std::uint32_t>(images.front().height);
    const std::uint32_t cols = images.empty() ? 0 : static_cast<std::uint32_t>(images.front().width);
    write_be32(out, rows);
    write_be32(out, cols);
    for (const Image& img : images)
        for (double px : img.pixels)
            out.push_back(static_cast<std::uint8_t>(std::lround(px * 255.0)));
    return out;
}

std::vector<std::uint8_t> serialize_idx_labels(const std::vector<int>& labels) {
    std::vector<std::uint8_t> out;
    write_be32(out, kLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int label : labels) out.push_back(static_cast<std::uint8_t>(label));
    return out;
}

std::vector<std::uint8_t> read_file_maybe_gzip(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) return gunzip(bytes);
    return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("short write to " + path);
}

Dataset load_dataset(const std::string& images_path, const std::string& labels_path,
                     int n_classes, std::string split_name) {
    auto images = parse_idx_images(read_file_maybe_gzip(images_path));
    auto labels = parse_idx_labels(read_file_maybe_gzip(labels_path));
    return Dataset(std::move(images), std::move(labels), n_classes, std::move(split_name));
}

void save_dataset(const Dataset& dataset, const std::string& images_path,
                  const std::string& labels_path) {
    auto img_bytes = serialize_idx_images(dataset.images());
    auto lbl_bytes = serialize_idx_labels(dataset.labels());
    write_file(images_path, img_bytes);
    write_file(labels_path, lbl_bytes);
}

} // namespace mnet::idx
