#include "mnet/idx.hpp"

#include "mnet/errors.hpp"
#include "mnet/rng.hpp"

#include <doctest.h>
#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <vector>

using namespace mnet;

namespace {

std::vector<Image> random_images(std::size_t n, int h, int w, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<Image> images(n);
    for (Image& img : images) {
        img.height = h;
        img.width = w;
        img.pixels.resize(static_cast<std::size_t>(h) * w);
        for (double& p : img.pixels) p = byte(rng) / 255.0;
    }
    return images;
}

std::vector<std::uint8_t> gzip_compress(const std::vector<std::uint8_t>& raw) {
    z_stream zs{};
    REQUIRE(deflateInit2(&zs, Z_BEST_SPEED, Z_DEFLATED, 16 + MAX_WBITS, 8,
                         Z_DEFAULT_STRATEGY) == Z_OK);
    std::vector<std::uint8_t> out(deflateBound(&zs, raw.size()) + 32);
    zs.next_in = const_cast<Bytef*>(raw.data());
    zs.avail_in = static_cast<uInt>(raw.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    REQUIRE(deflate(&zs, Z_FINISH) == Z_STREAM_END);
    out.resize(out.size() - zs.avail_out);
    deflateEnd(&zs);
    return out;
}

} // namespace

TEST_CASE("image serialization round-trips byte-identically") {
    const auto images = random_images(7, 9, 11, 42);
    const auto bytes = idx::serialize_idx_images(images);
    // big-endian magic and dims up front
    CHECK(bytes[0] == 0x00);
    CHECK(bytes[1] == 0x00);
    CHECK(bytes[2] == 0x08);
    CHECK(bytes[3] == 0x03);
    const auto parsed = idx::parse_idx_images(bytes);
    REQUIRE(parsed.size() == images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        CHECK(parsed[i].height == 9);
        CHECK(parsed[i].width == 11);
        CHECK(parsed[i].pixels == images[i].pixels);
    }
    CHECK(idx::serialize_idx_images(parsed) == bytes);
}

TEST_CASE("label serialization round-trips") {
    const std::vector<int> labels{0, 1, 9, 3, 5, 255};
    const auto bytes = idx::serialize_idx_labels(labels);
    CHECK(bytes[2] == 0x08);
    CHECK(bytes[3] == 0x01);
    CHECK(idx::parse_idx_labels(bytes) == labels);
    CHECK(idx::serialize_idx_labels(idx::parse_idx_labels(bytes)) == bytes);
}

TEST_CASE("malformed inputs are rejected") {
    auto bytes = idx::serialize_idx_images(random_images(2, 4, 4, 1));
    SUBCASE("wrong magic") {
        bytes[3] = 0x01;
        CHECK_THROWS_AS(idx::parse_idx_images(bytes), DataError);
    }
    SUBCASE("truncated payload") {
        bytes.resize(bytes.size() - 5);
        CHECK_THROWS_AS(idx::parse_idx_images(bytes), DataError);
    }
    SUBCASE("truncated header") {
        bytes.resize(10);
        CHECK_THROWS_AS(idx::parse_idx_images(bytes), DataError);
    }
    SUBCASE("zero dimension") {
        // count field = 0 but payload present
        bytes[4] = bytes[5] = bytes[6] = bytes[7] = 0;
        CHECK_THROWS_AS(idx::parse_idx_images(bytes), DataError);
    }
}

TEST_CASE("gzip-compressed files are read transparently") {
    const auto dir = std::filesystem::temp_directory_path() / "mnet_idx_test";
    std::filesystem::create_directories(dir);
    const auto images = random_images(5, 6, 6, 7);
    const auto raw = idx::serialize_idx_images(images);
    const auto gz = gzip_compress(raw);
    const std::string path = (dir / "imgs.gz").string();
    idx::write_file(path, gz);
    CHECK(idx::read_file_maybe_gzip(path) == raw);

    const std::string plain = (dir / "imgs").string();
    idx::write_file(plain, raw);
    CHECK(idx::read_file_maybe_gzip(plain) == raw);

    CHECK_THROWS_AS(idx::read_file_maybe_gzip((dir / "missing").string()), DataError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("dataset save/load preserves pixels and labels") {
    const auto dir = std::filesystem::temp_directory_path() / "mnet_idx_ds";
    std::filesystem::create_directories(dir);
    auto images = random_images(4, 5, 5, 9);
    Dataset ds(std::move(images), {0, 1, 2, 1}, 3, "t");
    const std::string ip = (dir / "i").string(), lp = (dir / "l").string();
    idx::save_dataset(ds, ip, lp);
    const Dataset back = idx::load_dataset(ip, lp, 3);
    REQUIRE(back.size() == ds.size());
    CHECK(back.labels() == ds.labels());
    for (std::size_t i = 0; i < ds.size(); ++i)
        CHECK(back.images()[i].pixels == ds.images()[i].pixels);
    std::filesystem::remove_all(dir);
}
