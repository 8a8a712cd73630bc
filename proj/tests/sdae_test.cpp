#include "mnet/sdae.hpp"

#include "mnet/errors.hpp"
#include "mnet/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace mnet;
using namespace mnet::nnet;

namespace {

// low-dimensional structured data: pixels correlate pairwise, so a
// narrower code can capture most of the signal
Dataset correlated(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Image> images;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        Image img;
        img.height = 1;
        img.width = 8;
        img.pixels.resize(8);
        for (int p = 0; p < 4; ++p) {
            const double v = u(rng);
            img.pixels[2 * p] = v;
            img.pixels[2 * p + 1] = v;
        }
        images.push_back(std::move(img));
        labels.push_back(static_cast<int>(i % 2));
    }
    return Dataset(std::move(images), std::move(labels), 2, "corr");
}

} // namespace

TEST_CASE("sdae spec validation") {
    SdaeSpec spec;
    const Dataset d = correlated(10, 1);
    spec.widths = {};
    CHECK_THROWS_AS(train_sdae(spec, d), ConfigError);
    spec.widths = {0};
    CHECK_THROWS_AS(train_sdae(spec, d), ConfigError);
    spec.widths = {4};
    spec.corruption = 1.0;
    CHECK_THROWS_AS(train_sdae(spec, d), ConfigError);
    spec.corruption = 0.2;
    CHECK_THROWS_AS(train_sdae(spec, Dataset{}), ConfigError);
}

TEST_CASE("codes have the configured width and live in (0,1)") {
    SdaeSpec spec;
    spec.widths = {6, 3};
    spec.epochs = 3;
    spec.seed = 2;
    const Dataset d = correlated(40, 3);
    const SdaeTransformer t = train_sdae(spec, d);
    CHECK(t.code_width() == 3);
    const Dataset codes = t.transform(d);
    REQUIRE(codes.size() == d.size());
    CHECK(codes.image_height() == 1);
    CHECK(codes.image_width() == 3);
    CHECK(codes.labels() == d.labels());
    for (const Image& img : codes.images())
        for (double p : img.pixels) CHECK((p > 0.0 && p < 1.0));
}

TEST_CASE("training is deterministic per seed") {
    SdaeSpec spec;
    spec.widths = {5};
    spec.epochs = 4;
    spec.seed = 7;
    const Dataset d = correlated(30, 4);
    const auto a = train_sdae(spec, d).transform(d);
    const auto b = train_sdae(spec, d).transform(d);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.images()[i].pixels == b.images()[i].pixels);
    spec.seed = 8;
    const auto c = train_sdae(spec, d).transform(d);
    CHECK(a.images()[0].pixels != c.images()[0].pixels);
}

TEST_CASE("encoder rejects mismatched input widths") {
    SdaeSpec spec;
    spec.widths = {4};
    spec.epochs = 1;
    const Dataset d = correlated(10, 5);
    const SdaeTransformer t = train_sdae(spec, d);
    CHECK_THROWS_AS(t.encode(std::vector<double>(5, 0.0)), DimensionError);
}
