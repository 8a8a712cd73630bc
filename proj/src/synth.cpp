#include "mnet/synth.hpp"

#include "mnet/augment.hpp"
#include "mnet/parallel.hpp"
#include "mnet/rng.hpp"

#include <array>
#include <cmath>

namespace mnet::synth {
namespace {

// 5x7 glyphs, row-major, '#' = stroke.
constexpr std::array<const char*, 10> kGlyphs = {
    " ### "
    "#   #"
    "#  ##"
    "# # #"
    "##  #"
    "#   #"
    " ### ", // 0
    "  #  "
    " ##  "
    "  #  "
    "  #  "
    "  #  "
    "  #  "
    " ### ", // 1
    " ### "
    "#   #"
    "    #"
    "   # "
    "  #  "
    " #   "
    "#####", // 2
    " ### "
    "#   #"
    "    #"
    "  ## "
    "    #"
    "#   #"
    " ### ", // 3
    "   # "
    "  ## "
    " # # "
    "#  # "
    "#####"
    "   # "
    "   # ", // 4
    "#####"
    "#    "
    "#### "
    "    #"
    "    #"
    "#   #"
    " ### ", // 5
    " ### "
    "#    "
    "#    "
    "#### "
    "#   #"
    "#   #"
    " ### ", // 6
    "#####"
    "    #"
    "   # "
    "  #  "
    "  #  "
    " #   "
    " #   ", // 7
    " ### "
    "#   #"
    "#   #"
    " ### "
    "#   #"
    "#   #"
    " ### ", // 8
    " ### "
    "#   #"
    "#   #"
    " ####"
    "    #"
    "    #"
    " ### ", // 9
};

constexpr int kSize = 28;

Image render_glyph(int digit, double intensity) {
    const char* glyph = kGlyphs[digit];
    Image img;
    img.height = kSize;
    img.width = kSize;
    img.pixels.assign(kSize * kSize, 0.0);
    // upscale the 5x7 glyph to a 15x21 stroke field centered in the frame
    constexpr int cell = 3;
    constexpr int top = (kSize - 7 * cell) / 2;
    constexpr int left = (kSize - 5 * cell) / 2;
    for (int gr = 0; gr < 7; ++gr)
        for (int gc = 0; gc < 5; ++gc) {
            if (glyph[gr * 5 + gc] != '#') continue;
            for (int r = 0; r < cell; ++r)
                for (int c = 0; c < cell; ++c)
                    img.at(top + gr * cell + r, left + gc * cell + c) = intensity;
        }
    return img;
}

} // namespace

Dataset make_digits(std::size_t count, std::uint64_t seed) {
    std::vector<Image> images(count);
    std::vector<int> labels(count);
    parallel_for(count, [&](std::size_t i) {
        Rng rng = make_rng(derive_seed(seed, i));
        std::uniform_int_distribution<int> digit_dist(0, 9);
        std::uniform_real_distribution<double> intensity(0.7, 1.0);
        std::uniform_real_distribution<double> angle(-20.0, 20.0);
        std::uniform_int_distribution<int> shift(-3, 3);
        std::uniform_real_distribution<double> blur(0.5, 0.9);
        std::uniform_real_distribution<double> warp(1.5, 3.5);

        const int digit = digit_dist(rng);
        Image img = render_glyph(digit, intensity(rng));
        augment::ElasticParams elastic;
        elastic.sigma = 3.0;
        elastic.alpha = warp(rng);
        elastic.seed = rng();
        img = augment::elastic_deform(img, elastic);
        img = augment::rotate(img, angle(rng));
        img = augment::translate(img, shift(rng), shift(rng));
        img = augment::gaussian_smooth(img, blur(rng));
        images[i] = std::move(img);
        labels[i] = digit;
    });
    return Dataset(std::move(images), std::move(labels), 10, "synthetic");
}

} // namespace mnet::synth
