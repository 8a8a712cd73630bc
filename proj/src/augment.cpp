#include "mnet/augment.hpp"

#include "mnet/errors.hpp"
#include "mnet/parallel.hpp"
#include "mnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mnet::augment {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Bilinear sample at fractional (row, col); outside the frame reads 0.
double sample_bilinear(const Image& img, double r, double c) {
    const int r0 = static_cast<int>(std::floor(r));
    const int c0 = static_cast<int>(std::floor(c));
    const double fr = r - r0;
    const double fc = c - c0;
    auto px = [&](int rr, int cc) -> double {
        if (rr < 0 || rr >= img.height || cc < 0 || cc >= img.width) return 0.0;
        return img.at(rr, cc);
    };
    return (1 - fr) * ((1 - fc) * px(r0, c0) + fc * px(r0, c0 + 1)) +
           fr * ((1 - fc) * px(r0 + 1, c0) + fc * px(r0 + 1, c0 + 1));
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        total += kernel[i + radius];
    }
    for (double& k : kernel) k /= total;
    return kernel;
}

// Separable convolution over a raw field (no [0,1] clamp), edges clamped.
void smooth_field(std::vector<double>& field, int height, int width, double sigma) {
    const auto kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    std::vector<double> tmp(field.size());
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int cc = std::clamp(c + k, 0, width - 1);
                acc += kernel[k + radius] * field[static_cast<std::size_t>(r) * width + cc];
            }
            tmp[static_cast<std::size_t>(r) * width + c] = acc;
        }
    for (int c = 0; c < width; ++c)
        for (int r = 0; r < height; ++r) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int rr = std::clamp(r + k, 0, height - 1);
                acc += kernel[k + radius] * tmp[static_cast<std::size_t>(rr) * width + c];
            }
            field[static_cast<std::size_t>(r) * width + c] = acc;
        }
}

Image apply_steps(const Image& img, const std::vector<TransformStep>& steps, Rng& rng) {
    Image out = img;
    for (const TransformStep& step : steps) {
        if (const auto* rot = std::get_if<RotateStep>(&step)) {
            std::uniform_real_distribution<double> angle(-rot->max_degrees, rot->max_degrees);
            out = rotate(out, angle(rng));
        } else if (const auto* tr = std::get_if<TranslateStep>(&step)) {
            std::uniform_int_distribution<int> shift(-tr->max_shift, tr->max_shift);
            const int dx = shift(rng);
            const int dy = shift(rng);
            out = translate(out, dx, dy);
        } else if (const auto* sm = std::get_if<SmoothStep>(&step)) {
            std::uniform_real_distribution<double> sigma(sm->sigma_min, sm->sigma_max);
            out = gaussian_smooth(out, sigma(rng));
        } else if (const auto* el = std::get_if<ElasticStep>(&step)) {
            ElasticParams p;
            p.sigma = el->sigma;
            p.alpha = el->alpha;
            p.seed = rng();
            out = elastic_deform(out, p);
        }
    }
    return out;
}

// Shared builder: per image, original + per-variant step sequences.
Dataset build_randomized(const Dataset& source,
                         const std::vector<std::vector<TransformStep>>& variants,
                         std::uint64_t seed, const char* split_name) {
    const std::size_t n = source.size();
    const std::size_t replication = variants.size() + 1;
    std::vector<Image> images(n * replication);
    std::vector<int> labels(n * replication);
    parallel_for(n, [&](std::size_t i) {
        Rng rng = make_rng(derive_seed(seed, i));
        const std::size_t base = i * replication;
        images[base] = source.images()[i];
        labels[base] = source.labels()[i];
        for (std::size_t v = 0; v < variants.size(); ++v) {
            images[base + 1 + v] = apply_steps(source.images()[i], variants[v], rng);
            labels[base + 1 + v] = source.labels()[i];
        }
    });
    return Dataset(std::move(images), std::move(labels), source.n_classes(), split_name);
}

} // namespace

Image rotate(const Image& image, double angle_degrees) {
    if (std::abs(angle_degrees) > 45.0 &&
        std::abs(std::abs(angle_degrees) - 90.0) > 1e-9)
        throw ConfigError("rotate: |angle| must be <= 45");
    const double theta = angle_degrees * std::numbers::pi / 180.0;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double cr = (image.height - 1) / 2.0;
    const double cc = (image.width - 1) / 2.0;
    Image out;
    out.height = image.height;
    out.width = image.width;
    out.pixels.resize(image.pixels.size());
    // Inverse mapping: for each output pixel, sample the source at the
    // back-rotated coordinate.
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) {
            const double dr = r - cr;
            const double dc = c - cc;
            const double sr = cr + cos_t * dr + sin_t * dc;
            const double sc = cc - sin_t * dr + cos_t * dc;
            out.at(r, c) = clamp01(sample_bilinear(image, sr, sc));
        }
    return out;
}

Image translate(const Image& image, int dx, int dy) {
    if (std::abs(dx) > image.width / 4 || std::abs(dy) > image.height / 4)
        throw ConfigError("translate: shift exceeds a quarter of the frame");
    Image out;
    out.height = image.height;
    out.width = image.width;
    out.pixels.assign(image.pixels.size(), 0.0);
    for (int r = 0; r < image.height; ++r) {
        const int rr = r + dy;
        if (rr < 0 || rr >= image.height) continue;
        for (int c = 0; c < image.width; ++c) {
            const int cc = c + dx;
            if (cc < 0 || cc >= image.width) continue;
            out.at(rr, cc) = image.at(r, c);
        }
    }
    return out;
}

Image gaussian_smooth(const Image& image, double sigma) {
    if (sigma <= 0.0) throw ConfigError("gaussian_smooth: sigma must be positive");
    Image out = image;
    smooth_field(out.pixels, out.height, out.width, sigma);
    for (double& px : out.pixels) px = clamp01(px);
    return out;
}

Image elastic_deform(const Image& image, const ElasticParams& params) {
    if (params.sigma <= 0.0) throw ConfigError("elastic_deform: sigma must be positive");
    if (params.alpha < 0.0) throw ConfigError("elastic_deform: alpha must be nonnegative");
    const std::size_t n = image.pixels.size();
    std::vector<double> disp_r(n);
    std::vector<double> disp_c(n);
    Rng rng = make_rng(params.seed);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) disp_r[i] = noise(rng);
    for (std::size_t i = 0; i < n; ++i) disp_c[i] = noise(rng);
    smooth_field(disp_r, image.height, image.width, params.sigma);
    smooth_field(disp_c, image.height, image.width, params.sigma);
    Image out;
    out.height = image.height;
    out.width = image.width;
    out.pixels.resize(n);
    for (int r = 0; r < image.height; ++r)
        for (int c = 0; c < image.width; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * image.width + c;
            out.pixels[i] = clamp01(sample_bilinear(image, r + params.alpha * disp_r[i],
                                                    c + params.alpha * disp_c[i]));
        }
    return out;
}

Image crop(const Image& image, int top, int left, int out_height, int out_width) {
    if (out_height <= 0 || out_width <= 0) throw ConfigError("crop: empty region");
    Image out;
    out.height = out_height;
    out.width = out_width;
    out.pixels.assign(static_cast<std::size_t>(out_height) * out_width, 0.0);
    for (int r = 0; r < out_height; ++r) {
        const int sr = top + r;
        if (sr < 0 || sr >= image.height) continue;
        for (int c = 0; c < out_width; ++c) {
            const int sc = left + c;
            if (sc < 0 || sc >= image.width) continue;
            out.at(r, c) = image.at(sr, sc);
        }
    }
    return out;
}

Image hflip(const Image& image) {
    Image out = image;
    for (int r = 0; r < image.height; ++r)
        for (int c = 0; c < image.width; ++c)
            out.at(r, c) = image.at(r, image.width - 1 - c);
    return out;
}

Dataset apply_plan(const Dataset& source, const AugmentPlan& plan, std::uint64_t seed) {
    if (plan.replication < 1) throw ConfigError("augment plan: replication must be >= 1");
    std::vector<std::vector<TransformStep>> variants(plan.replication - 1, plan.steps);
    return build_randomized(source, variants, seed, "augmented");
}

Dataset build_dataset1(const Dataset& source, std::uint64_t seed, const AugmentParams& params) {
    std::vector<std::vector<TransformStep>> variants;
    for (int i = 0; i < 4; ++i)
        variants.push_back({RotateStep{params.max_rotation_degrees}});
    for (int i = 0; i < 4; ++i)
        variants.push_back({ElasticStep{params.elastic_sigma, params.elastic_alpha},
                            RotateStep{params.max_rotation_degrees}});
    return build_randomized(source, variants, seed, "dataset1");
}

Dataset build_dataset2(const Dataset& source, std::uint64_t seed, const AugmentParams& params) {
    std::vector<std::vector<TransformStep>> variants(
        3, {TranslateStep{params.max_translation},
            SmoothStep{params.smooth_sigma_min, params.smooth_sigma_max}});
    return build_randomized(source, variants, seed, "dataset2");
}

} // namespace mnet::augment
