#pragma once

#include "mnet/dataset.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace mnet::augment {

struct ElasticParams {
    double sigma = 4.0;  // smoothing kernel std-dev, pixels
    double alpha = 34.0; // displacement amplitude, pixels
    std::uint64_t seed = 0;
};

// Per-image transforms. All preserve dimensions and the [0,1] range;
// out-of-frame samples fill with 0 (background).
Image rotate(const Image& image, double angle_degrees);
Image translate(const Image& image, int dx, int dy);
Image gaussian_smooth(const Image& image, double sigma);
Image elastic_deform(const Image& image, const ElasticParams& params);
Image crop(const Image& image, int top, int left, int out_height, int out_width);
Image hflip(const Image& image);

// Parameter ranges for the random dataset builders. The defaults are the
// standard handwriting-recognition values; all config-overridable.
struct AugmentParams {
    double max_rotation_degrees = 12.0;
    int max_translation = 2;       // per axis, pixels, uniform in [-v, v]
    double smooth_sigma_min = 0.5;
    double smooth_sigma_max = 1.0;
    double elastic_sigma = 4.0;
    double elastic_alpha = 34.0;
};

// Declarative plan: ordered transform descriptors applied per generated
// variant. replication = variants per image + 1 (original retained).
struct RotateStep { double max_degrees; };
struct TranslateStep { int max_shift; };
struct SmoothStep { double sigma_min, sigma_max; };
struct ElasticStep { double sigma, alpha; };
using TransformStep = std::variant<RotateStep, TranslateStep, SmoothStep, ElasticStep>;

struct AugmentPlan {
    std::vector<TransformStep> steps;
    int replication = 1;
};

// Applies a plan: per image, the original plus (replication-1) random
// variants. Per-image RNG streams derive from (seed, image index) so
// parallel and serial runs agree.
Dataset apply_plan(const Dataset& source, const AugmentPlan& plan, std::uint64_t seed);

// original + 4 random rotations + 4 elastic-then-rotate variants (9x).
Dataset build_dataset1(const Dataset& source, std::uint64_t seed,
                       const AugmentParams& params = {});

// original + 3 translated-and-smoothed variants (4x).
Dataset build_dataset2(const Dataset& source, std::uint64_t seed,
                       const AugmentParams& params = {});

} // namespace mnet::augment
