#pragma once

#include "mnet/dataset.hpp"

#include <cstdint>

namespace mnet::synth {

// Deterministic handwritten-digit-style dataset: 5x7 glyphs upscaled to
// 28x28 with random rotation, shift, elastic warp, blur and stroke
// intensity. A stand-in with the same file format and class structure as
// the real digit corpus for demos and self-contained test runs.
Dataset make_digits(std::size_t count, std::uint64_t seed);

} // namespace mnet::synth
