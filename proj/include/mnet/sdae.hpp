#pragma once

#include "mnet/dataset.hpp"

#include <cstdint>
#include <vector>

namespace mnet::nnet {

struct SdaeSpec {
    std::vector<int> widths;   // encoder layer widths, input -> deepest code
    double corruption = 0.3;   // fraction of inputs masked to 0 per layer
    int epochs = 10;
    double learning_rate = 0.05;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

// Greedy layer-wise pretrained denoising autoencoder stack. Encoding is a
// chain of sigmoid dense layers; decode heads are discarded after
// pretraining. Codes land in (0,1), so they re-enter the pipeline as 1-row
// images.
class SdaeTransformer {
public:
    SdaeTransformer() = default;
    SdaeTransformer(SdaeSpec spec, std::vector<std::vector<double>> layer_params);

    const SdaeSpec& spec() const { return spec_; }
    int code_width() const { return spec_.widths.empty() ? 0 : spec_.widths.back(); }

    std::vector<double> encode(const std::vector<double>& input) const;

    // Each image becomes its 1 x code_width code; labels preserved.
    Dataset transform(const Dataset& dataset) const;

private:
    SdaeSpec spec_;
    // per layer: weights (out x in) then biases (out)
    std::vector<std::vector<double>> layer_params_;
    std::vector<int> input_widths_;
};

// Layer k reconstructs its own (uncorrupted) input from a masked-corrupted
// version; corruption sets a random fraction of inputs to 0.
SdaeTransformer train_sdae(const SdaeSpec& spec, const Dataset& data);

} // namespace mnet::nnet
