#pragma once

#include "mnet/dataset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mnet::nnet {

enum class LayerKind { Dense, Conv, MaxPool, SoftmaxOutput };
enum class Activation { None, Relu, Sigmoid };
enum class RegKind { None, Dropout, DropConnect };

struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    int units = 0;                            // dense / softmax-output
    int filter_h = 0, filter_w = 0;           // conv filter / pool window
    int filter_count = 0;
    int stride = 1;
    Activation activation = Activation::None;
    RegKind regularizer = RegKind::None;
    double reg_rate = 0.0;

    static LayerSpec dense(int units, Activation act = Activation::Relu);
    static LayerSpec conv(int fh, int fw, int count, int stride = 1,
                          Activation act = Activation::None);
    static LayerSpec maxpool(int window, int stride);
    static LayerSpec softmax_output(int n_classes);

    LayerSpec& with_dropout(double rate);
    LayerSpec& with_dropconnect(double rate);
};

struct LrSchedule {
    double initial = 0.001;
    double decay = 0.993; // per-epoch multiplicative factor
    double floor = 0.00003;

    double rate_at(int epoch) const;
};

struct NetworkSpec {
    std::vector<LayerSpec> layers;
    int input_h = 0, input_w = 0, input_c = 1;
    int n_classes = 0;
    LrSchedule lr;
    int batch_size = 32;
    int epochs = 10;
    std::uint64_t seed = 0;
    bool shuffle = true;

    void validate() const; // checks the layer chain and final softmax
};

// Per-training-sample nonnegative weights; normalized to mean 1 before use
// so emphasis changes relative weighting, not the effective step size.
using SampleWeights = std::vector<double>;

class TrainedModel {
public:
    TrainedModel() = default;
    TrainedModel(NetworkSpec spec, std::vector<std::vector<double>> params,
                 double validation_accuracy);

    const NetworkSpec& spec() const { return spec_; }
    const std::vector<std::vector<double>>& params() const { return params_; }
    double validation_accuracy() const { return validation_accuracy_; }

    // Post-softmax class probabilities, one vector per image, order-preserving.
    std::vector<std::vector<double>> predict(const std::vector<Image>& images) const;
    std::vector<double> predict_one(const Image& image) const;
    int predict_class(const Image& image) const;

    void save(const std::string& path) const;
    static TrainedModel load(const std::string& path);

private:
    NetworkSpec spec_;
    std::vector<std::vector<double>> params_;
    double validation_accuracy_ = 0.0;
};

// Mini-batch SGD on the weighted mean cross-entropy; returns the parameters
// of the best-validation-accuracy epoch (final epoch when validation is
// empty). Deterministic for a fixed (spec, data, seed).
TrainedModel train(const NetworkSpec& spec, const Dataset& data,
                   const std::optional<SampleWeights>& weights, const Dataset& validation);

struct GradCheckBatch {
    std::vector<Image> inputs;
    std::vector<int> labels;
    std::optional<SampleWeights> weights;
};

// Central finite differences (h = 1e-5) vs the analytic gradient;
// returns max over parameters of |ga-gn| / max(|ga|,|gn|,1e-8).
// Regularizers must be disabled in the spec.
double gradient_check(const NetworkSpec& spec, const GradCheckBatch& batch);

// Bernoulli weight mask: 1 keeps the weight, 0 drops it (probability rate).
std::vector<std::uint8_t> dropconnect_mask(std::size_t weight_count, double rate,
                                           std::uint64_t seed);

} // namespace mnet::nnet
