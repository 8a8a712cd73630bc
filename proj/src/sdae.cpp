#include "mnet/sdae.hpp"

#include "mnet/errors.hpp"
#include "mnet/rng.hpp"
#include "mnet/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mnet::nnet {
namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// One denoising autoencoder layer: sigmoid encoder, linear decoder, MSE
// against the uncorrupted input.
std::vector<double> train_dae_layer(const std::vector<std::vector<double>>& inputs, int in_n,
                                    int out_n, const SdaeSpec& spec, Rng& rng) {
    const std::size_t wenc = static_cast<std::size_t>(out_n) * in_n;
    const std::size_t wdec = static_cast<std::size_t>(in_n) * out_n;
    // layout: Wenc | benc | Wdec | bdec
    std::vector<double> params(wenc + out_n + wdec + in_n, 0.0);
    {
        const double bound = std::sqrt(6.0 / (in_n + out_n));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (std::size_t i = 0; i < wenc; ++i) params[i] = dist(rng);
        for (std::size_t i = 0; i < wdec; ++i) params[wenc + out_n + i] = dist(rng);
    }
    double* w_enc = params.data();
    double* b_enc = w_enc + wenc;
    double* w_dec = b_enc + out_n;
    double* b_dec = w_dec + wdec;

    std::vector<double> grads(params.size());
    std::vector<double> corrupted(in_n), code(out_n), recon(in_n);
    std::vector<double> d_recon(in_n), d_code(out_n);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const int batch_size = std::max(1, spec.batch_size);
    for (int epoch = 0; epoch < spec.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            std::fill(grads.begin(), grads.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const std::vector<double>& x = inputs[order[k]];
                for (int i = 0; i < in_n; ++i)
                    corrupted[i] = u(rng) < spec.corruption ? 0.0 : x[i];
                for (int o = 0; o < out_n; ++o)
                    code[o] = sigmoid(
                        simd::dot(w_enc + static_cast<std::size_t>(o) * in_n, corrupted.data(),
                                  in_n) +
                        b_enc[o]);
                for (int i = 0; i < in_n; ++i)
                    recon[i] =
                        simd::dot(w_dec + static_cast<std::size_t>(i) * out_n, code.data(),
                                  out_n) +
                        b_dec[i];
                // MSE loss: mean over input units of (recon - x)^2
                for (int i = 0; i < in_n; ++i)
                    d_recon[i] = 2.0 * (recon[i] - x[i]) / in_n * inv_batch;
                double* g_wdec = grads.data() + wenc + out_n;
                double* g_bdec = g_wdec + wdec;
                std::fill(d_code.begin(), d_code.end(), 0.0);
                for (int i = 0; i < in_n; ++i) {
                    if (d_recon[i] != 0.0) {
                        simd::axpy(d_recon[i], code.data(),
                                   g_wdec + static_cast<std::size_t>(i) * out_n, out_n);
                        simd::axpy(d_recon[i], w_dec + static_cast<std::size_t>(i) * out_n,
                                   d_code.data(), out_n);
                    }
                    g_bdec[i] += d_recon[i];
                }
                double* g_wenc = grads.data();
                double* g_benc = g_wenc + wenc;
                for (int o = 0; o < out_n; ++o) {
                    const double d = d_code[o] * code[o] * (1.0 - code[o]);
                    if (d != 0.0)
                        simd::axpy(d, corrupted.data(),
                                   g_wenc + static_cast<std::size_t>(o) * in_n, in_n);
                    g_benc[o] += d;
                }
            }
            simd::axpy(-spec.learning_rate, grads.data(), params.data(), params.size());
        }
    }
    // keep only the encoder
    std::vector<double> encoder(params.begin(), params.begin() + wenc + out_n);
    return encoder;
}

} // namespace

SdaeTransformer::SdaeTransformer(SdaeSpec spec, std::vector<std::vector<double>> layer_params)
    : spec_(std::move(spec)), layer_params_(std::move(layer_params)) {
    input_widths_.resize(spec_.widths.size());
    for (std::size_t l = 0; l < spec_.widths.size(); ++l) {
        const std::size_t wb = layer_params_[l].size();
        const int out_n = spec_.widths[l];
        input_widths_[l] = static_cast<int>((wb - out_n) / out_n);
    }
}

std::vector<double> SdaeTransformer::encode(const std::vector<double>& input) const {
    std::vector<double> x = input;
    for (std::size_t l = 0; l < layer_params_.size(); ++l) {
        const int in_n = input_widths_[l];
        const int out_n = spec_.widths[l];
        if (static_cast<int>(x.size()) != in_n)
            throw DimensionError("sdae encode: input width " + std::to_string(x.size()) +
                                 " != expected " + std::to_string(in_n));
        const double* w = layer_params_[l].data();
        const double* b = w + static_cast<std::size_t>(out_n) * in_n;
        std::vector<double> y(out_n);
        for (int o = 0; o < out_n; ++o)
            y[o] = sigmoid(simd::dot(w + static_cast<std::size_t>(o) * in_n, x.data(), in_n) +
                           b[o]);
        x = std::move(y);
    }
    return x;
}

Dataset SdaeTransformer::transform(const Dataset& dataset) const {
    std::vector<Image> codes;
    codes.reserve(dataset.size());
    for (const Image& img : dataset.images()) {
        Image code;
        code.height = 1;
        code.width = code_width();
        code.pixels = encode(img.pixels);
        codes.push_back(std::move(code));
    }
    return Dataset(std::move(codes), dataset.labels(), dataset.n_classes(), "sdae-codes");
}

SdaeTransformer train_sdae(const SdaeSpec& spec, const Dataset& data) {
    if (spec.widths.empty()) throw ConfigError("sdae: no layer widths");
    for (int w : spec.widths)
        if (w <= 0) throw ConfigError("sdae: widths must be positive");
    if (spec.corruption < 0.0 || spec.corruption >= 1.0)
        throw ConfigError("sdae: corruption rate must be in [0,1)");
    if (data.empty()) throw ConfigError("sdae: empty dataset");

    Rng rng = make_rng(spec.seed);
    std::vector<std::vector<double>> layer_inputs;
    layer_inputs.reserve(data.size());
    for (const Image& img : data.images()) layer_inputs.push_back(img.pixels);

    std::vector<std::vector<double>> encoders;
    int in_n = static_cast<int>(layer_inputs.front().size());
    for (int out_n : spec.widths) {
        encoders.push_back(train_dae_layer(layer_inputs, in_n, out_n, spec, rng));
        // feed codes forward for the next layer
        const double* w = encoders.back().data();
        const double* b = w + static_cast<std::size_t>(out_n) * in_n;
        for (auto& x : layer_inputs) {
            std::vector<double> y(out_n);
            for (int o = 0; o < out_n; ++o)
                y[o] = sigmoid(
                    simd::dot(w + static_cast<std::size_t>(o) * in_n, x.data(), in_n) + b[o]);
            x = std::move(y);
        }
        in_n = out_n;
    }
    return SdaeTransformer(spec, std::move(encoders));
}

} // namespace mnet::nnet
