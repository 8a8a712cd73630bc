#include "mnet/nnet.hpp"

#include "mnet/errors.hpp"
#include "mnet/rng.hpp"
#include "mnet/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mnet::nnet {

LayerSpec LayerSpec::dense(int units, Activation act) {
    LayerSpec s;
    s.kind = LayerKind::Dense;
    s.units = units;
    s.activation = act;
    return s;
}

LayerSpec LayerSpec::conv(int fh, int fw, int count, int stride, Activation act) {
    LayerSpec s;
    s.kind = LayerKind::Conv;
    s.filter_h = fh;
    s.filter_w = fw;
    s.filter_count = count;
    s.stride = stride;
    s.activation = act;
    return s;
}

LayerSpec LayerSpec::maxpool(int window, int stride) {
    LayerSpec s;
    s.kind = LayerKind::MaxPool;
    s.filter_h = window;
    s.filter_w = window;
    s.stride = stride;
    return s;
}

LayerSpec LayerSpec::softmax_output(int n_classes) {
    LayerSpec s;
    s.kind = LayerKind::SoftmaxOutput;
    s.units = n_classes;
    return s;
}

LayerSpec& LayerSpec::with_dropout(double rate) {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropout rate must be in [0,1)");
    regularizer = RegKind::Dropout;
    reg_rate = rate;
    return *this;
}

LayerSpec& LayerSpec::with_dropconnect(double rate) {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropconnect rate must be in [0,1)");
    regularizer = RegKind::DropConnect;
    reg_rate = rate;
    return *this;
}

double LrSchedule::rate_at(int epoch) const {
    return std::max(floor, initial * std::pow(decay, epoch));
}

namespace {

struct Shape {
    int h = 1, w = 1, c = 1;
    std::size_t count() const { return static_cast<std::size_t>(h) * w * c; }
};

// Layout conventions: activations are (h, w, c) row-major with channel
// fastest. Conv filters are (filter, fh, fw, in_c).

Shape output_shape(const LayerSpec& layer, const Shape& in) {
    switch (layer.kind) {
        case LayerKind::Dense:
        case LayerKind::SoftmaxOutput:
            if (layer.units <= 0) throw ConfigError("dense layer needs positive units");
            return Shape{1, 1, layer.units};
        case LayerKind::Conv: {
            if (layer.stride < 1) throw ConfigError("conv stride must be >= 1");
            if (in.h < layer.filter_h || in.w < layer.filter_w)
                throw DimensionError("conv filter larger than input");
            return Shape{(in.h - layer.filter_h) / layer.stride + 1,
                         (in.w - layer.filter_w) / layer.stride + 1, layer.filter_count};
        }
        case LayerKind::MaxPool: {
            if (layer.stride < 1) throw ConfigError("pool stride must be >= 1");
            if (in.h < layer.filter_h || in.w < layer.filter_w)
                throw DimensionError("pool window larger than input");
            return Shape{(in.h - layer.filter_h) / layer.stride + 1,
                         (in.w - layer.filter_w) / layer.stride + 1, in.c};
        }
    }
    throw ConfigError("unknown layer kind");
}

double activate(Activation act, double v) {
    switch (act) {
        case Activation::Relu: return v > 0.0 ? v : 0.0;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
        case Activation::None: return v;
    }
    return v;
}

double activate_grad_from_output(Activation act, double out) {
    switch (act) {
        case Activation::Relu: return out > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: return out * (1.0 - out);
        case Activation::None: return 1.0;
    }
    return 1.0;
}

// Scratch buffers for one sample pass; sized once per network.
struct PassState {
    std::vector<std::vector<double>> activations;      // per layer output
    std::vector<std::vector<double>> deltas;           // per layer output grad
    std::vector<std::vector<int>> pool_argmax;         // maxpool source index
    std::vector<std::vector<std::uint8_t>> drop_masks; // dropout/dropconnect
    std::vector<std::vector<double>> masked_weights;   // per-layer dropconnect scratch
    std::vector<double> dc_grad_scratch;               // per-sample weight grads
};

class Engine {
public:
    explicit Engine(const NetworkSpec& spec) : spec_(spec) {
        spec_.validate();
        shapes_.push_back(Shape{spec_.input_h, spec_.input_w, spec_.input_c});
        for (const LayerSpec& layer : spec_.layers)
            shapes_.push_back(output_shape(layer, shapes_.back()));
    }

    const NetworkSpec& spec() const { return spec_; }
    std::size_t n_layers() const { return spec_.layers.size(); }
    const Shape& input_shape() const { return shapes_.front(); }

    // params[l] holds weights followed by biases for parametric layers,
    // empty for maxpool.
    std::vector<std::vector<double>> make_params() const {
        std::vector<std::vector<double>> params(n_layers());
        for (std::size_t l = 0; l < n_layers(); ++l) params[l].resize(param_count(l), 0.0);
        return params;
    }

    std::size_t weight_count(std::size_t l) const {
        const LayerSpec& layer = spec_.layers[l];
        const Shape& in = shapes_[l];
        switch (layer.kind) {
            case LayerKind::Dense:
            case LayerKind::SoftmaxOutput:
                return static_cast<std::size_t>(layer.units) * in.count();
            case LayerKind::Conv:
                return static_cast<std::size_t>(layer.filter_count) * layer.filter_h *
                       layer.filter_w * in.c;
            case LayerKind::MaxPool: return 0;
        }
        return 0;
    }

    std::size_t bias_count(std::size_t l) const {
        const LayerSpec& layer = spec_.layers[l];
        switch (layer.kind) {
            case LayerKind::Dense:
            case LayerKind::SoftmaxOutput: return static_cast<std::size_t>(layer.units);
            case LayerKind::Conv: return static_cast<std::size_t>(layer.filter_count);
            case LayerKind::MaxPool: return 0;
        }
        return 0;
    }

    std::size_t param_count(std::size_t l) const { return weight_count(l) + bias_count(l); }

    void init_params(std::vector<std::vector<double>>& params, Rng& rng) const {
        for (std::size_t l = 0; l < n_layers(); ++l) {
            const std::size_t wc = weight_count(l);
            if (wc == 0) continue;
            const double fan_in = static_cast<double>(fan_in_of(l));
            const double fan_out = static_cast<double>(fan_out_of(l));
            const double bound = std::sqrt(6.0 / (fan_in + fan_out));
            std::uniform_real_distribution<double> dist(-bound, bound);
            for (std::size_t i = 0; i < wc; ++i) params[l][i] = dist(rng);
            // biases start at zero
        }
    }

    PassState make_state() const {
        PassState st;
        st.activations.resize(n_layers());
        st.deltas.resize(n_layers());
        st.pool_argmax.resize(n_layers());
        st.drop_masks.resize(n_layers());
        st.masked_weights.resize(n_layers());
        for (std::size_t l = 0; l < n_layers(); ++l) {
            st.activations[l].resize(shapes_[l + 1].count());
            st.deltas[l].resize(shapes_[l + 1].count());
            if (spec_.layers[l].kind == LayerKind::MaxPool)
                st.pool_argmax[l].resize(shapes_[l + 1].count());
        }
        return st;
    }

    // Forward pass. In training mode regularizer masks are drawn from
    // mask_rng; in inference mode activations/weights scale by (1-rate).
    void forward(const std::vector<std::vector<double>>& params, const double* input,
                 PassState& st, bool training, Rng* mask_rng) const {
        const double* x = input;
        for (std::size_t l = 0; l < n_layers(); ++l) {
            const LayerSpec& layer = spec_.layers[l];
            const Shape& in = shapes_[l];
            const Shape& out = shapes_[l + 1];
            std::vector<double>& y = st.activations[l];
            switch (layer.kind) {
                case LayerKind::Dense:
                case LayerKind::SoftmaxOutput: {
                    const std::size_t in_n = in.count();
                    const double* w = params[l].data();
                    const double* b = w + weight_count(l);
                    const bool dc = layer.regularizer == RegKind::DropConnect;
                    if (dc && training) {
                        draw_mask(st.drop_masks[l], weight_count(l), layer.reg_rate, *mask_rng);
                        st.masked_weights[l].resize(weight_count(l));
                        for (std::size_t i = 0; i < weight_count(l); ++i)
                            st.masked_weights[l][i] = st.drop_masks[l][i] ? w[i] : 0.0;
                        w = st.masked_weights[l].data();
                    }
                    const double w_scale = (dc && !training) ? 1.0 - layer.reg_rate : 1.0;
                    for (int o = 0; o < layer.units; ++o)
                        y[o] = w_scale * simd::dot(w + static_cast<std::size_t>(o) * in_n, x, in_n) +
                               b[o];
                    if (layer.kind == LayerKind::SoftmaxOutput) {
                        softmax_inplace(y);
                    } else {
                        for (double& v : y) v = activate(layer.activation, v);
                    }
                    break;
                }
                case LayerKind::Conv: {
                    const double* w = params[l].data();
                    const double* b = w + weight_count(l);
                    const std::size_t f_sz =
                        static_cast<std::size_t>(layer.filter_h) * layer.filter_w * in.c;
                    for (int orow = 0; orow < out.h; ++orow)
                        for (int ocol = 0; ocol < out.w; ++ocol)
                            for (int f = 0; f < out.c; ++f) {
                                const double* fw = w + f * f_sz;
                                double acc = b[f];
                                for (int kr = 0; kr < layer.filter_h; ++kr) {
                                    const double* row =
                                        x + (static_cast<std::size_t>(orow * layer.stride + kr) *
                                                 in.w +
                                             ocol * layer.stride) *
                                                in.c;
                                    acc += simd::dot(
                                        fw + static_cast<std::size_t>(kr) * layer.filter_w * in.c,
                                        row, static_cast<std::size_t>(layer.filter_w) * in.c);
                                }
                                y[(static_cast<std::size_t>(orow) * out.w + ocol) * out.c + f] =
                                    activate(layer.activation, acc);
                            }
                    break;
                }
                case LayerKind::MaxPool: {
                    for (int orow = 0; orow < out.h; ++orow)
                        for (int ocol = 0; ocol < out.w; ++ocol)
                            for (int ch = 0; ch < out.c; ++ch) {
                                double best = -std::numeric_limits<double>::infinity();
                                int best_idx = 0;
                                for (int kr = 0; kr < layer.filter_h; ++kr)
                                    for (int kc = 0; kc < layer.filter_w; ++kc) {
                                        const int idx =
                                            ((orow * layer.stride + kr) * in.w +
                                             (ocol * layer.stride + kc)) *
                                                in.c +
                                            ch;
                                        if (x[idx] > best) {
                                            best = x[idx];
                                            best_idx = idx;
                                        }
                                    }
                                const std::size_t oidx =
                                    (static_cast<std::size_t>(orow) * out.w + ocol) * out.c + ch;
                                y[oidx] = best;
                                st.pool_argmax[l][oidx] = best_idx;
                            }
                    break;
                }
            }
            if (layer.regularizer == RegKind::Dropout && layer.kind != LayerKind::SoftmaxOutput) {
                if (training) {
                    draw_mask(st.drop_masks[l], y.size(), layer.reg_rate, *mask_rng);
                    for (std::size_t i = 0; i < y.size(); ++i)
                        if (!st.drop_masks[l][i]) y[i] = 0.0;
                } else {
                    const double keep = 1.0 - layer.reg_rate;
                    for (double& v : y) v *= keep;
                }
            }
            x = y.data();
        }
    }

    // Backward pass for one sample; grads accumulate scaled by `scale`
    // (sample weight / batch size). Requires a fresh training forward in st.
    void backward(const std::vector<std::vector<double>>& params, const double* input,
                  int label, double scale, PassState& st,
                  std::vector<std::vector<double>>& grads) const {
        const std::size_t last = n_layers() - 1;
        // softmax + CE: delta = p - onehot
        {
            const std::vector<double>& p = st.activations[last];
            std::vector<double>& d = st.deltas[last];
            for (std::size_t c = 0; c < p.size(); ++c)
                d[c] = scale * (p[c] - (static_cast<int>(c) == label ? 1.0 : 0.0));
        }
        for (std::size_t l = last + 1; l-- > 0;) {
            const LayerSpec& layer = spec_.layers[l];
            const Shape& in = shapes_[l];
            const double* x = l == 0 ? input : st.activations[l - 1].data();
            std::vector<double>& delta = st.deltas[l];
            std::vector<double>* din = l == 0 ? nullptr : &st.deltas[l - 1];
            if (din) std::fill(din->begin(), din->end(), 0.0);

            // dropout acted on this layer's output; gate the incoming grad
            if (layer.regularizer == RegKind::Dropout && layer.kind != LayerKind::SoftmaxOutput)
                for (std::size_t i = 0; i < delta.size(); ++i)
                    if (!st.drop_masks[l][i]) delta[i] = 0.0;

            switch (layer.kind) {
                case LayerKind::Dense:
                case LayerKind::SoftmaxOutput: {
                    if (layer.kind != LayerKind::SoftmaxOutput)
                        for (std::size_t i = 0; i < delta.size(); ++i)
                            delta[i] *=
                                activate_grad_from_output(layer.activation, st.activations[l][i]);
                    const std::size_t in_n = in.count();
                    const bool dc = layer.regularizer == RegKind::DropConnect;
                    double* gw = grads[l].data();
                    double* gb = gw + weight_count(l);
                    const double* w = dc ? st.masked_weights[l].data() : params[l].data();
                    double* sample_gw = gw;
                    if (dc) {
                        // gradients flow only through kept weights; mask a
                        // per-sample scratch before accumulating
                        st.dc_grad_scratch.assign(weight_count(l), 0.0);
                        sample_gw = st.dc_grad_scratch.data();
                    }
                    for (int o = 0; o < layer.units; ++o) {
                        const double d = delta[o];
                        if (d != 0.0) {
                            simd::axpy(d, x, sample_gw + static_cast<std::size_t>(o) * in_n, in_n);
                            if (din)
                                simd::axpy(d, w + static_cast<std::size_t>(o) * in_n, din->data(),
                                           in_n);
                        }
                        gb[o] += d;
                    }
                    if (dc)
                        for (std::size_t i = 0; i < weight_count(l); ++i)
                            if (st.drop_masks[l][i]) gw[i] += st.dc_grad_scratch[i];
                    break;
                }
                case LayerKind::Conv: {
                    const Shape& out = shapes_[l + 1];
                    const std::size_t f_sz =
                        static_cast<std::size_t>(layer.filter_h) * layer.filter_w * in.c;
                    double* gw = grads[l].data();
                    double* gb = gw + weight_count(l);
                    const double* w = params[l].data();
                    for (int orow = 0; orow < out.h; ++orow)
                        for (int ocol = 0; ocol < out.w; ++ocol)
                            for (int f = 0; f < out.c; ++f) {
                                const std::size_t oidx =
                                    (static_cast<std::size_t>(orow) * out.w + ocol) * out.c + f;
                                double d = delta[oidx] *
                                           activate_grad_from_output(layer.activation,
                                                                     st.activations[l][oidx]);
                                if (d == 0.0) continue;
                                gb[f] += d;
                                for (int kr = 0; kr < layer.filter_h; ++kr) {
                                    const std::size_t in_off =
                                        (static_cast<std::size_t>(orow * layer.stride + kr) *
                                             in.w +
                                         ocol * layer.stride) *
                                        in.c;
                                    const std::size_t f_off =
                                        f * f_sz +
                                        static_cast<std::size_t>(kr) * layer.filter_w * in.c;
                                    simd::axpy(d, x + in_off, gw + f_off,
                                               static_cast<std::size_t>(layer.filter_w) * in.c);
                                    if (din)
                                        simd::axpy(d, w + f_off, din->data() + in_off,
                                                   static_cast<std::size_t>(layer.filter_w) *
                                                       in.c);
                                }
                            }
                    break;
                }
                case LayerKind::MaxPool: {
                    if (din)
                        for (std::size_t oidx = 0; oidx < delta.size(); ++oidx)
                            (*din)[st.pool_argmax[l][oidx]] += delta[oidx];
                    break;
                }
            }
        }
    }

    // Inference probabilities for one image.
    std::vector<double> infer(const std::vector<std::vector<double>>& params,
                              const double* input, PassState& st) const {
        forward(params, input, st, /*training=*/false, nullptr);
        return st.activations.back();
    }

private:
    static void softmax_inplace(std::vector<double>& v) {
        const double mx = *std::max_element(v.begin(), v.end());
        double total = 0.0;
        for (double& e : v) {
            e = std::exp(e - mx);
            total += e;
        }
        for (double& e : v) e /= total;
    }

    static void draw_mask(std::vector<std::uint8_t>& mask, std::size_t n, double rate, Rng& rng) {
        mask.resize(n);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) mask[i] = u(rng) >= rate ? 1 : 0;
    }

    std::size_t fan_in_of(std::size_t l) const {
        const LayerSpec& layer = spec_.layers[l];
        const Shape& in = shapes_[l];
        if (layer.kind == LayerKind::Conv)
            return static_cast<std::size_t>(layer.filter_h) * layer.filter_w * in.c;
        return in.count();
    }

    std::size_t fan_out_of(std::size_t l) const {
        const LayerSpec& layer = spec_.layers[l];
        if (layer.kind == LayerKind::Conv)
            return static_cast<std::size_t>(layer.filter_h) * layer.filter_w * layer.filter_count;
        return static_cast<std::size_t>(layer.units);
    }

    NetworkSpec spec_;
    std::vector<Shape> shapes_;
};

double cross_entropy(const std::vector<double>& probs, int label) {
    return -std::log(std::max(probs[label], 1e-300));
}

SampleWeights normalized_weights(const std::optional<SampleWeights>& weights, std::size_t n) {
    if (!weights) return SampleWeights(n, 1.0);
    if (weights->size() != n)
        throw DimensionError("sample weights: length " + std::to_string(weights->size()) +
                             " != dataset size " + std::to_string(n));
    double total = 0.0;
    for (double w : *weights) {
        if (w < 0.0) throw ConfigError("sample weights must be nonnegative");
        total += w;
    }
    if (total == 0.0) throw ConfigError("degenerate sample weights: all zero");
    SampleWeights out = *weights;
    const double mean = total / static_cast<double>(n);
    for (double& w : out) w /= mean;
    return out;
}

void check_input_dims(const NetworkSpec& spec, const Image& img) {
    if (img.height * img.width != spec.input_h * spec.input_w * spec.input_c)
        throw DimensionError("image size " + std::to_string(img.height) + "x" +
                             std::to_string(img.width) + " does not match network input");
}

double evaluate_accuracy(const Engine& engine, const std::vector<std::vector<double>>& params,
                         const Dataset& data) {
    if (data.empty()) return 0.0;
    PassState st = engine.make_state();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto probs = engine.infer(params, data.images()[i].pixels.data(), st);
        const auto arg =
            std::distance(probs.begin(), std::max_element(probs.begin(), probs.end()));
        if (static_cast<int>(arg) == data.labels()[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

} // namespace

void NetworkSpec::validate() const {
    if (layers.empty()) throw ConfigError("network: no layers");
    if (input_h <= 0 || input_w <= 0 || input_c <= 0)
        throw ConfigError("network: invalid input dimensions");
    if (n_classes < 2) throw ConfigError("network: need at least 2 classes");
    const LayerSpec& last = layers.back();
    if (last.kind != LayerKind::SoftmaxOutput || last.units != n_classes)
        throw ConfigError("network: final layer must be softmax-output with n_classes units");
    for (const LayerSpec& layer : layers) {
        if (layer.reg_rate < 0.0 || layer.reg_rate >= 1.0)
            throw ConfigError("network: regularizer rate must be in [0,1)");
        if (layer.kind == LayerKind::Conv && layer.stride < 1)
            throw ConfigError("network: conv stride must be >= 1");
    }
}

TrainedModel::TrainedModel(NetworkSpec spec, std::vector<std::vector<double>> params,
                           double validation_accuracy)
    : spec_(std::move(spec)), params_(std::move(params)),
      validation_accuracy_(validation_accuracy) {}

std::vector<double> TrainedModel::predict_one(const Image& image) const {
    check_input_dims(spec_, image);
    Engine engine(spec_);
    PassState st = engine.make_state();
    return engine.infer(params_, image.pixels.data(), st);
}

std::vector<std::vector<double>> TrainedModel::predict(const std::vector<Image>& images) const {
    Engine engine(spec_);
    PassState st = engine.make_state();
    std::vector<std::vector<double>> out;
    out.reserve(images.size());
    for (const Image& img : images) {
        check_input_dims(spec_, img);
        out.push_back(engine.infer(params_, img.pixels.data(), st));
    }
    return out;
}

int TrainedModel::predict_class(const Image& image) const {
    const auto probs = predict_one(image);
    return static_cast<int>(
        std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));
}

TrainedModel train(const NetworkSpec& spec, const Dataset& data,
                   const std::optional<SampleWeights>& weights, const Dataset& validation) {
    Engine engine(spec);
    if (data.empty()) throw ConfigError("train: empty dataset");
    check_input_dims(spec, data.images().front());
    if (data.n_classes() > spec.n_classes)
        throw DimensionError("train: dataset has more classes than the network output");
    const SampleWeights w = normalized_weights(weights, data.size());

    Rng rng = make_rng(spec.seed);
    auto params = engine.make_params();
    engine.init_params(params, rng);
    auto grads = engine.make_params();
    PassState st = engine.make_state();

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    double best_acc = -1.0;
    std::vector<std::vector<double>> best_params;

    const int batch_size = std::max(1, spec.batch_size);
    for (int epoch = 0; epoch < spec.epochs; ++epoch) {
        const double lr = spec.lr.rate_at(epoch);
        if (spec.shuffle) std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            const double inv_batch = 1.0 / static_cast<double>(end - start);
            for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t i = order[k];
                const double* x = data.images()[i].pixels.data();
                engine.forward(params, x, st, /*training=*/true, &rng);
                engine.backward(params, x, data.labels()[i], w[i] * inv_batch, st, grads);
            }
            for (std::size_t l = 0; l < params.size(); ++l)
                simd::axpy(-lr, grads[l].data(), params[l].data(), params[l].size());
        }
        if (!validation.empty()) {
            const double acc = evaluate_accuracy(engine, params, validation);
            if (acc > best_acc) {
                best_acc = acc;
                best_params = params;
            }
        }
    }
    if (validation.empty()) {
        best_params = params;
        best_acc = 0.0;
    }
    return TrainedModel(spec, std::move(best_params), std::max(best_acc, 0.0));
}

double gradient_check(const NetworkSpec& spec, const GradCheckBatch& batch) {
    for (const LayerSpec& layer : spec.layers)
        if (layer.regularizer != RegKind::None)
            throw ConfigError("gradient_check: regularizers must be disabled");
    Engine engine(spec);
    if (batch.inputs.empty()) throw ConfigError("gradient_check: empty batch");
    const SampleWeights w = normalized_weights(batch.weights, batch.inputs.size());

    Rng rng = make_rng(spec.seed);
    auto params = engine.make_params();
    engine.init_params(params, rng);
    PassState st = engine.make_state();

    const double inv_n = 1.0 / static_cast<double>(batch.inputs.size());
    auto loss_at = [&](const std::vector<std::vector<double>>& p) {
        double loss = 0.0;
        for (std::size_t i = 0; i < batch.inputs.size(); ++i) {
            const auto probs = engine.infer(p, batch.inputs[i].pixels.data(), st);
            loss += w[i] * inv_n * cross_entropy(probs, batch.labels[i]);
        }
        return loss;
    };

    auto grads = engine.make_params();
    for (std::size_t i = 0; i < batch.inputs.size(); ++i) {
        const double* x = batch.inputs[i].pixels.data();
        engine.forward(params, x, st, /*training=*/true, &rng);
        engine.backward(params, x, batch.labels[i], w[i] * inv_n, st, grads);
    }

    const double h = 1e-5;
    double max_rel = 0.0;
    for (std::size_t l = 0; l < params.size(); ++l) {
        for (std::size_t i = 0; i < params[l].size(); ++i) {
            const double saved = params[l][i];
            params[l][i] = saved + h;
            const double lp = loss_at(params);
            params[l][i] = saved - h;
            const double lm = loss_at(params);
            params[l][i] = saved;
            const double gn = (lp - lm) / (2.0 * h);
            const double ga = grads[l][i];
            const double rel =
                std::abs(ga - gn) / std::max({std::abs(ga), std::abs(gn), 1e-8});
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

std::vector<std::uint8_t> dropconnect_mask(std::size_t weight_count, double rate,
                                           std::uint64_t seed) {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropconnect_mask: rate must be in [0,1)");
    std::vector<std::uint8_t> mask(weight_count);
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& m : mask) m = u(rng) >= rate ? 1 : 0;
    return mask;
}

} // namespace mnet::nnet
