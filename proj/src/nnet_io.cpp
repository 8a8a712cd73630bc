#include "mnet/nnet_json.hpp"

#include "mnet/errors.hpp"

#include <cstring>
#include <fstream>

namespace mnet::nnet {
namespace {

constexpr char kMagic[] = "NNET1";
constexpr std::size_t kMagicLen = 5;

const char* kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::Dense: return "dense";
        case LayerKind::Conv: return "conv";
        case LayerKind::MaxPool: return "maxpool";
        case LayerKind::SoftmaxOutput: return "softmax-output";
    }
    return "dense";
}

LayerKind kind_from(const std::string& s) {
    if (s == "dense") return LayerKind::Dense;
    if (s == "conv") return LayerKind::Conv;
    if (s == "maxpool") return LayerKind::MaxPool;
    if (s == "softmax-output") return LayerKind::SoftmaxOutput;
    throw ConfigError("unknown layer kind: " + s);
}

const char* act_name(Activation a) {
    switch (a) {
        case Activation::None: return "none";
        case Activation::Relu: return "relu";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "none";
}

Activation act_from(const std::string& s) {
    if (s == "none") return Activation::None;
    if (s == "relu") return Activation::Relu;
    if (s == "sigmoid") return Activation::Sigmoid;
    throw ConfigError("unknown activation: " + s);
}

const char* reg_name(RegKind r) {
    switch (r) {
        case RegKind::None: return "none";
        case RegKind::Dropout: return "dropout";
        case RegKind::DropConnect: return "dropconnect";
    }
    return "none";
}

RegKind reg_from(const std::string& s) {
    if (s == "none") return RegKind::None;
    if (s == "dropout") return RegKind::Dropout;
    if (s == "dropconnect") return RegKind::DropConnect;
    throw ConfigError("unknown regularizer: " + s);
}

} // namespace

void to_json(nlohmann::json& j, const LayerSpec& spec) {
    j = nlohmann::json{{"kind", kind_name(spec.kind)}};
    switch (spec.kind) {
        case LayerKind::Dense:
        case LayerKind::SoftmaxOutput: j["units"] = spec.units; break;
        case LayerKind::Conv:
            j["filter_h"] = spec.filter_h;
            j["filter_w"] = spec.filter_w;
            j["filter_count"] = spec.filter_count;
            j["stride"] = spec.stride;
            break;
        case LayerKind::MaxPool:
            j["window"] = spec.filter_h;
            j["stride"] = spec.stride;
            break;
    }
    if (spec.activation != Activation::None) j["activation"] = act_name(spec.activation);
    if (spec.regularizer != RegKind::None) {
        j["regularizer"] = reg_name(spec.regularizer);
        j["rate"] = spec.reg_rate;
    }
}

void from_json(const nlohmann::json& j, LayerSpec& spec) {
    spec = LayerSpec{};
    spec.kind = kind_from(j.at("kind").get<std::string>());
    switch (spec.kind) {
        case LayerKind::Dense:
        case LayerKind::SoftmaxOutput: spec.units = j.at("units").get<int>(); break;
        case LayerKind::Conv:
            spec.filter_h = j.at("filter_h").get<int>();
            spec.filter_w = j.at("filter_w").get<int>();
            spec.filter_count = j.at("filter_count").get<int>();
            spec.stride = j.value("stride", 1);
            break;
        case LayerKind::MaxPool:
            spec.filter_h = spec.filter_w = j.at("window").get<int>();
            spec.stride = j.value("stride", spec.filter_h);
            break;
    }
    spec.activation = act_from(j.value("activation", "none"));
    spec.regularizer = reg_from(j.value("regularizer", "none"));
    spec.reg_rate = j.value("rate", 0.0);
}

void to_json(nlohmann::json& j, const NetworkSpec& spec) {
    j = nlohmann::json{
        {"layers", spec.layers},
        {"input_h", spec.input_h},
        {"input_w", spec.input_w},
        {"input_c", spec.input_c},
        {"n_classes", spec.n_classes},
        {"lr", {{"initial", spec.lr.initial}, {"decay", spec.lr.decay}, {"floor", spec.lr.floor}}},
        {"batch_size", spec.batch_size},
        {"epochs", spec.epochs},
        {"seed", spec.seed},
        {"shuffle", spec.shuffle},
    };
}

void from_json(const nlohmann::json& j, NetworkSpec& spec) {
    spec = NetworkSpec{};
    spec.layers = j.at("layers").get<std::vector<LayerSpec>>();
    spec.input_h = j.at("input_h").get<int>();
    spec.input_w = j.at("input_w").get<int>();
    spec.input_c = j.value("input_c", 1);
    spec.n_classes = j.at("n_classes").get<int>();
    if (j.contains("lr")) {
        const auto& lr = j.at("lr");
        spec.lr.initial = lr.value("initial", spec.lr.initial);
        spec.lr.decay = lr.value("decay", spec.lr.decay);
        spec.lr.floor = lr.value("floor", spec.lr.floor);
    }
    spec.batch_size = j.value("batch_size", 32);
    spec.epochs = j.value("epochs", 10);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.shuffle = j.value("shuffle", true);
}

void to_json(nlohmann::json& j, const SdaeSpec& spec) {
    j = nlohmann::json{
        {"widths", spec.widths},         {"corruption", spec.corruption},
        {"epochs", spec.epochs},         {"learning_rate", spec.learning_rate},
        {"batch_size", spec.batch_size}, {"seed", spec.seed},
    };
}

void from_json(const nlohmann::json& j, SdaeSpec& spec) {
    spec = SdaeSpec{};
    spec.widths = j.at("widths").get<std::vector<int>>();
    spec.corruption = j.value("corruption", 0.3);
    spec.epochs = j.value("epochs", 10);
    spec.learning_rate = j.value("learning_rate", 0.05);
    spec.batch_size = j.value("batch_size", 32);
    spec.seed = j.value("seed", std::uint64_t{0});
}

void TrainedModel::save(const std::string& path) const {
    nlohmann::json header;
    header["spec"] = spec_;
    header["validation_accuracy"] = validation_accuracy_;
    std::vector<std::uint64_t> sizes;
    for (const auto& p : params_) sizes.push_back(p.size());
    header["param_sizes"] = sizes;
    const std::string header_str = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write model file " + path);
    out.write(kMagic, kMagicLen);
    const std::uint32_t hlen = static_cast<std::uint32_t>(header_str.size());
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen)); // little-endian host
    out.write(header_str.data(), hlen);
    for (const auto& p : params_)
        out.write(reinterpret_cast<const char*>(p.data()),
                  static_cast<std::streamsize>(p.size() * sizeof(double)));
    if (!out) throw DataError("short write to model file " + path);
}

TrainedModel TrainedModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file " + path);
    char magic[kMagicLen];
    in.read(magic, kMagicLen);
    if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0)
        throw DataError("not a NNET1 model container: " + path);
    std::uint32_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string header_str(hlen, '\0');
    in.read(header_str.data(), hlen);
    if (!in) throw DataError("truncated model header: " + path);
    const nlohmann::json header = nlohmann::json::parse(header_str);

    TrainedModel model;
    model.spec_ = header.at("spec").get<NetworkSpec>();
    model.validation_accuracy_ = header.value("validation_accuracy", 0.0);
    for (std::uint64_t size : header.at("param_sizes").get<std::vector<std::uint64_t>>()) {
        std::vector<double> p(size);
        in.read(reinterpret_cast<char*>(p.data()),
                static_cast<std::streamsize>(size * sizeof(double)));
        model.params_.push_back(std::move(p));
    }
    if (!in) throw DataError("truncated model parameters: " + path);
    return model;
}

} // namespace mnet::nnet
