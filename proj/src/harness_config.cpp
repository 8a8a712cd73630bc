#include "mnet/harness.hpp"

#include "mnet/errors.hpp"
#include "mnet/nnet_json.hpp"

#include <fstream>
#include <functional>

namespace mnet::harness {
namespace {

using nlohmann::json;

// NetworkSpec inside a tree: geometry and class count may be omitted (0)
// and are then inferred from the training data.
nnet::NetworkSpec parse_net(const json& j) {
    json filled = j;
    if (!filled.contains("input_h")) filled["input_h"] = 0;
    if (!filled.contains("input_w")) filled["input_w"] = 0;
    if (!filled.contains("n_classes")) filled["n_classes"] = 0;
    return filled.get<nnet::NetworkSpec>();
}

codes::CodeMatrix parse_code(const json& j, int n_classes) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "ova") return codes::ova_matrix(n_classes);
        if (name == "ovo") return codes::ovo_matrix(n_classes);
        if (name == "ecoc") {
            if (n_classes != 10)
                throw ConfigError("the built-in ecoc code is 10-class; got n_classes=" +
                                  std::to_string(n_classes));
            return codes::ecoc_matrix_10x15();
        }
        throw ConfigError("unknown code matrix name: " + name);
    }
    // explicit matrix: {"rows": n, "columns": m, "entries": [...]}
    const int n = j.at("rows").get<int>();
    const int m = j.at("columns").get<int>();
    auto entries = j.at("entries").get<std::vector<int>>();
    std::vector<std::int8_t> e(entries.begin(), entries.end());
    return codes::CodeMatrix(n, m, std::move(e));
}

ensemble::DecodeOrder parse_decode_order(const std::string& s) {
    if (s == "dichotomy-wise") return ensemble::DecodeOrder::DichotomyWise;
    if (s == "member-wise") return ensemble::DecodeOrder::MemberWise;
    throw ConfigError("decode_order must be dichotomy-wise or member-wise, got " + s);
}

augment::AugmentParams parse_augment_params(const json& j) {
    augment::AugmentParams p;
    p.max_rotation_degrees = j.value("max_rotation_degrees", p.max_rotation_degrees);
    p.max_translation = j.value("max_translation", p.max_translation);
    p.smooth_sigma_min = j.value("smooth_sigma_min", p.smooth_sigma_min);
    p.smooth_sigma_max = j.value("smooth_sigma_max", p.smooth_sigma_max);
    p.elastic_sigma = j.value("elastic_sigma", p.elastic_sigma);
    p.elastic_alpha = j.value("elastic_alpha", p.elastic_alpha);
    return p;
}

augment::AugmentPlan parse_plan(const json& j) {
    augment::AugmentPlan plan;
    plan.replication = j.value("replication", 1);
    for (const auto& s : j.at("steps")) {
        const std::string op = s.at("op").get<std::string>();
        if (op == "rotate")
            plan.steps.push_back(augment::RotateStep{s.at("max_degrees").get<double>()});
        else if (op == "translate")
            plan.steps.push_back(augment::TranslateStep{s.at("max_shift").get<int>()});
        else if (op == "smooth")
            plan.steps.push_back(augment::SmoothStep{s.at("sigma_min").get<double>(),
                                                     s.at("sigma_max").get<double>()});
        else if (op == "elastic")
            plan.steps.push_back(
                augment::ElasticStep{s.at("sigma").get<double>(), s.at("alpha").get<double>()});
        else
            throw ConfigError("unknown augment step op: " + op);
    }
    return plan;
}

} // namespace

ensemble::FusionNodePtr parse_tree(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError("fusion node must be an object with a \"type\" field");
    const std::string type = j.at("type").get<std::string>();
    if (type == "leaf") {
        ensemble::LeafNode leaf;
        leaf.spec = parse_net(j.at("net"));
        leaf.dataset_id = j.value("dataset", std::string{});
        return ensemble::make_node(std::move(leaf));
    }
    if (type == "bagging") {
        ensemble::BaggedNode node;
        node.params.member_count = j.at("members").get<int>();
        node.params.population_fraction = j.value("fraction", 1.0);
        node.child = parse_tree(j.at("child"));
        node.seed = j.value("seed", std::uint64_t{0});
        if (node.params.member_count < 1) throw ConfigError("bagging members must be >= 1");
        if (node.params.population_fraction <= 0.0)
            throw ConfigError("bagging fraction must be positive");
        return ensemble::make_node(std::move(node));
    }
    if (type == "switching") {
        ensemble::SwitchedNode node;
        node.params.member_count = j.at("members").get<int>();
        node.params.switch_rate = j.at("rate").get<double>();
        node.child = parse_tree(j.at("child"));
        node.seed = j.value("seed", std::uint64_t{0});
        if (node.params.member_count < 1) throw ConfigError("switching members must be >= 1");
        if (node.params.switch_rate < 0.0 || node.params.switch_rate >= 1.0)
            throw ConfigError("switching rate must lie in [0, 1)");
        return ensemble::make_node(std::move(node));
    }
    if (type == "ecoc") {
        const int n_classes = j.value("n_classes", 10);
        ensemble::EcocStageNode node{parse_code(j.value("code", json("ecoc")), n_classes),
                                     j.value("dataset", std::string{}),
                                     {},
                                     {},
                                     nullptr,
                                     std::nullopt};
        if (j.contains("pre_emphasis")) {
            node.pre_emphasis.alpha = j.at("pre_emphasis").value("alpha", 1.0);
            node.pre_emphasis.beta = j.at("pre_emphasis").value("beta", 0.5);
            if (node.pre_emphasis.alpha < 0 || node.pre_emphasis.alpha > 1 ||
                node.pre_emphasis.beta < 0 || node.pre_emphasis.beta > 1)
                throw ConfigError("pre-emphasis alpha and beta must lie in [0, 1]");
        }
        if (!j.contains("stage1"))
            throw ConfigError("ecoc node needs a stage1 net (the pre-emphasis learner)");
        node.stage1 = parse_net(j.at("stage1"));
        if (j.contains("second_level")) {
            node.second_level = parse_tree(j.at("second_level"));
        } else {
            // plain ECOC: one learner per dichotomy, same topology as stage1
            ensemble::LeafNode leaf;
            leaf.spec = node.stage1;
            leaf.dataset_id = "@dichotomy";
            node.second_level = ensemble::make_node(std::move(leaf));
        }
        if (j.contains("sdae")) node.sdae = j.at("sdae").get<nnet::SdaeSpec>();
        node.decode_order =
            parse_decode_order(j.value("decode_order", std::string("dichotomy-wise")));
        node.keep_stage1_voter = j.value("keep_stage1_voter", false);
        return ensemble::make_node(std::move(node));
    }
    if (type == "combo") {
        ensemble::ComboNode node;
        for (const auto& c : j.at("children")) {
            ensemble::ComboChild child;
            child.weight = c.value("weight", 1);
            if (child.weight < 1) throw ConfigError("combo weights must be >= 1");
            child.node = parse_tree(c.at("node"));
            node.children.push_back(std::move(child));
        }
        if (node.children.empty()) throw ConfigError("combo node needs at least one child");
        return ensemble::make_node(std::move(node));
    }
    throw ConfigError("unknown fusion node type: " + type);
}

nlohmann::json tree_to_json(const ensemble::FusionNode& node) {
    using namespace ensemble;
    return std::visit(
        [](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                json net;
                nnet::to_json(net, n.spec);
                return json{{"type", "leaf"}, {"dataset", n.dataset_id}, {"net", net}};
            } else if constexpr (std::is_same_v<T, BaggedNode>) {
                return json{{"type", "bagging"},
                            {"members", n.params.member_count},
                            {"fraction", n.params.population_fraction},
                            {"child", tree_to_json(*n.child)}};
            } else if constexpr (std::is_same_v<T, SwitchedNode>) {
                return json{{"type", "switching"},
                            {"members", n.params.member_count},
                            {"rate", n.params.switch_rate},
                            {"child", tree_to_json(*n.child)}};
            } else if constexpr (std::is_same_v<T, EcocStageNode>) {
                json out{{"type", "ecoc"},
                         {"dataset", n.dataset_id},
                         {"n_classes", n.matrix.n_classes()},
                         {"pre_emphasis",
                          {{"alpha", n.pre_emphasis.alpha}, {"beta", n.pre_emphasis.beta}}},
                         {"decode_order", n.decode_order == DecodeOrder::DichotomyWise
                                              ? "dichotomy-wise"
                                              : "member-wise"},
                         {"keep_stage1_voter", n.keep_stage1_voter}};
                std::vector<int> entries;
                for (int c = 0; c < n.matrix.n_classes(); ++c)
                    for (int d = 0; d < n.matrix.m_dichotomies(); ++d)
                        entries.push_back(n.matrix.at(c, d));
                out["code"] = json{{"rows", n.matrix.n_classes()},
                                   {"columns", n.matrix.m_dichotomies()},
                                   {"entries", entries}};
                if (!n.stage1.layers.empty()) {
                    json net;
                    nnet::to_json(net, n.stage1);
                    out["stage1"] = net;
                }
                if (n.second_level) out["second_level"] = tree_to_json(*n.second_level);
                if (n.sdae) {
                    json s;
                    nnet::to_json(s, *n.sdae);
                    out["sdae"] = s;
                }
                return out;
            } else {
                json children = json::array();
                for (const auto& c : n.children)
                    children.push_back(json{{"weight", c.weight}, {"node", tree_to_json(*c.node)}});
                return json{{"type", "combo"}, {"children", children}};
            }
        },
        node.value);
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    ExperimentConfig cfg;
    cfg.raw = j;

    const json& ds = j.value("datasets", json::object());
    cfg.sources.train_images = ds.value("train_images", std::string{});
    cfg.sources.train_labels = ds.value("train_labels", std::string{});
    cfg.sources.test_images = ds.value("test_images", std::string{});
    cfg.sources.test_labels = ds.value("test_labels", std::string{});
    cfg.sources.n_classes = ds.value("n_classes", 10);
    if (ds.contains("synthetic")) {
        const json& s = ds.at("synthetic");
        cfg.sources.synthetic_train = s.value("train", std::size_t{0});
        cfg.sources.synthetic_test = s.value("test", std::size_t{0});
        cfg.sources.synthetic_seed = s.value("seed", std::uint64_t{12345});
    }
    const bool has_files = !cfg.sources.train_images.empty();
    const bool has_synth = cfg.sources.synthetic_train > 0;
    if (has_files == has_synth)
        throw ConfigError("datasets must name either IDX files or a synthetic corpus");

    if (!j.contains("split")) throw ConfigError("config needs a split section");
    const json& sp = j.at("split");
    cfg.split.spec.train_count = sp.at("train").get<std::size_t>();
    cfg.split.spec.validation_count = sp.at("validation").get<std::size_t>();
    cfg.split.spec.test_count = sp.value("test", std::size_t{0});
    if (sp.contains("seed") && !sp.at("seed").is_string())
        cfg.split.seed = SplitSeed::shuffled(sp.at("seed").get<std::uint64_t>());
    else if (sp.value("seed", "canonical") != std::string("canonical"))
        throw ConfigError("split seed must be \"canonical\" or an integer");

    const json augments = j.value("augments", json::object());
    for (const auto& [name, a] : augments.items()) {
        AugmentDef def;
        def.builder = a.at("builder").get<std::string>();
        def.source = a.value("source", std::string("train"));
        if (def.builder == "plan")
            def.plan = parse_plan(a);
        else if (def.builder == "dataset1" || def.builder == "dataset2")
            def.params = parse_augment_params(a.value("params", json::object()));
        else
            throw ConfigError("unknown augment builder: " + def.builder);
        cfg.augments.emplace(name, std::move(def));
    }

    if (!j.contains("trees") || j.at("trees").empty())
        throw ConfigError("config needs at least one tree");
    for (const auto& [name, t] : j.at("trees").items()) {
        TreeDef def;
        def.raw = t;
        def.root = parse_tree(t);
        cfg.tree_names.push_back(name);
        cfg.trees.emplace(name, std::move(def));
    }

    cfg.cross_rule = j.value("aggregation", json::object())
                         .value("cross", std::string("degree_of_certainty"));
    if (cfg.cross_rule != "degree_of_certainty" && cfg.cross_rule != "plurality_sum")
        throw ConfigError("cross aggregation rule must be degree_of_certainty or plurality_sum");

    cfg.grids = j.value("grids", json::object());
    cfg.runs = j.value("runs", 1);
    if (cfg.runs < 1) throw ConfigError("run count must be >= 1");
    cfg.base_seed = j.value("seed", std::uint64_t{0});
    cfg.output_dir = j.value("output_dir", std::string("out"));

    // leaves must reference declared datasets ("train", an augment name, or
    // "@dichotomy" inside an ECOC second level)
    for (const auto& name : cfg.tree_names) {
        std::vector<std::string> ids;
        std::function<void(const ensemble::FusionNode&, bool)> walk =
            [&](const ensemble::FusionNode& node, bool inside_ecoc) {
                std::visit(
                    [&](const auto& n) {
                        using T = std::decay_t<decltype(n)>;
                        if constexpr (std::is_same_v<T, ensemble::LeafNode>) {
                            if (!n.dataset_id.empty() &&
                                !(inside_ecoc && n.dataset_id == "@dichotomy"))
                                ids.push_back(n.dataset_id);
                        } else if constexpr (std::is_same_v<T, ensemble::BaggedNode> ||
                                             std::is_same_v<T, ensemble::SwitchedNode>) {
                            walk(*n.child, inside_ecoc);
                        } else if constexpr (std::is_same_v<T, ensemble::EcocStageNode>) {
                            if (!n.dataset_id.empty()) ids.push_back(n.dataset_id);
                            if (n.second_level) walk(*n.second_level, true);
                        } else {
                            for (const auto& c : n.children) walk(*c.node, inside_ecoc);
                        }
                    },
                    node.value);
            };
        walk(*cfg.trees.at(name).root, false);
        for (const auto& id : ids)
            if (id != "train" && !cfg.augments.count(id))
                throw ConfigError("tree " + name + " references undefined dataset " + id);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

} // namespace mnet::harness
