#include "mnet/ensemble.hpp"

#include "mnet/errors.hpp"
#include "mnet/parallel.hpp"
#include "mnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mnet::ensemble {

std::vector<double> pre_emphasis_raw(const std::vector<std::int8_t>& targets,
                                     const std::vector<double>& outputs,
                                     const PreEmphasisParams& params) {
    if (targets.size() != outputs.size())
        throw DimensionError("pre_emphasis: target/output length mismatch");
    if (params.alpha < 0.0 || params.alpha > 1.0 || params.beta < 0.0 || params.beta > 1.0)
        throw ConfigError("pre_emphasis: alpha and beta must be in [0,1]");
    std::vector<double> w(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double o = outputs[i];
        if (o < -1.0 || o > 1.0) throw ConfigError("pre_emphasis: output outside [-1,1]");
        const double t = targets[i];
        const double err = (t - o) * (t - o);
        const double border = 1.0 - o * o;
        w[i] = params.alpha +
               (1.0 - params.alpha) * (params.beta * err + (1.0 - params.beta) * border);
    }
    return w;
}

nnet::SampleWeights pre_emphasis_weights(const std::vector<std::int8_t>& targets,
                                         const std::vector<double>& outputs,
                                         const PreEmphasisParams& params) {
    std::vector<double> w = pre_emphasis_raw(targets, outputs, params);
    double total = 0.0;
    for (double v : w) total += v;
    if (total == 0.0)
        // all samples perfectly classified under pure-error emphasis;
        // fall back to uniform rather than degenerate weights
        return nnet::SampleWeights(w.size(), 1.0);
    const double mean = total / static_cast<double>(w.size());
    for (double& v : w) v /= mean;
    return w;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, double fraction, std::uint64_t seed) {
    if (n == 0) throw ConfigError("bootstrap: empty input");
    if (fraction <= 0.0) throw ConfigError("bootstrap: fraction must be positive");
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::vector<std::size_t> indices(count);
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (auto& i : indices) i = pick(rng);
    return indices;
}

Dataset bootstrap(const Dataset& data, double fraction, std::uint64_t seed) {
    return data.subset(bootstrap_indices(data.size(), fraction, seed), "bootstrap");
}

Dataset switch_labels(const Dataset& data, double rate, std::uint64_t seed) {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("switch_labels: rate must be in [0,1)");
    if (data.n_classes() < 2) throw ConfigError("switch_labels: need at least 2 classes");
    const auto n_switch =
        static_cast<std::size_t>(std::floor(rate * static_cast<double>(data.size())));
    std::vector<int> labels = data.labels();
    Rng rng = make_rng(seed);
    // partial Fisher-Yates: first n_switch entries are a uniform sample
    // without replacement
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < n_switch; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
        std::swap(order[i], order[pick(rng)]);
    }
    std::uniform_int_distribution<int> other(0, data.n_classes() - 2);
    for (std::size_t i = 0; i < n_switch; ++i) {
        const std::size_t idx = order[i];
        int replacement = other(rng);
        if (replacement >= labels[idx]) ++replacement; // uniform over different classes
        labels[idx] = replacement;
    }
    return Dataset(data.images(), std::move(labels), data.n_classes(), "switched");
}

FusionNodePtr make_node(LeafNode node) { return std::make_shared<FusionNode>(FusionNode{std::move(node)}); }
FusionNodePtr make_node(BaggedNode node) { return std::make_shared<FusionNode>(FusionNode{std::move(node)}); }
FusionNodePtr make_node(SwitchedNode node) { return std::make_shared<FusionNode>(FusionNode{std::move(node)}); }
FusionNodePtr make_node(EcocStageNode node) { return std::make_shared<FusionNode>(FusionNode{std::move(node)}); }
FusionNodePtr make_node(ComboNode node) { return std::make_shared<FusionNode>(FusionNode{std::move(node)}); }

long nominal_size(const FusionNode& node) {
    return std::visit(
        [](const auto& n) -> long {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                return 1;
            } else if constexpr (std::is_same_v<T, BaggedNode>) {
                return n.params.member_count * nominal_size(*n.child);
            } else if constexpr (std::is_same_v<T, SwitchedNode>) {
                return n.params.member_count * nominal_size(*n.child);
            } else if constexpr (std::is_same_v<T, EcocStageNode>) {
                return nominal_size(*n.second_level) + (n.keep_stage1_voter ? 1 : 0);
            } else {
                long total = 0;
                for (const ComboChild& c : n.children) {
                    if (c.weight < 1) throw ConfigError("combo: weights must be >= 1");
                    total += c.weight * nominal_size(*c.node);
                }
                return total;
            }
        },
        node.value);
}

long leaf_count(const FusionNode& node) {
    return std::visit(
        [](const auto& n) -> long {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                return 1;
            } else if constexpr (std::is_same_v<T, BaggedNode>) {
                return n.params.member_count * leaf_count(*n.child);
            } else if constexpr (std::is_same_v<T, SwitchedNode>) {
                return n.params.member_count * leaf_count(*n.child);
            } else if constexpr (std::is_same_v<T, EcocStageNode>) {
                return n.matrix.m_dichotomies() * (leaf_count(*n.second_level) + 1);
            } else {
                long total = 0;
                for (const ComboChild& c : n.children) total += leaf_count(*c.node);
                return total;
            }
        },
        node.value);
}

namespace {

using aggregate::VoteTally;

struct TrainContext {
    const std::map<std::string, Dataset>* datasets = nullptr;
    const Dataset* validation = nullptr;
    const Dataset* current = nullptr; // combinator-provided training data
    const nnet::SampleWeights* weights = nullptr;
    std::uint64_t seed = 0;
};

void collect_dataset_ids(const FusionNode& node, std::set<std::string>& ids) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                if (n.dataset_id != "@dichotomy") ids.insert(n.dataset_id);
            } else if constexpr (std::is_same_v<T, BaggedNode> ||
                                 std::is_same_v<T, SwitchedNode>) {
                collect_dataset_ids(*n.child, ids);
            } else if constexpr (std::is_same_v<T, EcocStageNode>) {
                ids.insert(n.dataset_id);
            } else {
                for (const ComboChild& c : n.children) collect_dataset_ids(*c.node, ids);
            }
        },
        node.value);
}

const Dataset& lookup_dataset(const TrainContext& ctx, const std::string& id) {
    const auto it = ctx.datasets->find(id);
    if (it == ctx.datasets->end()) throw ConfigError("unresolved dataset id: " + id);
    return it->second;
}

// Training data feeding a combinator: the data its parent provided, else
// the unique dataset named by the subtree's leaves.
const Dataset& resolve_subtree_dataset(const FusionNode& subtree, const TrainContext& ctx) {
    if (ctx.current) return *ctx.current;
    std::set<std::string> ids;
    collect_dataset_ids(subtree, ids);
    if (ids.size() != 1)
        throw ConfigError("combinator subtree must reference exactly one dataset, found " +
                          std::to_string(ids.size()));
    return lookup_dataset(ctx, *ids.begin());
}

std::shared_ptr<TrainedEnsemble> train_node(const FusionNode& node, const TrainContext& ctx);

double node_error_on(const TrainedEnsemble& trained, const Dataset& validation) {
    if (validation.empty()) return -1.0;
    const auto tallies = predict_fusion(trained, validation.images());
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < tallies.size(); ++i)
        if (aggregate::plurality(tallies[i]).cls != validation.labels()[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(validation.size());
}

// Fills in zero ("infer") fields from the training data.
nnet::NetworkSpec concretize_spec(nnet::NetworkSpec spec, const Dataset& data,
                                  std::uint64_t seed) {
    if (spec.input_h == 0 || spec.input_w == 0) {
        spec.input_h = data.image_height();
        spec.input_w = data.image_width();
        spec.input_c = 1;
    }
    if (spec.n_classes == 0) {
        spec.n_classes = data.n_classes();
        if (!spec.layers.empty() && spec.layers.back().kind == nnet::LayerKind::SoftmaxOutput &&
            spec.layers.back().units == 0)
            spec.layers.back().units = spec.n_classes;
    }
    spec.seed = seed;
    return spec;
}

const Dataset& usable_validation(const TrainContext& ctx, const Dataset& train_data) {
    static const Dataset empty;
    if (!ctx.validation || ctx.validation->empty()) return empty;
    if (ctx.validation->image_height() != train_data.image_height() ||
        ctx.validation->image_width() != train_data.image_width() ||
        ctx.validation->n_classes() != train_data.n_classes())
        return empty;
    return *ctx.validation;
}

std::shared_ptr<TrainedEnsemble> train_leaf(const LeafNode& leaf, const TrainContext& ctx) {
    const Dataset& data =
        ctx.current ? *ctx.current
                    : lookup_dataset(ctx, leaf.dataset_id);
    const nnet::NetworkSpec spec = concretize_spec(leaf.spec, data, ctx.seed);
    std::optional<nnet::SampleWeights> weights;
    if (ctx.weights) weights = *ctx.weights;
    const Dataset& validation = usable_validation(ctx, data);
    nnet::TrainedModel model = nnet::train(spec, data, weights, validation);
    auto out = std::make_shared<TrainedEnsemble>();
    out->size = 1;
    out->validation_error = validation.empty() ? -1.0 : 1.0 - model.validation_accuracy();
    out->value = TrainedLeaf{std::move(model)};
    return out;
}

std::shared_ptr<TrainedEnsemble> train_members(const FusionNode& child_template,
                                               const TrainContext& ctx, int member_count,
                                               bool bagging, double fraction_or_rate,
                                               const FusionNode& self) {
    const Dataset& source = resolve_subtree_dataset(self, ctx);
    TrainedMembers members;
    members.members.resize(member_count);
    parallel_for(static_cast<std::size_t>(member_count), [&](std::size_t m) {
        const std::uint64_t member_seed = derive_seed(ctx.seed, m);
        TrainContext child_ctx = ctx;
        child_ctx.seed = derive_seed(member_seed, 1);
        Dataset member_data;
        nnet::SampleWeights member_weights;
        if (bagging) {
            const auto indices =
                bootstrap_indices(source.size(), fraction_or_rate, derive_seed(member_seed, 0));
            member_data = source.subset(indices, "bootstrap");
            if (ctx.weights) {
                member_weights.reserve(indices.size());
                for (std::size_t i : indices) member_weights.push_back((*ctx.weights)[i]);
                child_ctx.weights = &member_weights;
            }
        } else {
            member_data = switch_labels(source, fraction_or_rate, derive_seed(member_seed, 0));
        }
        child_ctx.current = &member_data;
        members.members[m] = train_node(child_template, child_ctx);
    });

    auto out = std::make_shared<TrainedEnsemble>();
    out->size = 0;
    for (const auto& m : members.members) out->size += m->size;
    out->value = std::move(members);
    if (ctx.validation) out->validation_error = node_error_on(*out, *ctx.validation);
    return out;
}

std::shared_ptr<TrainedEnsemble> train_ecoc(const EcocStageNode& stage, const TrainContext& ctx) {
    const Dataset& data =
        ctx.current ? *ctx.current : lookup_dataset(ctx, stage.dataset_id);
    const int m = stage.matrix.m_dichotomies();
    if (data.n_classes() != stage.matrix.n_classes())
        throw DimensionError("ecoc stage: dataset classes != code matrix rows");

    TrainedEcocStage trained;
    trained.matrix = stage.matrix;
    trained.decode_order = stage.decode_order;
    trained.keep_stage1_voter = stage.keep_stage1_voter;
    trained.n_classes = stage.matrix.n_classes();
    trained.stage1.resize(m);
    trained.second_level.resize(m);
    trained.transformers.resize(m);

    parallel_for(static_cast<std::size_t>(m), [&](std::size_t j) {
        const std::uint64_t col_seed = derive_seed(ctx.seed, j);
        const auto dichotomy = codes::derive_dichotomy(data, stage.matrix, static_cast<int>(j));
        Dataset bin_train = dichotomy.materialize(data);
        Dataset bin_val;
        if (ctx.validation && !ctx.validation->empty() &&
            ctx.validation->n_classes() == stage.matrix.n_classes()) {
            const auto val_dichotomy =
                codes::derive_dichotomy(*ctx.validation, stage.matrix, static_cast<int>(j));
            bin_val = val_dichotomy.materialize(*ctx.validation);
        }

        // (1) first-stage learner on the raw dichotomy
        const nnet::NetworkSpec s1_spec =
            concretize_spec(stage.stage1, bin_train, derive_seed(col_seed, 1));
        nnet::TrainedModel stage1 = nnet::train(s1_spec, bin_train, std::nullopt, bin_val);

        // (2) pre-emphasis weights from its own training outputs, o = 2p-1
        const auto probs = stage1.predict(bin_train.images());
        std::vector<double> outputs(probs.size());
        for (std::size_t i = 0; i < probs.size(); ++i) outputs[i] = 2.0 * probs[i][1] - 1.0;
        const nnet::SampleWeights weights =
            pre_emphasis_weights(dichotomy.targets, outputs, stage.pre_emphasis);

        // (3) second-level combinator, optionally over SDAE codes
        std::optional<nnet::SdaeTransformer> transformer;
        if (stage.sdae) {
            nnet::SdaeSpec sdae_spec = *stage.sdae;
            sdae_spec.seed = derive_seed(col_seed, 2);
            transformer = nnet::train_sdae(sdae_spec, bin_train);
            bin_train = transformer->transform(bin_train);
            if (!bin_val.empty()) bin_val = transformer->transform(bin_val);
        }
        TrainContext child_ctx;
        child_ctx.datasets = ctx.datasets;
        child_ctx.validation = &bin_val;
        child_ctx.current = &bin_train;
        child_ctx.weights = &weights;
        child_ctx.seed = derive_seed(col_seed, 3);
        trained.stage1[j] = std::move(stage1);
        trained.transformers[j] = std::move(transformer);
        trained.second_level[j] = train_node(*stage.second_level, child_ctx);
    });

    auto out = std::make_shared<TrainedEnsemble>();
    out->size = trained.second_level.front()->size + (stage.keep_stage1_voter ? 1 : 0);
    out->value = std::move(trained);
    if (ctx.validation) out->validation_error = node_error_on(*out, *ctx.validation);
    return out;
}

std::shared_ptr<TrainedEnsemble> train_combo(const ComboNode& combo, const TrainContext& ctx) {
    TrainedCombo trained;
    trained.children.resize(combo.children.size());
    parallel_for(combo.children.size(), [&](std::size_t i) {
        if (combo.children[i].weight < 1) throw ConfigError("combo: weights must be >= 1");
        TrainContext child_ctx = ctx;
        child_ctx.seed = derive_seed(ctx.seed, i);
        trained.children[i] = {train_node(*combo.children[i].node, child_ctx),
                               combo.children[i].weight};
    });
    auto out = std::make_shared<TrainedEnsemble>();
    out->size = 0;
    for (const auto& [child, weight] : trained.children) out->size += weight * child->size;
    out->value = std::move(trained);
    if (ctx.validation) out->validation_error = node_error_on(*out, *ctx.validation);
    return out;
}

std::shared_ptr<TrainedEnsemble> train_node(const FusionNode& node, const TrainContext& ctx) {
    return std::visit(
        [&](const auto& n) -> std::shared_ptr<TrainedEnsemble> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                return train_leaf(n, ctx);
            } else if constexpr (std::is_same_v<T, BaggedNode>) {
                TrainContext c = ctx;
                c.seed = derive_seed(ctx.seed, n.seed);
                return train_members(*n.child, c, n.params.member_count, /*bagging=*/true,
                                     n.params.population_fraction, node);
            } else if constexpr (std::is_same_v<T, SwitchedNode>) {
                TrainContext c = ctx;
                c.seed = derive_seed(ctx.seed, n.seed);
                return train_members(*n.child, c, n.params.member_count, /*bagging=*/false,
                                     n.params.switch_rate, node);
            } else if constexpr (std::is_same_v<T, EcocStageNode>) {
                return train_ecoc(n, ctx);
            } else {
                return train_combo(n, ctx);
            }
        },
        node.value);
}

void collect_leaf_models(const TrainedEnsemble& node,
                         std::vector<const nnet::TrainedModel*>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrainedLeaf>) {
                out.push_back(&n.model);
            } else if constexpr (std::is_same_v<T, TrainedMembers>) {
                for (const auto& m : n.members) collect_leaf_models(*m, out);
            } else if constexpr (std::is_same_v<T, TrainedCombo>) {
                for (const auto& [child, weight] : n.children) collect_leaf_models(*child, out);
            } else {
                // ECOC stages do not expose raw members upward
            }
        },
        node.value);
}

int tally_classes(const TrainedEnsemble& node) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrainedLeaf>) {
                return n.model.spec().n_classes;
            } else if constexpr (std::is_same_v<T, TrainedMembers>) {
                return tally_classes(*n.members.front());
            } else if constexpr (std::is_same_v<T, TrainedEcocStage>) {
                return n.n_classes;
            } else {
                int classes = 0;
                for (const auto& [child, weight] : n.children)
                    classes = std::max(classes, tally_classes(*child));
                return classes;
            }
        },
        node.value);
}

void predict_into(const TrainedEnsemble& node, const std::vector<Image>& images,
                  std::vector<VoteTally>& tallies, long weight);

void predict_ecoc(const TrainedEcocStage& stage, const std::vector<Image>& images,
                  std::vector<VoteTally>& tallies, long weight) {
    const int m = stage.matrix.m_dichotomies();
    // member_outputs[j][k][i] in [-1,1]
    std::vector<std::vector<std::vector<double>>> member_outputs(m);
    std::vector<std::vector<double>> stage1_outputs(stage.keep_stage1_voter ? m : 0);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t j) {
        const std::vector<Image>* inputs = &images;
        std::vector<Image> transformed;
        if (stage.transformers[j]) {
            transformed.reserve(images.size());
            for (const Image& img : images) {
                Image code;
                code.height = 1;
                code.width = stage.transformers[j]->code_width();
                code.pixels = stage.transformers[j]->encode(img.pixels);
                transformed.push_back(std::move(code));
            }
            inputs = &transformed;
        }
        std::vector<const nnet::TrainedModel*> models;
        collect_leaf_models(*stage.second_level[j], models);
        member_outputs[j].resize(models.size());
        for (std::size_t k = 0; k < models.size(); ++k) {
            const auto probs = models[k]->predict(*inputs);
            member_outputs[j][k].resize(images.size());
            for (std::size_t i = 0; i < images.size(); ++i)
                member_outputs[j][k][i] = 2.0 * probs[i][1] - 1.0;
        }
        if (stage.keep_stage1_voter) {
            const auto probs = stage.stage1[j].predict(images);
            stage1_outputs[j].resize(images.size());
            for (std::size_t i = 0; i < images.size(); ++i)
                stage1_outputs[j][i] = 2.0 * probs[i][1] - 1.0;
        }
    });

    const std::size_t members = member_outputs.front().size();
    std::vector<double> outputs(m);
    for (std::size_t i = 0; i < images.size(); ++i) {
        VoteTally& tally = tallies[i];
        if (stage.decode_order == DecodeOrder::MemberWise) {
            for (std::size_t k = 0; k < members; ++k) {
                for (int j = 0; j < m; ++j) outputs[j] = member_outputs[j][k][i];
                tally.votes[codes::hamming_decode(stage.matrix, outputs).cls] += weight;
            }
        } else {
            // per-dichotomy majority of hardened member decisions, then one
            // decode; the decoded class receives the full member count
            for (int j = 0; j < m; ++j) {
                long balance = 0;
                for (std::size_t k = 0; k < members; ++k)
                    balance += member_outputs[j][k][i] < 0.0 ? -1 : 1;
                outputs[j] = balance < 0 ? -1.0 : 1.0;
            }
            tally.votes[codes::hamming_decode(stage.matrix, outputs).cls] +=
                weight * static_cast<long>(members);
        }
        if (stage.keep_stage1_voter) {
            for (int j = 0; j < m; ++j) outputs[j] = stage1_outputs[j][i];
            tally.votes[codes::hamming_decode(stage.matrix, outputs).cls] += weight;
        }
    }
}

void predict_into(const TrainedEnsemble& node, const std::vector<Image>& images,
                  std::vector<VoteTally>& tallies, long weight) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrainedLeaf>) {
                const auto probs = n.model.predict(images);
                for (std::size_t i = 0; i < images.size(); ++i) {
                    const auto arg = std::distance(
                        probs[i].begin(), std::max_element(probs[i].begin(), probs[i].end()));
                    tallies[i].votes[arg] += weight;
                }
            } else if constexpr (std::is_same_v<T, TrainedMembers>) {
                for (const auto& member : n.members)
                    predict_into(*member, images, tallies, weight);
            } else if constexpr (std::is_same_v<T, TrainedEcocStage>) {
                predict_ecoc(n, images, tallies, weight);
            } else {
                for (const auto& [child, child_weight] : n.children)
                    predict_into(*child, images, tallies, weight * child_weight);
            }
        },
        node.value);
}

} // namespace

TrainedEnsemble train_fusion(const FusionNode& node,
                             const std::map<std::string, Dataset>& datasets,
                             const Dataset& validation, std::uint64_t seed) {
    TrainContext ctx;
    ctx.datasets = &datasets;
    ctx.validation = &validation;
    ctx.seed = seed;
    auto trained = train_node(node, ctx);
    if (trained->size != nominal_size(node))
        throw DimensionError("trained ensemble size disagrees with nominal size");
    return std::move(*trained);
}

std::vector<aggregate::VoteTally> predict_fusion(const TrainedEnsemble& ensemble,
                                                 const std::vector<Image>& images) {
    std::vector<aggregate::VoteTally> tallies(images.size());
    const int n_classes = tally_classes(ensemble);
    for (auto& t : tallies) {
        t.votes.assign(n_classes, 0);
        t.size = ensemble.size;
        t.validation_error = ensemble.validation_error;
    }
    predict_into(ensemble, images, tallies, 1);
    return tallies;
}

} // namespace mnet::ensemble
