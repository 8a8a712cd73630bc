#pragma once

#include "mnet/aggregate.hpp"
#include "mnet/codes.hpp"
#include "mnet/dataset.hpp"
#include "mnet/nnet.hpp"
#include "mnet/sdae.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mnet::ensemble {

// w = alpha + (1-alpha) * [beta (t-o)^2 + (1-beta)(1-o^2)]
struct PreEmphasisParams {
    double alpha = 1.0; // alpha=1: uniform weights
    double beta = 0.5;
};

// Raw per-sample weights, exactly as the formula gives them.
std::vector<double> pre_emphasis_raw(const std::vector<std::int8_t>& targets,
                                     const std::vector<double>& outputs,
                                     const PreEmphasisParams& params);

// Raw weights normalized to mean 1 (the form consumed by training).
nnet::SampleWeights pre_emphasis_weights(const std::vector<std::int8_t>& targets,
                                         const std::vector<double>& outputs,
                                         const PreEmphasisParams& params);

struct BaggingParams {
    double population_fraction = 1.0; // B
    int member_count = 1;             // M
};

struct SwitchingParams {
    double switch_rate = 0.2; // S
    int member_count = 1;     // M
};

// round(B*N) draws with replacement, uniform, deterministic per seed.
std::vector<std::size_t> bootstrap_indices(std::size_t n, double fraction, std::uint64_t seed);
Dataset bootstrap(const Dataset& data, double fraction, std::uint64_t seed);

// Exactly floor(S*N) samples chosen without replacement get a uniformly
// chosen different label; images untouched.
Dataset switch_labels(const Dataset& data, double rate, std::uint64_t seed);

// How an ECOC stage turns second-level member outputs into class votes.
//   DichotomyWise: majority per dichotomy first, then one decode (M votes
//                  for the decoded class).
//   MemberWise:    the k-th member of every dichotomy forms one decoding
//                  committee (one vote per member index).
enum class DecodeOrder { DichotomyWise, MemberWise };

struct FusionNode;
using FusionNodePtr = std::shared_ptr<FusionNode>;

struct LeafNode {
    nnet::NetworkSpec spec;
    std::string dataset_id; // "@dichotomy" inside an ECOC second level
};

struct BaggedNode {
    BaggingParams params;
    FusionNodePtr child;
    std::uint64_t seed = 0;
};

struct SwitchedNode {
    SwitchingParams params;
    FusionNodePtr child;
    std::uint64_t seed = 0;
};

struct EcocStageNode {
    codes::CodeMatrix matrix;
    std::string dataset_id;
    PreEmphasisParams pre_emphasis;
    nnet::NetworkSpec stage1;   // first-stage binary learner template
    FusionNodePtr second_level; // subtree template per dichotomy
    std::optional<nnet::SdaeSpec> sdae; // transform dichotomy inputs first
    DecodeOrder decode_order = DecodeOrder::DichotomyWise;
    bool keep_stage1_voter = false;
};

struct ComboChild {
    FusionNodePtr node;
    int weight = 1;
};

struct ComboNode {
    std::vector<ComboChild> children;
};

struct FusionNode {
    std::variant<LeafNode, BaggedNode, SwitchedNode, EcocStageNode, ComboNode> value;
};

FusionNodePtr make_node(LeafNode node);
FusionNodePtr make_node(BaggedNode node);
FusionNodePtr make_node(SwitchedNode node);
FusionNodePtr make_node(EcocStageNode node);
FusionNodePtr make_node(ComboNode node);

// Statically computable tally size: Leaf 1, Bagged/Switched M * child,
// EcocStage = second-level leaf count (+1 with the stage-1 voter),
// WeightedCombo = sum of weight * child.
long nominal_size(const FusionNode& node);

// Count of trainable leaf models in the tree (EcocStage counts its
// dichotomies * second-level leaves, plus stage-1 learners).
long leaf_count(const FusionNode& node);

struct TrainedEnsemble;

struct TrainedLeaf {
    nnet::TrainedModel model;
};
struct TrainedMembers { // bagged or switched
    std::vector<std::shared_ptr<TrainedEnsemble>> members;
};
struct TrainedEcocStage {
    codes::CodeMatrix matrix{2, 2, {1, -1, -1, 1}};
    std::vector<nnet::TrainedModel> stage1;                         // per dichotomy
    std::vector<std::shared_ptr<TrainedEnsemble>> second_level;     // per dichotomy
    std::vector<std::optional<nnet::SdaeTransformer>> transformers; // per dichotomy
    DecodeOrder decode_order = DecodeOrder::DichotomyWise;
    bool keep_stage1_voter = false;
    int n_classes = 0;
};
struct TrainedCombo {
    std::vector<std::pair<std::shared_ptr<TrainedEnsemble>, int>> children;
};

struct TrainedEnsemble {
    std::variant<TrainedLeaf, TrainedMembers, TrainedEcocStage, TrainedCombo> value;
    long size = 0;               // nominal tally size
    double validation_error = -1; // fraction in [0,1]; <0 = not measured
};

// Recursive training. Leaves resolve their dataset_id against `datasets`;
// every random child receives a seed derived from (seed, child index) so
// concurrent and serial training agree. Throws ConfigError on unresolved
// dataset ids.
TrainedEnsemble train_fusion(const FusionNode& node,
                             const std::map<std::string, Dataset>& datasets,
                             const Dataset& validation, std::uint64_t seed);

// Per-sample vote tallies; tally.size always equals nominal_size(tree).
std::vector<aggregate::VoteTally> predict_fusion(const TrainedEnsemble& ensemble,
                                                 const std::vector<Image>& images);

} // namespace mnet::ensemble
