#pragma once

#include "mnet/augment.hpp"
#include "mnet/dataset.hpp"
#include "mnet/ensemble.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mnet::harness {

// Data sources: IDX files (gzip ok) or a self-generated synthetic corpus.
struct DatasetSources {
    std::string train_images, train_labels;
    std::string test_images, test_labels; // optional; empty = split from train
    int n_classes = 10;
    std::size_t synthetic_train = 0, synthetic_test = 0; // used when paths empty
    std::uint64_t synthetic_seed = 12345;
};

struct SplitConfig {
    SplitSpec spec;
    SplitSeed seed = SplitSeed::canonical();
};

struct AugmentDef {
    std::string builder; // "dataset1" | "dataset2" | "plan"
    std::string source = "train";
    augment::AugmentParams params;
    augment::AugmentPlan plan; // for builder == "plan"
};

struct TreeDef {
    ensemble::FusionNodePtr root;
    nlohmann::json raw; // kept for grid-search parameter rewrites
};

struct ExperimentConfig {
    DatasetSources sources;
    SplitConfig split;
    std::map<std::string, AugmentDef> augments;
    std::vector<std::string> tree_names; // declaration order
    std::map<std::string, TreeDef> trees;
    std::string cross_rule = "degree_of_certainty"; // or "plurality_sum", "soft"
    nlohmann::json grids;
    int runs = 1;
    std::uint64_t base_seed = 0;
    std::string output_dir = "out";
    nlohmann::json raw;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

ensemble::FusionNodePtr parse_tree(const nlohmann::json& j);
nlohmann::json tree_to_json(const ensemble::FusionNode& node);

struct PreparedData {
    Dataset train, validation, test;
};
PreparedData prepare_data(const ExperimentConfig& config);

// Named dataset map for a run: "train" plus every augment, built with
// per-run seeds.
std::map<std::string, Dataset> build_dataset_map(const ExperimentConfig& config,
                                                 const Dataset& train, std::uint64_t seed);

struct RunReport {
    std::vector<double> per_run_errors; // percent
    double mean_error = 0.0;
    double std_error = 0.0;
    std::vector<std::string> decision_log_paths;
    double wall_clock_seconds = 0.0;
    std::string config_fingerprint;

    nlohmann::json to_json() const;
};

// Executes `runs` full train/evaluate cycles with seeds base..base+R-1,
// writes per-run decision logs and an atomic report JSON under output_dir.
RunReport run_experiment(const ExperimentConfig& config);

struct GridPoint {
    nlohmann::json params;
    double score = 0.0; // validation (or CV) accuracy
};

struct GridResult {
    nlohmann::json best_params;
    double best_score = 0.0;
    bool tie = false;
    std::vector<GridPoint> table;
};

// Exhaustive lattice search for one tree. (alpha, beta) axes select by
// 5-fold cross-validation over the training split; other axes train on the
// training split and score on validation. The test split is never
// reachable from here.
GridResult grid_search(const ExperimentConfig& config, const std::string& tree_name);

// True when the last two accuracies along a monotone axis differ by less
// than epsilon. Throws ConfigError for axes shorter than 2 points.
bool axis_saturated(const std::vector<double>& accuracies, double epsilon = 0.0005);

// Reads a decision log, renders misclassified digits annotated
// "true>predicted" into <out_prefix>.pgm and writes <out_prefix>.csv.
// Returns the misclassified count.
std::size_t report_misclassified(const std::string& decision_log_path, const Dataset& test,
                                 const std::string& out_prefix);

std::string fingerprint(const nlohmann::json& j);

} // namespace mnet::harness
