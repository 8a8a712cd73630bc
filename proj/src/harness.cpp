#include "mnet/harness.hpp"

#include "mnet/errors.hpp"
#include "mnet/idx.hpp"
#include "mnet/parallel.hpp"
#include "mnet/rng.hpp"
#include "mnet/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace mnet::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kAugmentStream = 0xA06;
constexpr std::uint64_t kTreeStream = 0x7BEE;
constexpr std::uint64_t kFoldShuffleStream = 0x5F01D;

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp);
        out << content;
        if (!out) throw DataError("short write to " + tmp);
    }
    fs::rename(tmp, path);
}

struct RunOutcome {
    double error_percent = 0.0;
    std::string log_path;
};

std::string tally_cell(const aggregate::VoteTally& tally) {
    std::string s;
    for (std::size_t c = 0; c < tally.votes.size(); ++c) {
        if (c) s += ':';
        s += std::to_string(tally.votes[c]);
    }
    s += '|';
    s += std::to_string(tally.size);
    return s;
}

struct SampleDecision {
    int predicted = 0;
    bool tie = false;
    std::vector<double> certainty; // empty unless the rule ran
};

SampleDecision decide(const std::vector<aggregate::VoteTally>& tallies,
                      const std::string& cross_rule) {
    SampleDecision d;
    if (tallies.size() == 1) {
        auto p = aggregate::plurality(tallies[0]);
        d.predicted = p.cls;
        d.tie = p.tie;
        return d;
    }
    if (cross_rule == "plurality_sum") {
        aggregate::VoteTally sum;
        sum.votes.assign(tallies[0].votes.size(), 0);
        for (const auto& t : tallies) {
            sum.size += t.size;
            for (std::size_t c = 0; c < t.votes.size(); ++c) sum.votes[c] += t.votes[c];
        }
        auto p = aggregate::plurality(sum);
        d.predicted = p.cls;
        d.tie = p.tie;
        return d;
    }
    auto r = aggregate::degree_of_certainty(tallies);
    d.predicted = r.cls;
    d.tie = r.tie;
    if (r.rule_invoked) d.certainty = r.scores;
    return d;
}

RunOutcome execute_run(const ExperimentConfig& config, const PreparedData& data, int run_index,
                       const std::string& run_dir) {
    const std::uint64_t run_seed = config.base_seed + static_cast<std::uint64_t>(run_index);
    auto datasets = build_dataset_map(config, data.train, run_seed);

    std::vector<std::vector<aggregate::VoteTally>> per_tree; // [tree][sample]
    per_tree.reserve(config.tree_names.size());
    for (std::size_t t = 0; t < config.tree_names.size(); ++t) {
        const auto& tree = config.trees.at(config.tree_names[t]);
        auto trained = ensemble::train_fusion(*tree.root, datasets, data.validation,
                                              derive_seed(run_seed, kTreeStream + t));
        per_tree.push_back(ensemble::predict_fusion(trained, data.test.images()));
    }

    fs::create_directories(run_dir);
    const std::string log_path = run_dir + "/decisions.csv";
    std::ofstream log(log_path, std::ios::trunc);
    if (!log) throw DataError("cannot write " + log_path);
    log << "index,true,predicted,tie";
    for (const auto& name : config.tree_names) log << ",tally_" << name;
    log << ",certainty\n";

    std::size_t wrong = 0;
    std::vector<aggregate::VoteTally> row(per_tree.size());
    for (std::size_t i = 0; i < data.test.size(); ++i) {
        for (std::size_t t = 0; t < per_tree.size(); ++t) row[t] = per_tree[t][i];
        SampleDecision d = decide(row, config.cross_rule);
        if (d.predicted != data.test.labels()[i]) ++wrong;
        log << i << ',' << data.test.labels()[i] << ',' << d.predicted << ',' << (d.tie ? 1 : 0);
        for (const auto& t : row) log << ',' << tally_cell(t);
        log << ',';
        for (std::size_t c = 0; c < d.certainty.size(); ++c) {
            if (c) log << ';';
            log << d.certainty[c];
        }
        log << '\n';
    }
    if (!log) throw DataError("short write to " + log_path);

    RunOutcome out;
    out.error_percent = 100.0 * static_cast<double>(wrong) / static_cast<double>(data.test.size());
    out.log_path = log_path;
    return out;
}

// Accuracy of one tree on one evaluation set, standalone plurality.
double tree_accuracy(const ensemble::FusionNode& tree,
                     const std::map<std::string, Dataset>& datasets, const Dataset& validation,
                     const Dataset& eval, std::uint64_t seed) {
    auto trained = ensemble::train_fusion(tree, datasets, validation, seed);
    auto tallies = ensemble::predict_fusion(trained, eval.images());
    std::size_t right = 0;
    for (std::size_t i = 0; i < eval.size(); ++i)
        if (aggregate::plurality(tallies[i]).cls == eval.labels()[i]) ++right;
    return static_cast<double>(right) / static_cast<double>(eval.size());
}

// Rewrites every node the axis applies to; unknown names fall back to a
// same-named key anywhere in the tree.
void apply_override(json& node, const std::string& name, const json& value) {
    if (node.is_array()) {
        for (auto& child : node) apply_override(child, name, value);
        return;
    }
    if (!node.is_object()) return;
    const std::string type = node.value("type", std::string{});
    if ((name == "alpha" || name == "beta") && type == "ecoc")
        node["pre_emphasis"][name] = value;
    else if (name == "S" && type == "switching")
        node["rate"] = value;
    else if (name == "M" && (type == "bagging" || type == "switching"))
        node["members"] = value;
    else if (name == "B" && type == "bagging")
        node["fraction"] = value;
    else if (name != "alpha" && name != "beta" && name != "S" && name != "M" && name != "B" &&
             node.contains(name))
        node[name] = value;
    for (auto& [key, child] : node.items()) {
        (void)key;
        apply_override(child, name, value);
    }
}

} // namespace

std::string fingerprint(const json& j) {
    // FNV-1a 64 over the canonical dump
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PreparedData prepare_data(const ExperimentConfig& config) {
    const auto& src = config.sources;
    Dataset pool, test_pool;
    if (src.synthetic_train > 0) {
        pool = synth::make_digits(src.synthetic_train, src.synthetic_seed);
        if (src.synthetic_test > 0)
            test_pool = synth::make_digits(src.synthetic_test, derive_seed(src.synthetic_seed, 1));
    } else {
        pool = idx::load_dataset(src.train_images, src.train_labels, src.n_classes, "train");
        if (!src.test_images.empty())
            test_pool = idx::load_dataset(src.test_images, src.test_labels, src.n_classes, "test");
    }

    SplitSpec spec = config.split.spec;
    PreparedData out;
    if (!test_pool.empty()) {
        // separate test file: split the pool into train/validation only
        spec.test_count = 0;
        auto parts = split(pool, spec, config.split.seed);
        out.train = std::move(parts.train);
        out.validation = std::move(parts.validation);
        if (config.split.spec.test_count &&
            config.split.spec.test_count < test_pool.size()) {
            std::vector<std::size_t> head(config.split.spec.test_count);
            std::iota(head.begin(), head.end(), 0);
            out.test = test_pool.subset(head, "test");
        } else {
            out.test = std::move(test_pool);
        }
    } else {
        if (spec.test_count == 0)
            throw ConfigError("no test source: the split needs a nonzero test count");
        auto parts = split(pool, spec, config.split.seed);
        out.train = std::move(parts.train);
        out.validation = std::move(parts.validation);
        out.test = std::move(parts.test);
    }
    return out;
}

std::map<std::string, Dataset> build_dataset_map(const ExperimentConfig& config,
                                                 const Dataset& train, std::uint64_t seed) {
    std::map<std::string, Dataset> out;
    out.emplace("train", train);
    std::size_t index = 0;
    for (const auto& [name, def] : config.augments) {
        const std::uint64_t aug_seed = derive_seed(seed, kAugmentStream + index++);
        const Dataset& source = out.at(def.source); // augments may chain
        if (def.builder == "dataset1")
            out.emplace(name, augment::build_dataset1(source, aug_seed, def.params));
        else if (def.builder == "dataset2")
            out.emplace(name, augment::build_dataset2(source, aug_seed, def.params));
        else
            out.emplace(name, augment::apply_plan(source, def.plan, aug_seed));
    }
    return out;
}

json RunReport::to_json() const {
    return json{{"per_run_errors", per_run_errors},
                {"mean_error", mean_error},
                {"std_error", std_error},
                {"decision_logs", decision_log_paths},
                {"wall_clock_seconds", wall_clock_seconds},
                {"config_fingerprint", config_fingerprint}};
}

RunReport run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const PreparedData data = prepare_data(config);

    fs::create_directories(config.output_dir);
    write_atomic(config.output_dir + "/config.json", config.raw.dump(2) + "\n");

    std::vector<RunOutcome> outcomes(static_cast<std::size_t>(config.runs));
    std::vector<std::string> failures(static_cast<std::size_t>(config.runs));
    parallel_for(static_cast<std::size_t>(config.runs), [&](std::size_t r) {
        const std::string run_dir =
            config.output_dir + "/run_" + std::to_string(r);
        try {
            outcomes[r] = execute_run(config, data, static_cast<int>(r), run_dir);
        } catch (const std::exception& e) {
            failures[r] = e.what();
            throw;
        }
    });
    for (std::size_t r = 0; r < failures.size(); ++r)
        if (!failures[r].empty())
            throw ConfigError("run " + std::to_string(r) + " failed: " + failures[r]);

    RunReport report;
    for (const auto& o : outcomes) {
        report.per_run_errors.push_back(o.error_percent);
        report.decision_log_paths.push_back(o.log_path);
    }
    const double n = static_cast<double>(report.per_run_errors.size());
    report.mean_error =
        std::accumulate(report.per_run_errors.begin(), report.per_run_errors.end(), 0.0) / n;
    double var = 0.0;
    for (double e : report.per_run_errors) var += (e - report.mean_error) * (e - report.mean_error);
    report.std_error = std::sqrt(var / n);
    report.config_fingerprint = fingerprint(config.raw);
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_atomic(config.output_dir + "/report.json", report.to_json().dump(2) + "\n");
    return report;
}

GridResult grid_search(const ExperimentConfig& config, const std::string& tree_name) {
    auto tree_it = config.trees.find(tree_name);
    if (tree_it == config.trees.end()) throw ConfigError("unknown tree: " + tree_name);
    if (!config.grids.contains(tree_name) || config.grids.at(tree_name).empty())
        throw ConfigError("no grid defined for tree " + tree_name);

    std::vector<std::pair<std::string, std::vector<json>>> axes;
    for (const auto& [name, values] : config.grids.at(tree_name).items()) {
        if (!values.is_array() || values.empty())
            throw ConfigError("grid axis " + name + " must be a nonempty array");
        axes.emplace_back(name, std::vector<json>(values.begin(), values.end()));
    }

    std::size_t total = 1;
    for (const auto& [name, values] : axes) {
        (void)name;
        total *= values.size();
    }

    const bool use_cv = std::any_of(axes.begin(), axes.end(), [](const auto& a) {
        return a.first == "alpha" || a.first == "beta";
    });

    // grid search sees only train and validation; the test split is never
    // materialized here, so a tree referencing it cannot resolve
    const PreparedData data = prepare_data(config);
    const Dataset& train = data.train;
    const Dataset& validation = data.validation;

    // fold layout fixed across candidates so scores are comparable
    constexpr int kFolds = 5;
    std::vector<std::vector<std::size_t>> folds;
    if (use_cv) {
        std::vector<std::size_t> order(train.size());
        std::iota(order.begin(), order.end(), 0);
        Rng rng = make_rng(derive_seed(config.base_seed, kFoldShuffleStream));
        std::shuffle(order.begin(), order.end(), rng);
        folds.resize(kFolds);
        const std::size_t base = train.size() / kFolds, rem = train.size() % kFolds;
        std::size_t pos = 0;
        for (int f = 0; f < kFolds; ++f) {
            const std::size_t len = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
            folds[f].assign(order.begin() + pos, order.begin() + pos + len);
            pos += len;
        }
    }

    GridResult result;
    result.table.resize(total);
    parallel_for(total, [&](std::size_t idx) {
        // row-major lattice order: first axis outermost
        json params = json::object();
        std::size_t rest = idx;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& [name, values] = axes[a];
            params[name] = values[rest % values.size()];
            rest /= values.size();
        }
        json tree_json = tree_it->second.raw;
        for (const auto& [name, value] : params.items()) apply_override(tree_json, name, value);
        auto candidate = parse_tree(tree_json);

        double score = 0.0;
        if (use_cv) {
            for (int f = 0; f < kFolds; ++f) {
                std::vector<std::size_t> rest_idx;
                rest_idx.reserve(train.size() - folds[f].size());
                for (int g = 0; g < kFolds; ++g)
                    if (g != f) rest_idx.insert(rest_idx.end(), folds[g].begin(), folds[g].end());
                Dataset fold_train = train.subset(rest_idx, "train");
                Dataset fold_eval = train.subset(folds[f], "fold");
                auto datasets = build_dataset_map(config, fold_train,
                                                  derive_seed(config.base_seed, idx));
                score += tree_accuracy(*candidate, datasets, fold_eval, fold_eval,
                                       derive_seed(config.base_seed, kTreeStream + f));
            }
            score /= kFolds;
        } else {
            auto datasets = build_dataset_map(config, train, derive_seed(config.base_seed, idx));
            score = tree_accuracy(*candidate, datasets, validation, validation,
                                  derive_seed(config.base_seed, kTreeStream));
        }
        result.table[idx] = GridPoint{params, score};
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < total; ++i)
        if (result.table[i].score > result.table[best].score) best = i;
    result.best_params = result.table[best].params;
    result.best_score = result.table[best].score;
    result.tie = std::any_of(result.table.begin(), result.table.end(), [&](const GridPoint& p) {
        return p.score == result.best_score && &p != &result.table[best];
    });
    return result;
}

bool axis_saturated(const std::vector<double>& accuracies, double epsilon) {
    if (accuracies.size() < 2)
        throw ConfigError("saturation check needs at least 2 points along the axis");
    return std::abs(accuracies.back() - accuracies[accuracies.size() - 2]) < epsilon;
}

} // namespace mnet::harness
