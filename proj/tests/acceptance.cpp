// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier than the unit suite; the end-to-end check trains
// real models and takes several minutes.

#include "mnet/aggregate.hpp"
#include "mnet/codes.hpp"
#include "mnet/ensemble.hpp"
#include "mnet/harness.hpp"
#include "mnet/idx.hpp"
#include "mnet/nnet.hpp"
#include "mnet/rng.hpp"
#include "mnet/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mnet;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s: %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void run_criterion(const std::string& name, const std::function<std::string()>& body) {
    try {
        const std::string detail = body(); // empty string = pass, else failure reason
        report(name, detail.empty(), detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// ---------------------------------------------------------------------------
// 1. gradient correctness on dense / conv / maxpool / softmax stacks

std::string check_gradients() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng = make_rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto batch = [&](int h, int w, int n, int n_classes) {
        nnet::GradCheckBatch b;
        for (int i = 0; i < n; ++i) {
            Image img;
            img.height = h;
            img.width = w;
            img.pixels.resize(static_cast<std::size_t>(h) * w);
            for (double& p : img.pixels) p = u(rng);
            b.inputs.push_back(std::move(img));
            b.labels.push_back(i % n_classes);
        }
        return b;
    };

    // dense + softmax (relu): 4*8 + 8 + 8*3 + 3 = 75 params
    nnet::NetworkSpec dense;
    dense.layers = {nnet::LayerSpec::dense(8, nnet::Activation::Relu),
                    nnet::LayerSpec::softmax_output(3)};
    dense.input_h = dense.input_w = 2;
    dense.n_classes = 3;
    dense.seed = 1;
    const double e1 = nnet::gradient_check(dense, batch(2, 2, 6, 3));

    // dense + softmax (sigmoid) with sample weights
    nnet::NetworkSpec sig = dense;
    sig.layers[0] = nnet::LayerSpec::dense(8, nnet::Activation::Sigmoid);
    sig.seed = 2;
    auto wb = batch(2, 2, 5, 3);
    wb.weights = nnet::SampleWeights{1.5, 0.5, 2.0, 1.0, 0.25};
    const double e2 = nnet::gradient_check(sig, wb);

    // conv + maxpool + dense + softmax: 2*(9+1) + (2*2*2)*5 + 5 + 5*3 + 3 = 83 params
    nnet::NetworkSpec conv;
    conv.layers = {nnet::LayerSpec::conv(3, 3, 2, 1, nnet::Activation::Relu),
                   nnet::LayerSpec::maxpool(2, 2),
                   nnet::LayerSpec::dense(5, nnet::Activation::Sigmoid),
                   nnet::LayerSpec::softmax_output(3)};
    conv.input_h = conv.input_w = 6;
    conv.n_classes = 3;
    conv.seed = 3;
    const double e3 = nnet::gradient_check(conv, batch(6, 6, 4, 3));

    const double elapsed = seconds_since(t0);
    const double worst = std::max({e1, e2, e3});
    std::ostringstream detail;
    detail << "max rel err " << worst << ", " << elapsed << " s";
    if (worst >= 1e-4) return "relative error too large: " + detail.str();
    if (elapsed >= 10.0) return "too slow: " + detail.str();
    std::printf("  gradient check: dense %.2e, weighted sigmoid %.2e, conv %.2e (%.2f s)\n", e1,
                e2, e3, elapsed);
    return "";
}

// ---------------------------------------------------------------------------
// 2. sample-weight formula on the full (alpha, beta, o) grid

std::string check_emphasis_grid() {
    double worst = 0.0;
    std::vector<std::int8_t> targets(402);
    std::vector<double> outputs(402);
    for (int a = 0; a <= 100; ++a) {
        const double alpha = a / 100.0;
        for (int b = 0; b <= 100; ++b) {
            const double beta = b / 100.0;
            // one batch covering the whole o axis for both target signs
            for (int k = 0; k <= 200; ++k) {
                const double o = -1.0 + k / 100.0;
                targets[2 * k] = 1;
                outputs[2 * k] = o;
                targets[2 * k + 1] = -1;
                outputs[2 * k + 1] = o;
            }
            const auto raw =
                ensemble::pre_emphasis_raw(targets, outputs, {alpha, beta});
            const auto norm =
                ensemble::pre_emphasis_weights(targets, outputs, {alpha, beta});
            // independent direct evaluation, plus its own normalization
            double total = 0.0;
            std::vector<double> expect(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) {
                const double t = targets[i], o = outputs[i];
                expect[i] =
                    alpha + (1.0 - alpha) * (beta * (t - o) * (t - o) +
                                             (1.0 - beta) * (1.0 - o * o));
                total += expect[i];
                worst = std::max(worst, std::abs(raw[i] - expect[i]));
            }
            if (total > 0.0) {
                const double mean = total / static_cast<double>(expect.size());
                for (std::size_t i = 0; i < norm.size(); ++i)
                    worst = std::max(worst, std::abs(norm[i] - expect[i] / mean));
            }
            if (worst > 1e-12) {
                std::ostringstream s;
                s << "mismatch " << worst << " at alpha=" << alpha << " beta=" << beta;
                return s.str();
            }
        }
    }

    // boundary: alpha = 1 gives exactly 1 everywhere
    for (double w : ensemble::pre_emphasis_raw({1, -1}, {0.3, -0.7}, {1.0, 0.4}))
        if (w != 1.0) return "alpha=1 raw weight is not exactly 1";
    // boundary: alpha = 0, beta = 1, t == o gives exactly 0
    for (double w : ensemble::pre_emphasis_raw({1, -1}, {1.0, -1.0}, {0.0, 1.0}))
        if (w != 0.0) return "alpha=0, beta=1, t=o raw weight is not exactly 0";
    std::printf("  emphasis grid: 101x101x201x2 points, max deviation %.3g\n", worst);
    return "";
}

// ---------------------------------------------------------------------------
// 3. ECOC decoding vs brute force + exhaustive single-bit flips

std::string check_ecoc_decoding() {
    const auto t0 = std::chrono::steady_clock::now();
    const codes::CodeMatrix& m = codes::ecoc_matrix_10x15();
    if (m.min_row_distance() < 3) return "code distance below 3";

    auto brute = [&](const std::vector<double>& outputs) {
        int best_cls = 0, best = std::numeric_limits<int>::max();
        for (int cls = 0; cls < m.n_classes(); ++cls) {
            int d = 0;
            for (int j = 0; j < m.m_dichotomies(); ++j) {
                const int sign = outputs[j] < 0.0 ? -1 : 1;
                if (m.at(cls, j) != 0 && sign != m.at(cls, j)) ++d;
            }
            if (d < best) {
                best = d;
                best_cls = cls;
            }
        }
        return best_cls;
    };

    Rng rng = make_rng(4242);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> outputs(15);
    for (int trial = 0; trial < 10000; ++trial) {
        for (double& o : outputs) o = u(rng);
        if (codes::hamming_decode(m, outputs).cls != brute(outputs)) {
            return "random decode disagrees with the oracle at trial " +
                   std::to_string(trial);
        }
    }

    // every one-bit corruption of every codeword must decode back
    for (int cls = 0; cls < 10; ++cls) {
        for (int j = 0; j < 15; ++j) {
            for (int k = 0; k < 15; ++k) outputs[k] = m.at(cls, k);
            outputs[j] = -outputs[j];
            const auto r = codes::hamming_decode(m, outputs);
            if (r.cls != cls || r.tie)
                return "bit flip (" + std::to_string(cls) + "," + std::to_string(j) +
                       ") failed to correct";
        }
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 5.0) return "too slow: " + std::to_string(elapsed) + " s";
    std::printf("  ecoc: 10000 random decodes + 150 bit flips in %.2f s\n", elapsed);
    return "";
}

// ---------------------------------------------------------------------------
// 4. degree of certainty vs full enumeration of tally pairs

std::string check_certainty_enumeration() {
    using aggregate::VoteTally;
    auto tallies_up_to = [](long max_size) {
        std::vector<VoteTally> all;
        for (long s = 1; s <= max_size; ++s)
            for (long a = 0; a <= s; ++a)
                for (long b = 0; a + b <= s; ++b)
                    all.push_back(VoteTally{{a, b, s - a - b}, s, -1.0});
        return all;
    };
    const auto first = tallies_up_to(9);
    const auto second = tallies_up_to(11);

    auto arg_plurality = [](const VoteTally& t) {
        int cls = 0;
        for (std::size_t c = 1; c < t.votes.size(); ++c)
            if (t.votes[c] > t.votes[cls]) cls = static_cast<int>(c);
        return cls;
    };

    std::size_t invoked = 0;
    for (const VoteTally& a : first) {
        const int pa = arg_plurality(a);
        for (const VoteTally& b : second) {
            const int pb = arg_plurality(b);
            const auto got = aggregate::degree_of_certainty({a, b});

            if (pa == pb) {
                // unanimity: the shared winner passes through untouched
                if (got.cls != pa || got.rule_invoked)
                    return "unanimity violated for pa=pb=" + std::to_string(pa);
            } else {
                ++invoked;
                // oracle: argmax of summed vote fractions, ties to the
                // lowest class (no validation errors attached here)
                int want = 0;
                double best = -1.0;
                for (int c = 0; c < 3; ++c) {
                    const double score = static_cast<double>(a.votes[c]) / a.size +
                                         static_cast<double>(b.votes[c]) / b.size;
                    if (score > best) {
                        best = score;
                        want = c;
                    }
                }
                if (!got.rule_invoked || got.cls != want)
                    return "disagreement vs oracle on a disputed pair";
                // scale invariance: tripling one tally changes nothing
                VoteTally scaled = a;
                for (long& v : scaled.votes) v *= 3;
                scaled.size *= 3;
                if (aggregate::degree_of_certainty({scaled, b}).cls != got.cls)
                    return "chosen class not invariant under tally scaling";
            }
        }
    }
    std::printf("  certainty: %zu x %zu pairs enumerated, rule invoked on %zu\n", first.size(),
                second.size(), invoked);
    return "";
}

// ---------------------------------------------------------------------------
// 5. bootstrap unique-sample statistics

std::string check_bootstrap_statistics() {
    double mean_fraction = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto idx = ensemble::bootstrap_indices(1000, 1.0, seed);
        if (idx.size() != 1000) return "wrong draw count";
        const std::set<std::size_t> unique(idx.begin(), idx.end());
        mean_fraction += static_cast<double>(unique.size()) / 1000.0;
    }
    mean_fraction /= 100.0;
    std::printf("  bootstrap: mean unique fraction %.4f (theory 0.632)\n", mean_fraction);
    if (mean_fraction < 0.60 || mean_fraction > 0.67) {
        std::ostringstream s;
        s << "unique fraction " << mean_fraction << " outside [0.60, 0.67]";
        return s.str();
    }
    return "";
}

// ---------------------------------------------------------------------------
// 6. label switching exactness

std::string check_label_switching() {
    for (std::size_t n : {std::size_t{10}, std::size_t{100}, std::size_t{1000}}) {
        const Dataset data = synth::make_digits(n, 7000 + n);
        for (double s : {0.1, 0.2, 0.3, 0.4}) {
            const Dataset switched = ensemble::switch_labels(data, s, 31 * n + 7);
            if (switched.size() != n) return "dataset size changed";
            std::size_t changed = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (switched.images()[i].pixels != data.images()[i].pixels)
                    return "images were modified";
                const int before = data.labels()[i], after = switched.labels()[i];
                if (after < 0 || after >= data.n_classes()) return "switched label out of range";
                if (after != before) ++changed;
            }
            const auto want = static_cast<std::size_t>(s * static_cast<double>(n));
            if (changed != want) {
                std::ostringstream d;
                d << "N=" << n << " S=" << s << ": changed " << changed << ", want " << want;
                return d.str();
            }
        }
    }
    std::printf("  label switching: floor(S*N) exact over N in {10,100,1000}, S in {.1...4}\n");
    return "";
}

// ---------------------------------------------------------------------------
// 7. structural accounting of the fusion shapes

long count_trained_second_level_leaves(const ensemble::TrainedEnsemble& e) {
    using namespace ensemble;
    return std::visit(
        [](const auto& n) -> long {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrainedLeaf>) {
                return 1;
            } else if constexpr (std::is_same_v<T, TrainedMembers>) {
                long total = 0;
                for (const auto& m : n.members) total += count_trained_second_level_leaves(*m);
                return total;
            } else if constexpr (std::is_same_v<T, TrainedEcocStage>) {
                long total = static_cast<long>(n.stage1.size()); // one stage-1 per dichotomy
                for (const auto& s : n.second_level)
                    total += count_trained_second_level_leaves(*s);
                return total;
            } else {
                long total = 0;
                for (const auto& [child, w] : n.children) {
                    (void)w;
                    total += count_trained_second_level_leaves(*child);
                }
                return total;
            }
        },
        e.value);
}

std::string check_structural_accounting() {
    nnet::NetworkSpec tiny;
    tiny.layers = {nnet::LayerSpec::dense(4, nnet::Activation::Relu),
                   nnet::LayerSpec::softmax_output(0)};
    tiny.epochs = 1;
    tiny.batch_size = 32;
    tiny.lr.initial = 0.1;

    auto leaf = [&] {
        ensemble::LeafNode n;
        n.spec = tiny;
        n.dataset_id = "train";
        return ensemble::make_node(std::move(n));
    };

    // the 9-network shape: five committees fused with weights 3/2/2/1/1
    ensemble::ComboNode combo;
    for (int w : {3, 2, 2, 1, 1}) combo.children.push_back({leaf(), w});
    const auto fs1 = ensemble::make_node(std::move(combo));
    if (ensemble::nominal_size(*fs1) != 9) return "weighted combo size is not 9";

    const Dataset train = synth::make_digits(120, 81);
    const Dataset val = synth::make_digits(30, 82);
    std::map<std::string, Dataset> datasets{{"train", train}};
    const auto fs1_trained = ensemble::train_fusion(*fs1, datasets, val, 3);
    const auto fs1_tallies = ensemble::predict_fusion(fs1_trained, val.images());
    for (const auto& t : fs1_tallies) {
        if (t.size != 9) return "trained combo tally size is not 9";
        if (t.total() != 9) return "combo vote mass is not 3+2+2+1+1";
    }

    // the 15-dichotomy shape with M switched members per dichotomy
    const int m_members = 2;
    ensemble::EcocStageNode stage{codes::ecoc_matrix_10x15(), "train", {}, tiny, nullptr,
                                  std::nullopt};
    ensemble::SwitchedNode inner;
    inner.params = {0.2, m_members};
    ensemble::LeafNode dleaf;
    dleaf.spec = tiny;
    dleaf.dataset_id = "@dichotomy";
    inner.child = ensemble::make_node(std::move(dleaf));
    stage.second_level = ensemble::make_node(std::move(inner));
    const auto fs2 = ensemble::make_node(std::move(stage));
    const auto fs2_trained = ensemble::train_fusion(*fs2, datasets, val, 4);
    const long trained_leaves = count_trained_second_level_leaves(fs2_trained);
    if (trained_leaves != 15 * m_members + 15)
        return "trained 15-dichotomy stage holds " + std::to_string(trained_leaves) +
               " leaves, want 15*M second level + 15 stage-1";
    std::printf("  structure: combo tally 9 (3/2/2/1/1), dichotomy stage trained 15x%d+15 leaves\n",
                m_members);
    return "";
}

// ---------------------------------------------------------------------------
// 8. desk-scale end-to-end direction-of-effect runs

json desk_net(int hidden, const char* activation) {
    return json{{"layers",
                 {{{"kind", "dense"}, {"units", hidden}, {"activation", activation}},
                  {{"kind", "softmax-output"}, {"units", 0}}}},
                {"epochs", 6},
                {"batch_size", 32},
                {"lr", {{"initial", 0.1}, {"decay", 0.9}}}};
}

json desk_base(const std::string& out_dir) {
    return json{
        {"datasets", {{"synthetic", {{"train", 12000}, {"test", 10000}, {"seed", 90210}}}}},
        {"split", {{"train", 10000}, {"validation", 2000}, {"test", 0}}},
        {"runs", 5},
        {"seed", 2024},
        {"output_dir", out_dir}};
}

// component error out of a multi-tree decision log: plurality per tally cell
std::vector<double> component_errors(const std::vector<std::string>& log_paths,
                                     std::size_t tally_column) {
    std::vector<double> errors;
    for (const auto& path : log_paths) {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line); // header
        std::size_t wrong = 0, total = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::stringstream row(line);
            std::string f;
            while (std::getline(row, f, ',')) fields.push_back(f);
            const int truth = std::stoi(fields[1]);
            const std::string& cell = fields[4 + tally_column]; // "v0:..:v9|size"
            aggregate::VoteTally tally;
            std::stringstream votes(cell.substr(0, cell.find('|')));
            while (std::getline(votes, f, ':')) tally.votes.push_back(std::stol(f));
            tally.size = std::stol(cell.substr(cell.find('|') + 1));
            if (aggregate::plurality(tally).cls != truth) ++wrong;
            ++total;
        }
        errors.push_back(100.0 * static_cast<double>(wrong) / static_cast<double>(total));
    }
    return errors;
}

std::string check_desk_scale() {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = fs::temp_directory_path() / "mnet_acceptance_desk";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const json single_tree{{"type", "leaf"}, {"dataset", "train"}, {"net", desk_net(48, "relu")}};
    const json bagged_tree{{"type", "bagging"},
                           {"members", 5},
                           {"fraction", 1.0},
                           {"child", single_tree}};
    const json other_tree{{"type", "leaf"}, {"dataset", "train"}, {"net", desk_net(32, "sigmoid")}};

    json single_cfg = desk_base((dir / "single").string());
    single_cfg["trees"] = {{"single", single_tree}};
    json bagged_cfg = desk_base((dir / "bagged").string());
    bagged_cfg["trees"] = {{"bagged", bagged_tree}};
    json cross_cfg = desk_base((dir / "cross").string());
    cross_cfg["trees"] = {{"a", single_tree}, {"b", other_tree}};
    cross_cfg["aggregation"] = {{"cross", "degree_of_certainty"}};

    const auto single = harness::run_experiment(harness::parse_config(single_cfg));
    const auto bagged = harness::run_experiment(harness::parse_config(bagged_cfg));
    const auto cross = harness::run_experiment(harness::parse_config(cross_cfg));

    const double single_median = median(single.per_run_errors);
    const double bagged_median = median(bagged.per_run_errors);
    const double cross_median = median(cross.per_run_errors);
    const double a_median = median(component_errors(cross.decision_log_paths, 0));
    const double b_median = median(component_errors(cross.decision_log_paths, 1));
    const double elapsed = seconds_since(t0);
    fs::remove_all(dir);

    std::printf("  desk scale: single %.2f%%, bagged(M=5) %.2f%%, components %.2f%%/%.2f%%, "
                "cross %.2f%% (%.0f s)\n",
                single_median, bagged_median, a_median, b_median, cross_median, elapsed);
    if (bagged_median > single_median + 0.1) {
        std::ostringstream s;
        s << "bagged median " << bagged_median << "% exceeds single " << single_median
          << "% + 0.1pp";
        return s.str();
    }
    if (cross_median > std::min(a_median, b_median) + 0.1) {
        std::ostringstream s;
        s << "cross median " << cross_median << "% exceeds min component "
          << std::min(a_median, b_median) << "% + 0.1pp";
        return s.str();
    }
    if (elapsed >= 1800.0) return "runtime exceeded 30 minutes";
    return "";
}

// ---------------------------------------------------------------------------
// 9. bit-identical reproducibility of full experiments

std::string check_reproducibility() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "mnet_acceptance_repro";
    fs::remove_all(dir);

    auto make = [&](const std::string& out) {
        json cfg{{"datasets", {{"synthetic", {{"train", 300}, {"test", 0}, {"seed", 15}}}}},
                 {"split", {{"train", 200}, {"validation", 50}, {"test", 50}}},
                 {"trees",
                  {{"sw",
                    {{"type", "switching"},
                     {"members", 3},
                     {"rate", 0.2},
                     {"child",
                      {{"type", "leaf"}, {"dataset", "train"}, {"net", desk_net(8, "relu")}}}}}}},
                 {"runs", 3},
                 {"seed", 777},
                 {"output_dir", (dir / out).string()}};
        return harness::run_experiment(harness::parse_config(cfg));
    };
    const auto first = make("a");
    const auto second = make("b");
    fs::remove_all(dir);
    if (first.per_run_errors != second.per_run_errors) // bitwise vector equality
        return "per-run errors differ between identical invocations";
    std::printf("  reproducibility: 3 runs repeated bit-identically (errors ");
    for (double e : first.per_run_errors) std::printf("%.4f%% ", e);
    std::printf(")\n");
    return "";
}

// ---------------------------------------------------------------------------
// 10. IDX round trip
// The official digit corpus is not shipped here, so the round trip runs on a
// generated dataset serialized through the same on-disk format.

std::string check_idx_round_trip() {
    const Dataset data = synth::make_digits(500, 4711);
    const auto bytes = idx::serialize_idx_images(data.images());
    const auto images = idx::parse_idx_images(bytes);
    if (images.size() != data.size()) return "image count changed";
    const auto bytes2 = idx::serialize_idx_images(images);
    if (bytes != bytes2) return "serialize(parse(serialize(x))) is not byte-identical";
    const auto images2 = idx::parse_idx_images(bytes2);
    for (std::size_t i = 0; i < images.size(); ++i)
        if (images[i].pixels != images2[i].pixels) return "pixels changed across the round trip";

    const auto lbytes = idx::serialize_idx_labels(data.labels());
    if (idx::parse_idx_labels(lbytes) != data.labels()) return "labels changed";
    std::printf("  idx: 500-image parse/serialize/parse round trip byte-identical\n");
    return "";
}

} // namespace

int main() {
    run_criterion("gradient correctness (dense/conv/maxpool/softmax, <1e-4, <10s)",
                  check_gradients);
    run_criterion("emphasis weight exactness on the full parameter grid", check_emphasis_grid);
    run_criterion("ecoc decoding vs brute force + exhaustive bit flips", check_ecoc_decoding);
    run_criterion("degree-of-certainty full enumeration, scaling, unanimity",
                  check_certainty_enumeration);
    run_criterion("bootstrap unique-sample statistics", check_bootstrap_statistics);
    run_criterion("label switching exactness", check_label_switching);
    run_criterion("structural accounting of fusion shapes", check_structural_accounting);
    run_criterion("desk-scale end-to-end direction of effect", check_desk_scale);
    run_criterion("bit-identical experiment reproducibility", check_reproducibility);
    run_criterion("idx round trip", check_idx_round_trip);

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
