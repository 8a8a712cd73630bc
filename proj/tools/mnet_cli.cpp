#include "mnet/codes.hpp"
#include "mnet/errors.hpp"
#include "mnet/harness.hpp"
#include "mnet/idx.hpp"
#include "mnet/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& config_path) {
    auto config = mnet::harness::load_config(config_path);
    auto report = mnet::harness::run_experiment(config);
    std::cout << report.to_json().dump(2) << '\n';
    std::cout << "mean error " << report.mean_error << "% +/- " << report.std_error << "% over "
              << report.per_run_errors.size() << " runs ("
              << report.wall_clock_seconds << "s)\n";
    return 0;
}

int cmd_grid(const std::string& config_path, const std::string& tree) {
    auto config = mnet::harness::load_config(config_path);
    auto result = mnet::harness::grid_search(config, tree);
    std::cout << "params,accuracy\n";
    for (const auto& point : result.table)
        std::cout << point.params.dump() << ',' << point.score << '\n';
    std::cout << "best " << result.best_params.dump() << " accuracy " << result.best_score
              << (result.tie ? " (tie, first lattice point kept)" : "") << '\n';
    return 0;
}

int cmd_report(const std::string& run_dir) {
    const std::string config_path = run_dir + "/config.json";
    if (!fs::exists(config_path))
        throw mnet::DataError("no config.json under " + run_dir + "; is this a run directory?");
    auto config = mnet::harness::load_config(config_path);
    auto data = mnet::harness::prepare_data(config);

    bool any = false;
    for (int r = 0;; ++r) {
        const std::string log = run_dir + "/run_" + std::to_string(r) + "/decisions.csv";
        if (!fs::exists(log)) break;
        any = true;
        const std::string prefix = run_dir + "/run_" + std::to_string(r) + "/misclassified";
        const std::size_t n = mnet::harness::report_misclassified(log, data.test, prefix);
        std::cout << "run " << r << ": " << n << " misclassified -> " << prefix << ".pgm, "
                  << prefix << ".csv\n";
    }
    if (!any) throw mnet::DataError("no decision logs under " + run_dir);
    return 0;
}

int cmd_inspect_code(const std::string& name, int classes) {
    if (name == "ova") {
        std::cout << mnet::codes::ova_matrix(classes).to_csv();
    } else if (name == "ovo") {
        std::cout << mnet::codes::ovo_matrix(classes).to_csv();
    } else if (name == "ecoc") {
        if (classes != 10) throw mnet::ConfigError("the built-in ecoc code is 10-class");
        std::cout << mnet::codes::ecoc_matrix_10x15().to_csv();
    } else {
        throw mnet::ConfigError("code must be one of ova, ovo, ecoc");
    }
    return 0;
}

int cmd_gen_synthetic(std::size_t count, std::uint64_t seed, const std::string& images_path,
                      const std::string& labels_path) {
    auto data = mnet::synth::make_digits(count, seed);
    mnet::idx::save_dataset(data, images_path, labels_path);
    std::cout << "wrote " << count << " images to " << images_path << " / " << labels_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ensemble-fusion experiment runner"};
    app.require_subcommand(1);

    std::string config_path, tree, run_dir, code_name;
    std::string images_path = "synthetic-images-idx3-ubyte";
    std::string labels_path = "synthetic-labels-idx1-ubyte";
    int classes = 10;
    std::size_t count = 10000;
    std::uint64_t seed = 12345;

    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", config_path, "experiment config JSON")->required();

    auto* grid = app.add_subcommand("grid", "grid-search one tree's hyperparameters");
    grid->add_option("config", config_path, "experiment config JSON")->required();
    grid->add_option("--tree", tree, "tree name to search")->required();

    auto* report = app.add_subcommand("report", "render misclassification sheets for a run");
    report->add_option("run-dir", run_dir, "output directory of a previous run")->required();

    auto* inspect = app.add_subcommand("inspect-code", "print a code matrix as CSV");
    inspect->add_option("code", code_name, "ova | ovo | ecoc")->required();
    inspect->add_option("--classes", classes, "class count for ova/ovo");

    auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic digit corpus as IDX");
    gen->add_option("--count", count, "number of images");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--images", images_path, "output image file");
    gen->add_option("--labels", labels_path, "output label file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(config_path);
        if (*grid) return cmd_grid(config_path, tree);
        if (*report) return cmd_report(run_dir);
        if (*inspect) return cmd_inspect_code(code_name, classes);
        if (*gen) return cmd_gen_synthetic(count, seed, images_path, labels_path);
    } catch (const mnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const mnet::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
