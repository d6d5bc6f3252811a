// Command-line driver: train / compare / pareto-demo / gradcheck.
// Exit codes: 0 success, 1 validation or IO error, 2 failed check.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hvmax/experiment.hpp"

namespace {

using hvmax::cli::ExperimentConfig;

// --config is applied before the remaining flags so that explicit flags win.
ExperimentConfig config_from_argv(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            return hvmax::cli::parse_config_file(argv[i + 1]);
        if (arg.rfind("--config=", 0) == 0)
            return hvmax::cli::parse_config_file(arg.substr(9));
    }
    return ExperimentConfig{};
}

void add_experiment_flags(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--config", "flat key=value config file (applied first)");
    cmd->add_option("--objective", cfg.objective, "mean | hv | both");
    cmd->add_option_function<std::string>(
        "--seed",
        [&cfg](const std::string& v) {
            cfg.seeds = hvmax::cli::detail::parse_seed_list(v);
        },
        "seed list, e.g. 3 or 1-10 or 1,2,5");
    cmd->add_option_function<std::string>(
        "--p",
        [&cfg](const std::string& v) {
            cfg.p_levels.clear();
            for (const std::string& item : hvmax::cli::detail::split_list(v))
                cfg.p_levels.push_back(hvmax::cli::detail::parse_double(item, "p"));
        },
        "corruption levels, e.g. 0.1,0.3");
    cmd->add_option("--epochs", cfg.epochs, "training epochs");
    cmd->add_option("--lr", cfg.lr, "learning rate");
    cmd->add_option("--batch", cfg.batch, "minibatch size");
    cmd->add_option("--epsilon0", cfg.epsilon0, "initial Nadir slack");
    cmd->add_option("--kappa", cfg.kappa, "Nadir slack growth per epoch");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_flag("--synthetic,!--no-synthetic", cfg.synthetic,
                  "use the synthetic digit corpus (--no-synthetic for MNIST)");
    cmd->add_option("--downsample", cfg.downsample, "pixel block-mean factor");
    cmd->add_option("--mnist-dir", cfg.mnist_dir,
                    "directory with train-images-idx3-ubyte / t10k-images-idx3-ubyte");
    cmd->add_option("--hidden", cfg.hidden, "hidden units");
    cmd->add_option("--side", cfg.side, "synthetic image side length");
    cmd->add_option("--train-count", cfg.train_count, "training images");
    cmd->add_option("--valid-count", cfg.valid_count, "validation images");
    cmd->add_option("--test-count", cfg.test_count, "test images");
    cmd->add_option("--data-seed", cfg.data_seed, "dataset synthesis seed");
    cmd->add_option("--mu-scope", cfg.mu_scope, "batch | full");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypervolume-maximization training objective for denoising autoencoders"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    try {
        cfg = config_from_argv(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App* train = app.add_subcommand("train", "train the (p, seed, objective) grid");
    add_experiment_flags(train, cfg);
    CLI::App* compare =
        app.add_subcommand("compare", "difference series + t-test summary from run CSVs");
    add_experiment_flags(compare, cfg);

    hvmax::cli::ParetoDemoConfig demo;
    std::string demo_out;
    CLI::App* pareto = app.add_subcommand("pareto-demo", "toy frontier scalarizer sweep");
    pareto->add_option("--exponent", demo.exponent, "frontier exponent in (0,1)");
    pareto->add_option("--z1", demo.z1, "reference point, first objective");
    pareto->add_option("--z2", demo.z2, "reference point, second objective");
    pareto->add_option("--w1", demo.w1, "linear weight, first objective");
    pareto->add_option("--w2", demo.w2, "linear weight, second objective");
    pareto->add_option("--step", demo.grid_step, "grid step (<= 1e-4)");
    pareto->add_option("--out", demo_out, "CSV path (default: stdout)");

    std::uint64_t gc_seed = 42;
    int gc_input = 6, gc_hidden = 4, gc_trials = 10;
    CLI::App* gradcheck =
        app.add_subcommand("gradcheck", "finite-difference gradient verification");
    gradcheck->add_option("--seed", gc_seed, "fixture seed");
    gradcheck->add_option("--input-dim", gc_input, "input width (<= 16)");
    gradcheck->add_option("--hidden-dim", gc_hidden, "hidden width (<= 8)");
    gradcheck->add_option("--trials", gc_trials, "random trials per suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) return hvmax::cli::cmd_train(cfg, std::cout);
        if (compare->parsed()) return hvmax::cli::cmd_compare(cfg, std::cout);
        if (pareto->parsed()) {
            if (demo_out.empty())
                return hvmax::cli::cmd_pareto_demo(demo, std::cout, std::cerr);
            std::ofstream csv(demo_out);
            if (!csv) {
                std::cerr << "error: cannot write " << demo_out << "\n";
                return 1;
            }
            return hvmax::cli::cmd_pareto_demo(demo, csv, std::cout);
        }
        if (gradcheck->parsed())
            return hvmax::cli::cmd_gradcheck(gc_seed, gc_input, gc_hidden, gc_trials,
                                             std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
