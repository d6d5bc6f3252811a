#pragma once

// Experiment driver behind the CLI: flat key=value config files, dataset
// assembly, and the train / compare / pareto-demo / gradcheck subcommands.
// Everything a run emits is a deterministic function of (config file, seeds).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvmax/data.hpp"
#include "hvmax/gradcheck.hpp"
#include "hvmax/optim.hpp"
#include "hvmax/pareto.hpp"
#include "hvmax/record.hpp"
#include "hvmax/stats.hpp"

namespace hvmax::cli {

struct ExperimentConfig {
    // data source
    bool synthetic = true;
    std::string mnist_dir;  // expects train-images-idx3-ubyte / t10k-images-idx3-ubyte
    int side = 28;          // synthetic render size (images are side x side)
    int downsample = 2;
    int train_count = 1000;
    int valid_count = 500;
    int test_count = 500;
    std::uint64_t data_seed = 9001;

    // experiment grid
    std::vector<double> p_levels{0.1, 0.3};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::string objective = "both";  // mean | hv | both

    // optimizer
    double lr = 0.1;
    int batch = 100;
    int epochs = 20;
    double epsilon0 = 1.0;
    double kappa = 1.0;
    int hidden = 100;
    std::string mu_scope = "batch";  // batch | full

    std::string out = "out";
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

inline double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing chars");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + key + ": '" + v + "'");
    }
}

inline long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing chars");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
    }
}

/// seeds accept "3" and inclusive ranges "1-10"
inline std::vector<std::uint64_t> parse_seed_list(const std::string& v) {
    std::vector<std::uint64_t> out;
    for (const std::string& item : split_list(v)) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(static_cast<std::uint64_t>(parse_int(item, "seeds")));
        } else {
            const auto lo = parse_int(item.substr(0, dash), "seeds");
            const auto hi = parse_int(item.substr(dash + 1), "seeds");
            if (hi < lo) throw ConfigError("config: empty seed range '" + item + "'");
            for (long long s = lo; s <= hi; ++s)
                out.push_back(static_cast<std::uint64_t>(s));
        }
    }
    return out;
}

}  // namespace detail

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    if (key == "synthetic") cfg.synthetic = parse_bool(value, key);
    else if (key == "mnist_dir") cfg.mnist_dir = value;
    else if (key == "side") cfg.side = static_cast<int>(parse_int(value, key));
    else if (key == "downsample") cfg.downsample = static_cast<int>(parse_int(value, key));
    else if (key == "train_count") cfg.train_count = static_cast<int>(parse_int(value, key));
    else if (key == "valid_count") cfg.valid_count = static_cast<int>(parse_int(value, key));
    else if (key == "test_count") cfg.test_count = static_cast<int>(parse_int(value, key));
    else if (key == "data_seed")
        cfg.data_seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "p") {
        cfg.p_levels.clear();
        for (const std::string& item : detail::split_list(value))
            cfg.p_levels.push_back(parse_double(item, key));
    } else if (key == "seeds") cfg.seeds = detail::parse_seed_list(value);
    else if (key == "objective") cfg.objective = value;
    else if (key == "lr") cfg.lr = parse_double(value, key);
    else if (key == "batch") cfg.batch = static_cast<int>(parse_int(value, key));
    else if (key == "epochs") cfg.epochs = static_cast<int>(parse_int(value, key));
    else if (key == "epsilon0") cfg.epsilon0 = parse_double(value, key);
    else if (key == "kappa") cfg.kappa = parse_double(value, key);
    else if (key == "hidden") cfg.hidden = static_cast<int>(parse_int(value, key));
    else if (key == "mu_scope") cfg.mu_scope = value;
    else if (key == "out") cfg.out = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not key = value");
        apply_config_entry(cfg, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Canonical form: fixed key order, lists comma-joined, doubles at 9
/// significant digits. parse(serialize(c)) == c.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "synthetic = " << (cfg.synthetic ? "true" : "false") << '\n';
    os << "mnist_dir = " << cfg.mnist_dir << '\n';
    os << "side = " << cfg.side << '\n';
    os << "downsample = " << cfg.downsample << '\n';
    os << "train_count = " << cfg.train_count << '\n';
    os << "valid_count = " << cfg.valid_count << '\n';
    os << "test_count = " << cfg.test_count << '\n';
    os << "data_seed = " << cfg.data_seed << '\n';
    os << "p = ";
    for (std::size_t i = 0; i < cfg.p_levels.size(); ++i)
        os << (i ? "," : "") << record::format_g9(cfg.p_levels[i]);
    os << '\n';
    os << "seeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        os << (i ? "," : "") << cfg.seeds[i];
    os << '\n';
    os << "objective = " << cfg.objective << '\n';
    os << "lr = " << record::format_g9(cfg.lr) << '\n';
    os << "batch = " << cfg.batch << '\n';
    os << "epochs = " << cfg.epochs << '\n';
    os << "epsilon0 = " << record::format_g9(cfg.epsilon0) << '\n';
    os << "kappa = " << record::format_g9(cfg.kappa) << '\n';
    os << "hidden = " << cfg.hidden << '\n';
    os << "mu_scope = " << cfg.mu_scope << '\n';
    os << "out = " << cfg.out << '\n';
    return os.str();
}

inline bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (!cfg.synthetic && cfg.mnist_dir.empty())
        throw ConfigError("config: need synthetic=true or mnist_dir");
    if (cfg.side < 4) throw ConfigError("config: side must be >= 4");
    if (cfg.downsample < 1) throw ConfigError("config: downsample must be >= 1");
    if (cfg.train_count < 1 || cfg.valid_count < 1 || cfg.test_count < 1)
        throw ConfigError("config: split counts must be positive");
    if (cfg.p_levels.empty()) throw ConfigError("config: need at least one p level");
    for (double p : cfg.p_levels)
        if (p < 0.0 || p > 1.0) throw ConfigError("config: p outside [0,1]");
    if (cfg.seeds.empty()) throw ConfigError("config: need at least one seed");
    if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() !=
        cfg.seeds.size())
        throw ConfigError("config: seeds must be distinct");
    if (cfg.objective != "mean" && cfg.objective != "hv" && cfg.objective != "both")
        throw ConfigError("config: objective must be mean|hv|both");
    if (cfg.mu_scope != "batch" && cfg.mu_scope != "full")
        throw ConfigError("config: mu_scope must be batch|full");
    if (!(cfg.lr > 0.0)) throw ConfigError("config: lr must be > 0");
    if (cfg.batch < 1) throw ConfigError("config: batch must be >= 1");
    if (cfg.epochs < 1) throw ConfigError("config: epochs must be >= 1");
    if (!(cfg.epsilon0 > 0.0)) throw ConfigError("config: epsilon0 must be > 0");
    if (cfg.kappa < 0.0) throw ConfigError("config: kappa must be >= 0");
    if (cfg.hidden < 1) throw ConfigError("config: hidden must be >= 1");
    if (cfg.out.empty()) throw ConfigError("config: out must be set");
}

inline optim::TrainConfig to_train_config(const ExperimentConfig& cfg,
                                          record::Objective objective,
                                          std::uint64_t seed, double p) {
    optim::TrainConfig tc;
    tc.objective = objective;
    tc.learning_rate = cfg.lr;
    tc.batch_size = cfg.batch;
    tc.epochs = cfg.epochs;
    tc.schedule = {cfg.epsilon0, cfg.kappa};
    tc.seed = seed;
    tc.corruption_p = p;
    tc.hidden_dim = cfg.hidden;
    tc.mu_scope = cfg.mu_scope == "full" ? optim::MuScope::FullSet : optim::MuScope::Batch;
    return tc;
}

inline data::Dataset build_dataset(const ExperimentConfig& cfg) {
    const data::SplitCounts counts{cfg.train_count, cfg.valid_count, cfg.test_count};
    if (cfg.synthetic) {
        return data::downsample(data::synthetic_digits(counts, cfg.side, cfg.data_seed),
                                counts, cfg.downsample);
    }
    const std::filesystem::path dir = cfg.mnist_dir;
    const data::IdxImages train = data::load_idx_images(dir / "train-images-idx3-ubyte");
    const data::IdxImages test = data::load_idx_images(dir / "t10k-images-idx3-ubyte");
    return data::downsample(data::split_mnist(train, test), counts, cfg.downsample);
}

inline std::string run_filename(record::Objective objective, double p,
                                std::uint64_t seed) {
    return "run_" + record::objective_name(objective) + "_p" + record::format_g9(p) +
           "_s" + std::to_string(seed) + ".csv";
}

inline std::vector<record::Objective> selected_objectives(const ExperimentConfig& cfg) {
    if (cfg.objective == "mean") return {record::Objective::MeanLoss};
    if (cfg.objective == "hv") return {record::Objective::Hypervolume};
    return {record::Objective::MeanLoss, record::Objective::Hypervolume};
}

/// Train the whole (p, seed, objective) grid; one run CSV each, plus the
/// effective config in canonical form next to them.
inline int cmd_train(const ExperimentConfig& cfg, std::ostream& log) {
    validate_config(cfg);
    const data::Dataset ds = build_dataset(cfg);
    const std::filesystem::path out_dir = cfg.out;
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream cf(out_dir / "config.cfg");
        cf << serialize_config(cfg);
    }
    for (double p : cfg.p_levels)
        for (std::uint64_t seed : cfg.seeds)
            for (record::Objective objective : selected_objectives(cfg)) {
                const optim::TrainConfig tc = to_train_config(cfg, objective, seed, p);
                const record::RunRecord rec = optim::train_run(ds, tc);
                const std::filesystem::path path =
                    out_dir / run_filename(objective, p, seed);
                std::ofstream f(path);
                if (!f) throw std::runtime_error("cmd_train: cannot write " + path.string());
                record::write_run_csv(f, rec);
                log << "wrote " << path.string() << " (final test mean "
                    << record::format_g9(rec.epochs.back().test.mean_loss) << ")\n";
            }
    return 0;
}

namespace detail {

inline record::RunRecord load_run(const std::filesystem::path& dir,
                                  record::Objective objective, double p,
                                  std::uint64_t seed) {
    const std::filesystem::path path = dir / run_filename(objective, p, seed);
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cmd_compare: missing run file " + path.string());
    return record::read_run_csv(f, seed, objective, p);
}

inline const char* split_name(record::Split s) {
    switch (s) {
        case record::Split::Train: return "train";
        case record::Split::Valid: return "valid";
        default: return "test";
    }
}

inline const char* metric_name(record::Metric m) {
    return m == record::Metric::Mean ? "mean" : "max";
}

}  // namespace detail

/// Read the run CSVs produced by cmd_train, emit per-split difference-series
/// CSVs (baseline minus hypervolume; positive favors hypervolume) and a
/// summary table with the paired t-test at each corruption level. Test-set
/// means are taken at each run's own best-validation epoch.
inline int cmd_compare(const ExperimentConfig& cfg, std::ostream& log) {
    validate_config(cfg);
    const std::filesystem::path out_dir = cfg.out;
    std::ofstream summary(out_dir / "summary.csv");
    if (!summary)
        throw std::runtime_error("cmd_compare: cannot write summary.csv in " +
                                 out_dir.string());
    summary << "corruption_p,mean_loss_baseline,sd_baseline,mean_loss_hv,sd_hv,t,p\n";

    for (double p : cfg.p_levels) {
        std::vector<record::RunRecord> base, hv;
        for (std::uint64_t seed : cfg.seeds) {
            base.push_back(detail::load_run(out_dir, record::Objective::MeanLoss, p, seed));
            hv.push_back(detail::load_run(out_dir, record::Objective::Hypervolume, p, seed));
        }

        for (record::Split split :
             {record::Split::Train, record::Split::Valid, record::Split::Test})
            for (record::Metric metric : {record::Metric::Mean, record::Metric::Max}) {
                const auto series = stats::difference_series(base, hv, split, metric);
                const std::string name = std::string("diff_") + detail::split_name(split) +
                                         "_" + detail::metric_name(metric) + "_p" +
                                         record::format_g9(p) + ".csv";
                std::ofstream f(out_dir / name);
                f << "epoch,median,lower,upper\n";
                for (const auto& pt : series)
                    f << pt.epoch << ',' << record::format_g9(pt.median) << ','
                      << record::format_g9(pt.lower) << ','
                      << record::format_g9(pt.upper) << '\n';
            }

        std::vector<double> a, b;
        for (std::size_t i = 0; i < base.size(); ++i) {
            a.push_back(base[i]
                            .epochs[static_cast<std::size_t>(
                                stats::best_validation_epoch(base[i]))]
                            .test.mean_loss);
            b.push_back(hv[i]
                            .epochs[static_cast<std::size_t>(
                                stats::best_validation_epoch(hv[i]))]
                            .test.mean_loss);
        }
        std::string t_text = "nan", p_text = "nan";
        try {
            const stats::TTestResult tt = stats::paired_t_test(a, b);
            t_text = record::format_g9(tt.t);
            p_text = record::format_g9(tt.p_two_sided);
        } catch (const stats::ZeroVariance&) {
            log << "p=" << record::format_g9(p)
                << ": zero variance across paired differences, t-test undefined\n";
        }
        int wins = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (b[i] < a[i]) ++wins;
        summary << record::format_g9(p) << ',' << record::format_g9(stats::mean(a)) << ','
                << record::format_g9(stats::sample_stdev(a)) << ','
                << record::format_g9(stats::mean(b)) << ','
                << record::format_g9(stats::sample_stdev(b)) << ',' << t_text << ','
                << p_text << '\n';
        log << "p=" << record::format_g9(p) << ": baseline " << record::format_g9(stats::mean(a))
            << " (sd " << record::format_g9(stats::sample_stdev(a)) << "), hv "
            << record::format_g9(stats::mean(b)) << " (sd "
            << record::format_g9(stats::sample_stdev(b)) << "), hv wins " << wins << "/"
            << a.size() << ", t=" << t_text << ", p=" << p_text << "\n";
    }
    return 0;
}

struct ParetoDemoConfig {
    double exponent = 0.9;
    double z1 = 2.0;
    double z2 = 2.0;
    double w1 = 1.0;
    double w2 = 1.0;
    double grid_step = 1e-4;
};

/// Sweep the toy frontier and emit (x, f1, f2, linear, log_hv) rows; reports
/// where each scalarizer lands.
inline int cmd_pareto_demo(const ParetoDemoConfig& demo, std::ostream& csv,
                           std::ostream& log) {
    const pareto::ToyProblem prob{demo.exponent};
    const double linear_x =
        pareto::linear_argmin(prob, demo.w1, demo.w2, demo.grid_step);
    const double hv_x = pareto::hv_argmax(prob, demo.z1, demo.z2, demo.grid_step);
    const long m = std::lround(1.0 / demo.grid_step);
    csv << "x,f1,f2,linear,log_hv\n";
    for (long k = 0; k <= m; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(m);
        const auto [f1, f2] = pareto::toy_objectives(x, prob);
        csv << record::format_g9(x) << ',' << record::format_g9(f1) << ','
            << record::format_g9(f2) << ','
            << record::format_g9(demo.w1 * f1 + demo.w2 * f2) << ','
            << record::format_g9(scalarize::log_hypervolume({f1, f2}, {{demo.z1, demo.z2}}))
            << '\n';
    }
    log << "linear argmin x = " << record::format_g9(linear_x) << "\n";
    log << "hypervolume argmax x = " << record::format_g9(hv_x) << "\n";
    return 0;
}

/// Finite-difference verification suites; exit status follows the 1e-5 gate.
inline int cmd_gradcheck(std::uint64_t seed, int input_dim, int hidden_dim, int trials,
                         std::ostream& log, double perturb = 0.0) {
    if (input_dim > 16 || hidden_dim > 8)
        throw ConfigError("cmd_gradcheck: dims capped at 16->8->16");
    const gradcheck::CheckResult wb = gradcheck::check_weighted_backward(
        seed, input_dim, hidden_dim, trials, gradcheck::kDefaultStep,
        gradcheck::kDefaultThreshold, perturb);
    const gradcheck::CheckResult hc = gradcheck::check_hypervolume_chain(
        seed, input_dim, hidden_dim, trials, gradcheck::kDefaultStep,
        gradcheck::kDefaultThreshold, perturb);
    for (const auto& r : {wb, hc})
        log << r.name << ": max rel err " << record::format_g9(r.max_rel) << " over "
            << r.trials << " trials -> " << (r.pass ? "pass" : "FAIL") << "\n";
    return wb.pass && hc.pass ? 0 : 2;
}

}  // namespace hvmax::cli
