#pragma once

// Training-run bookkeeping and its CSV wire format.

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hvmax::record {

enum class Objective { MeanLoss, Hypervolume };
enum class Split { Train, Valid, Test };
enum class Metric { Mean, Max };

inline std::string objective_name(Objective o) {
    return o == Objective::MeanLoss ? "mean" : "hv";
}

inline Objective objective_from_name(const std::string& s) {
    if (s == "mean") return Objective::MeanLoss;
    if (s == "hv") return Objective::Hypervolume;
    throw std::invalid_argument("unknown objective '" + s + "' (want mean|hv)");
}

struct SplitMetrics {
    double mean_loss = 0.0;
    double max_loss = 0.0;
};

struct EpochMetrics {
    int epoch = 0;  // 0 = before any update
    SplitMetrics train, valid, test;
};

struct RunRecord {
    std::uint64_t seed = 0;
    Objective objective = Objective::MeanLoss;
    double corruption_p = 0.0;
    std::vector<EpochMetrics> epochs;  // epochs.size() == trained epochs + 1
};

inline double metric_of(const EpochMetrics& m, Split s, Metric k) {
    const SplitMetrics& sm =
        s == Split::Train ? m.train : (s == Split::Valid ? m.valid : m.test);
    return k == Metric::Mean ? sm.mean_loss : sm.max_loss;
}

/// Canonical float formatting for every CSV we emit: shortest form at 9
/// significant digits. Determinism of outputs depends on this being the only
/// double->text path.
inline std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline constexpr const char* kRunCsvHeader =
    "epoch,train_mean,train_max,valid_mean,valid_max,test_mean,test_max";

inline void write_run_csv(std::ostream& os, const RunRecord& r) {
    os << kRunCsvHeader << '\n';
    for (const EpochMetrics& m : r.epochs)
        os << m.epoch << ',' << format_g9(m.train.mean_loss) << ','
           << format_g9(m.train.max_loss) << ',' << format_g9(m.valid.mean_loss) << ','
           << format_g9(m.valid.max_loss) << ',' << format_g9(m.test.mean_loss) << ','
           << format_g9(m.test.max_loss) << '\n';
}

/// Inverse of write_run_csv. Seed/objective/p are not part of the file body;
/// the caller supplies them (they live in the file name).
inline RunRecord read_run_csv(std::istream& is, std::uint64_t seed, Objective objective,
                              double corruption_p) {
    RunRecord r;
    r.seed = seed;
    r.objective = objective;
    r.corruption_p = corruption_p;
    std::string line;
    if (!std::getline(is, line) || line != kRunCsvHeader)
        throw std::runtime_error("read_run_csv: missing or wrong header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        EpochMetrics m;
        char comma;
        fields >> m.epoch >> comma >> m.train.mean_loss >> comma >> m.train.max_loss >>
            comma >> m.valid.mean_loss >> comma >> m.valid.max_loss >> comma >>
            m.test.mean_loss >> comma >> m.test.max_loss;
        if (!fields) throw std::runtime_error("read_run_csv: malformed row: " + line);
        r.epochs.push_back(m);
    }
    if (r.epochs.empty()) throw std::runtime_error("read_run_csv: no data rows");
    return r;
}

}  // namespace hvmax::record
