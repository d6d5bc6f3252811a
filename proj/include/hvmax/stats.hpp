#pragma once

// Paired run comparison: per-epoch difference series, best-validation-epoch
// selection, and a paired two-sided t-test. The Student-t CDF is evaluated
// through the regularized incomplete beta function (Lentz continued
// fraction), pinned by external high-precision references in the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvmax/record.hpp"

namespace hvmax::stats {

/// All paired differences are identical, so the t statistic is undefined.
/// Surfaced to the caller rather than silently returning infinity.
class ZeroVariance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

/// Sample standard deviation (ddof = 1).
inline double sample_stdev(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("sample_stdev: need n >= 2");
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

namespace detail {

// Lentz's method for the continued fraction of the incomplete beta
// (Numerical Recipes form).
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("betacf: continued fraction failed to converge");
}

}  // namespace detail

/// I_x(a, b), the regularized incomplete beta function.
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("regularized_incomplete_beta: need a, b > 0");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("regularized_incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // use the fraction on whichever side converges fast
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
    return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

/// P(T <= t) for T ~ Student-t with df degrees of freedom.
inline double student_t_cdf(double t, int df) {
    if (df < 1) throw std::invalid_argument("student_t_cdf: df must be >= 1");
    const double nu = static_cast<double>(df);
    const double x = nu / (nu + t * t);
    const double tail = regularized_incomplete_beta(nu / 2.0, 0.5, x);
    return t < 0.0 ? tail / 2.0 : 1.0 - tail / 2.0;
}

struct TTestResult {
    double t = 0.0;
    double p_two_sided = 1.0;
};

/// Two-sided paired t-test on matched samples a_i, b_i (d = a - b).
/// Positive t means a exceeds b on average.
inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("paired_t_test: size mismatch");
    if (a.size() < 2) throw std::invalid_argument("paired_t_test: need n >= 2");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double md = mean(d);
    const double sd = sample_stdev(d);
    if (sd == 0.0)
        throw ZeroVariance("paired_t_test: all paired differences identical");
    TTestResult r;
    const double n = static_cast<double>(d.size());
    r.t = md * std::sqrt(n) / sd;
    const double nu = n - 1.0;
    r.p_two_sided = regularized_incomplete_beta(nu / 2.0, 0.5, nu / (nu + r.t * r.t));
    return r;
}

/// Index of the epoch with the lowest validation mean loss; earliest wins
/// ties. For canonical records (epoch k stored at index k) the index is the
/// epoch number itself.
inline int best_validation_epoch(const record::RunRecord& r) {
    if (r.epochs.empty())
        throw std::invalid_argument("best_validation_epoch: empty record");
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.epochs.size(); ++i)
        if (r.epochs[i].valid.mean_loss < r.epochs[best].valid.mean_loss) best = i;
    return static_cast<int>(best);
}

struct DifferencePoint {
    int epoch = 0;
    double median = 0.0;
    double lower = 0.0;  // min over seeds
    double upper = 0.0;  // max over seeds
};

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Per-epoch spread of (baseline - hypervolume) for one split/metric across
/// seed-matched run pairs. Positive values favor the hypervolume objective.
inline std::vector<DifferencePoint> difference_series(
    const std::vector<record::RunRecord>& baseline,
    const std::vector<record::RunRecord>& hypervolume, record::Split split,
    record::Metric metric) {
    if (baseline.empty() || baseline.size() != hypervolume.size())
        throw std::invalid_argument("difference_series: run counts differ or empty");

    std::map<std::uint64_t, const record::RunRecord*> by_seed;
    for (const auto& r : hypervolume)
        if (!by_seed.emplace(r.seed, &r).second)
            throw std::invalid_argument("difference_series: duplicate seed " +
                                        std::to_string(r.seed));

    const std::size_t n_epochs = baseline.front().epochs.size();
    std::vector<DifferencePoint> out(n_epochs);
    std::vector<std::vector<double>> diffs(n_epochs);

    for (const auto& base : baseline) {
        const auto it = by_seed.find(base.seed);
        if (it == by_seed.end())
            throw std::invalid_argument("difference_series: seed " +
                                        std::to_string(base.seed) +
                                        " is unpaired or repeated");
        const record::RunRecord& hv = *it->second;
        if (base.epochs.size() != n_epochs || hv.epochs.size() != n_epochs)
            throw std::invalid_argument("difference_series: epoch counts differ");
        for (std::size_t e = 0; e < n_epochs; ++e)
            diffs[e].push_back(record::metric_of(base.epochs[e], split, metric) -
                               record::metric_of(hv.epochs[e], split, metric));
        by_seed.erase(it);  // each pair may be consumed once
    }

    for (std::size_t e = 0; e < n_epochs; ++e) {
        out[e].epoch = baseline.front().epochs[e].epoch;
        out[e].median = detail::median_of(diffs[e]);
        const auto [lo, hi] = std::minmax_element(diffs[e].begin(), diffs[e].end());
        out[e].lower = *lo;
        out[e].upper = *hi;
    }
    return out;
}

}  // namespace hvmax::stats
