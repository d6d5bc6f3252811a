#pragma once

// Scalarization of vector-valued losses: weighted means and the logarithmic
// hypervolume objective with its self-adjusting weights and Nadir schedule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hvmax::scalarize {

using LossVector = std::vector<double>;

/// A reference-point component failed to strictly dominate its objective
/// (z_i <= f_i). The hypervolume objective is undefined there; callers must
/// fix the reference point, not clamp the value.
class DominanceViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The slack epsilon handed to the Nadir schedule was <= 0.
class NonPositiveSlack : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Shared reference value mu used when every objective gets the same bound.
struct Mu {
    double value;
};

/// Per-objective reference point z.
struct NadirPoint {
    std::vector<double> z;
};

/// Linear slack growth: eps(t) = eps0 + kappa * t, t = 0-based epoch index.
struct NadirSchedule {
    double epsilon0 = 1.0;
    double kappa = 1.0;
};

struct WeightVector {
    std::vector<double> values;
    bool normalized = false;
};

namespace detail {

inline void require_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

inline void require_nonempty(std::size_t n, const char* what) {
    if (n == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}

}  // namespace detail

inline double epsilon_at(const NadirSchedule& s, int epoch) {
    if (epoch < 0) throw std::invalid_argument("epsilon_at: negative epoch");
    if (!(s.epsilon0 > 0.0)) throw NonPositiveSlack("epsilon_at: epsilon0 must be > 0");
    if (s.kappa < 0.0) throw std::invalid_argument("epsilon_at: kappa must be >= 0");
    return s.epsilon0 + s.kappa * static_cast<double>(epoch);
}

/// mu for one batch: strict upper bound max(losses) + epsilon.
inline Mu mu_for_batch(const LossVector& losses, double epsilon) {
    detail::require_nonempty(losses.size(), "mu_for_batch");
    detail::require_finite(losses, "mu_for_batch");
    if (!(epsilon > 0.0)) throw NonPositiveSlack("mu_for_batch: epsilon must be > 0");
    return Mu{*std::max_element(losses.begin(), losses.end()) + epsilon};
}

/// Plain weighted sum; weights need not be normalized but must be
/// non-negative with at least one positive entry.
inline double linear_scalarize(const LossVector& losses, std::span<const double> weights) {
    detail::require_nonempty(losses.size(), "linear_scalarize");
    if (losses.size() != weights.size())
        throw std::invalid_argument("linear_scalarize: size mismatch");
    detail::require_finite(losses, "linear_scalarize");
    detail::require_finite(weights, "linear_scalarize");
    double wsum = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (weights[i] < 0.0)
            throw std::invalid_argument("linear_scalarize: negative weight");
        wsum += weights[i];
        acc += weights[i] * losses[i];
    }
    if (!(wsum > 0.0))
        throw std::invalid_argument("linear_scalarize: all weights zero");
    return acc;
}

/// log of the dominated-volume product: sum_i log(z_i - f_i).
inline double log_hypervolume(const LossVector& objectives, const NadirPoint& nadir) {
    detail::require_nonempty(objectives.size(), "log_hypervolume");
    if (objectives.size() != nadir.z.size())
        throw std::invalid_argument("log_hypervolume: size mismatch");
    detail::require_finite(objectives, "log_hypervolume");
    detail::require_finite(nadir.z, "log_hypervolume");
    double acc = 0.0;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        const double gap = nadir.z[i] - objectives[i];
        if (!(gap > 0.0))
            throw DominanceViolation("log_hypervolume: z_i <= f_i at index " +
                                     std::to_string(i));
        acc += std::log(gap);
    }
    return acc;
}

/// Shared-reference form: sum_i log(mu - l_i).
inline double log_hypervolume_mu(const LossVector& losses, Mu mu) {
    return log_hypervolume(losses, NadirPoint{LossVector(losses.size(), mu.value)});
}

/// Self-adjusting weights w_i = 1 / (mu - l_i). Unnormalized; strictly
/// positive whenever mu strictly dominates every loss.
inline WeightVector hv_weights(const LossVector& losses, Mu mu) {
    detail::require_nonempty(losses.size(), "hv_weights");
    detail::require_finite(losses, "hv_weights");
    if (!std::isfinite(mu.value))
        throw std::invalid_argument("hv_weights: non-finite mu");
    WeightVector w;
    w.values.reserve(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) {
        const double gap = mu.value - losses[i];
        if (!(gap > 0.0))
            throw DominanceViolation("hv_weights: mu <= l_i at index " +
                                     std::to_string(i));
        w.values.push_back(1.0 / gap);
    }
    return w;
}

/// Scale to unit sum. Requires strictly positive input weights.
inline WeightVector normalize_weights(const WeightVector& w) {
    detail::require_nonempty(w.values.size(), "normalize_weights");
    detail::require_finite(w.values, "normalize_weights");
    double sum = 0.0;
    for (double v : w.values) {
        if (!(v > 0.0))
            throw std::invalid_argument("normalize_weights: non-positive weight");
        sum += v;
    }
    WeightVector out;
    out.values.reserve(w.values.size());
    for (double v : w.values) out.values.push_back(v / sum);
    out.normalized = true;
    return out;
}

}  // namespace hvmax::scalarize
