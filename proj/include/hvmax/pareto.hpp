#pragma once

// Two-objective toy problem with a concave Pareto frontier: f1(x) = x,
// f2(x) = (1-x)^q on x in [0,1] with q in (0,1). Every x is Pareto-optimal,
// so scalarizer argmins reveal which frontier points a scalarizer can reach.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "hvmax/scalarize.hpp"

namespace hvmax::pareto {

struct ToyProblem {
    double exponent = 0.9;
};

namespace detail {

inline void validate(const ToyProblem& p) {
    if (!(p.exponent > 0.0) || !(p.exponent < 1.0))
        throw std::invalid_argument("ToyProblem: exponent must lie in (0,1)");
}

inline long grid_size(double grid_step) {
    if (!(grid_step > 0.0) || grid_step > 1e-4)
        throw std::invalid_argument("grid_step must lie in (0, 1e-4]");
    return std::lround(1.0 / grid_step);
}

}  // namespace detail

inline std::pair<double, double> toy_objectives(double x, const ToyProblem& p) {
    detail::validate(p);
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("toy_objectives: x outside [0,1]");
    return {x, std::pow(1.0 - x, p.exponent)};
}

/// Grid argmin of w1*f1 + w2*f2 over x_k = k/M. Ties resolve to the smaller
/// x (first strict improvement wins). On this concave frontier the minimum
/// sits at an endpoint for every weight ratio.
inline double linear_argmin(const ToyProblem& p, double w1, double w2,
                            double grid_step) {
    detail::validate(p);
    if (w1 < 0.0 || w2 < 0.0 || !(w1 + w2 > 0.0))
        throw std::invalid_argument("linear_argmin: weights must be >= 0, not both 0");
    const long m = detail::grid_size(grid_step);
    double best_x = 0.0, best_v = 0.0;
    for (long k = 0; k <= m; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(m);
        const auto [f1, f2] = toy_objectives(x, p);
        const double v = w1 * f1 + w2 * f2;
        if (k == 0 || v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

/// Grid argmax of log(z1-f1) + log(z2-f2). Requires z to strictly dominate
/// the whole frontier (z1, z2 > 1). Unlike any fixed linear weighting, the
/// maximizer can land in the interior of the concave frontier.
inline double hv_argmax(const ToyProblem& p, double z1, double z2, double grid_step) {
    detail::validate(p);
    if (!(z1 > 1.0) || !(z2 > 1.0))
        throw std::invalid_argument("hv_argmax: need z1, z2 > 1 to dominate the frontier");
    const long m = detail::grid_size(grid_step);
    double best_x = 0.0, best_v = 0.0;
    for (long k = 0; k <= m; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(m);
        const auto [f1, f2] = toy_objectives(x, p);
        const double v = scalarize::log_hypervolume({f1, f2}, {{z1, z2}});
        if (k == 0 || v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace hvmax::pareto
