#pragma once

// Central-difference verification of the analytic gradients: the plain
// weighted loss sum, and the hypervolume chain (fixed-mu log H whose exact
// gradient is -sum_i w_i dl_i/dtheta with w_i = 1/(mu - l_i)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hvmax/net.hpp"
#include "hvmax/rng.hpp"
#include "hvmax/scalarize.hpp"

namespace hvmax::gradcheck {

using net::AutoencoderParams;
using net::Matrix;
using net::ParamGradient;

inline constexpr double kDefaultStep = 1e-6;
inline constexpr double kDefaultThreshold = 1e-5;

/// Central differences over every coordinate of every parameter block.
template <class F>
ParamGradient fd_gradient(AutoencoderParams p, F&& f, double h = kDefaultStep) {
    ParamGradient g = p;  // take the shape
    const auto diff_block = [&](Matrix& block, Matrix& out) {
        for (Eigen::Index r = 0; r < block.rows(); ++r)
            for (Eigen::Index c = 0; c < block.cols(); ++c) {
                const double saved = block(r, c);
                block(r, c) = saved + h;
                const double up = f(p);
                block(r, c) = saved - h;
                const double down = f(p);
                block(r, c) = saved;
                out(r, c) = (up - down) / (2.0 * h);
            }
    };
    const auto diff_vec = [&](net::Vector& block, net::Vector& out) {
        for (Eigen::Index r = 0; r < block.rows(); ++r) {
            const double saved = block(r);
            block(r) = saved + h;
            const double up = f(p);
            block(r) = saved - h;
            const double down = f(p);
            block(r) = saved;
            out(r) = (up - down) / (2.0 * h);
        }
    };
    diff_block(p.enc_weights, g.enc_weights);
    diff_vec(p.enc_bias, g.enc_bias);
    diff_block(p.dec_weights, g.dec_weights);
    diff_vec(p.dec_bias, g.dec_bias);
    return g;
}

namespace detail {

inline double inf_norm(const ParamGradient& g) {
    return std::max({g.enc_weights.cwiseAbs().maxCoeff(), g.enc_bias.cwiseAbs().maxCoeff(),
                     g.dec_weights.cwiseAbs().maxCoeff(), g.dec_bias.cwiseAbs().maxCoeff()});
}

}  // namespace detail

/// Worst per-entry relative error between the two gradients. The denominator
/// floor 1e-3 * ||fd||_inf keeps entries that are zero up to fd roundoff
/// (saturated sigmoids) from reading as spurious misfits.
inline double max_relative_error(const ParamGradient& analytic, const ParamGradient& fd) {
    const double floor = 1e-3 * detail::inf_norm(fd);
    double worst = 0.0;
    const auto scan = [&](const auto& a, const auto& f) {
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            for (Eigen::Index c = 0; c < a.cols(); ++c) {
                const double denom =
                    std::max({std::abs(a(r, c)), std::abs(f(r, c)), floor});
                worst = std::max(worst, std::abs(a(r, c) - f(r, c)) / denom);
            }
    };
    scan(analytic.enc_weights, fd.enc_weights);
    scan(analytic.enc_bias, fd.enc_bias);
    scan(analytic.dec_weights, fd.dec_weights);
    scan(analytic.dec_bias, fd.dec_bias);
    return worst;
}

struct CheckResult {
    std::string name;
    int trials = 0;
    double max_rel = 0.0;
    bool pass = false;
};

namespace detail {

struct Fixture {
    AutoencoderParams params;
    net::Batch batch;
};

inline Fixture make_fixture(std::uint64_t seed, int input_dim, int hidden_dim,
                            std::uint64_t trial) {
    Fixture fx;
    fx.params = net::init_params(rng::derive_seed(seed, rng::kCheckTag, 2 * trial),
                                 input_dim, hidden_dim);
    rng::Stream data(rng::derive_seed(seed, rng::kCheckTag, 2 * trial + 1));
    constexpr Eigen::Index kBatch = 5;
    fx.batch.clean.resize(kBatch, input_dim);
    fx.batch.corrupted.resize(kBatch, input_dim);
    for (Eigen::Index i = 0; i < kBatch; ++i)
        for (Eigen::Index j = 0; j < input_dim; ++j) {
            fx.batch.clean(i, j) = data.uniform();
            fx.batch.corrupted(i, j) = data.uniform();
        }
    return fx;
}

}  // namespace detail

/// weighted_backward vs central differences of F(theta) = sum_i w_i l_i(theta)
/// with fixed arbitrary positive weights. `perturb` poisons one analytic
/// entry (negative-control hook); 0 checks the real gradient.
inline CheckResult check_weighted_backward(std::uint64_t seed, int input_dim,
                                           int hidden_dim, int trials,
                                           double h = kDefaultStep,
                                           double threshold = kDefaultThreshold,
                                           double perturb = 0.0) {
    CheckResult res{"weighted_backward", trials, 0.0, false};
    for (int trial = 0; trial < trials; ++trial) {
        detail::Fixture fx = detail::make_fixture(seed, input_dim, hidden_dim,
                                                  static_cast<std::uint64_t>(trial));
        rng::Stream wstream(
            rng::derive_seed(seed, rng::kCheckTag, 1000 + static_cast<std::uint64_t>(trial)));
        scalarize::WeightVector w;
        for (Eigen::Index i = 0; i < fx.batch.clean.rows(); ++i)
            w.values.push_back(wstream.uniform(0.5, 1.5));

        ParamGradient analytic = net::weighted_backward(fx.params, fx.batch, w);
        analytic.enc_weights(0, 0) += perturb;
        const ParamGradient fd = fd_gradient(
            fx.params,
            [&](const AutoencoderParams& q) {
                return scalarize::linear_scalarize(
                    net::per_sample_loss(net::forward(q, fx.batch.corrupted),
                                         fx.batch.clean),
                    w.values);
            },
            h);
        res.max_rel = std::max(res.max_rel, max_relative_error(analytic, fd));
    }
    res.pass = res.max_rel < threshold;
    return res;
}

/// The self-adjusting-weights identity: with mu fixed, the exact gradient of
/// log H_mu(l(theta)) is -sum_i w_i dl_i/dtheta, w_i = 1/(mu - l_i(theta0)).
inline CheckResult check_hypervolume_chain(std::uint64_t seed, int input_dim,
                                           int hidden_dim, int trials,
                                           double h = kDefaultStep,
                                           double threshold = kDefaultThreshold,
                                           double perturb = 0.0) {
    CheckResult res{"hypervolume_chain", trials, 0.0, false};
    for (int trial = 0; trial < trials; ++trial) {
        detail::Fixture fx = detail::make_fixture(seed, input_dim, hidden_dim,
                                                  5000 + static_cast<std::uint64_t>(trial));
        const scalarize::LossVector losses = net::per_sample_loss(
            net::forward(fx.params, fx.batch.corrupted), fx.batch.clean);
        const scalarize::Mu mu = scalarize::mu_for_batch(losses, 1.0);
        const scalarize::WeightVector w = scalarize::hv_weights(losses, mu);

        ParamGradient analytic = net::weighted_backward(fx.params, fx.batch, w);
        analytic.enc_weights *= -1.0;
        analytic.enc_bias *= -1.0;
        analytic.dec_weights *= -1.0;
        analytic.dec_bias *= -1.0;
        analytic.enc_weights(0, 0) += perturb;
        const ParamGradient fd = fd_gradient(
            fx.params,
            [&](const AutoencoderParams& q) {
                return scalarize::log_hypervolume_mu(
                    net::per_sample_loss(net::forward(q, fx.batch.corrupted),
                                         fx.batch.clean),
                    mu);
            },
            h);
        res.max_rel = std::max(res.max_rel, max_relative_error(analytic, fd));
    }
    res.pass = res.max_rel < threshold;
    return res;
}

}  // namespace hvmax::gradcheck
