#pragma once

// Dense sigmoid-sigmoid denoising autoencoder with per-sample weighted
// cross-entropy gradients. Rows are samples throughout.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hvmax/rng.hpp"
#include "hvmax/scalarize.hpp"

namespace hvmax::net {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct AutoencoderParams {
    Matrix enc_weights;  // hidden x input
    Vector enc_bias;     // hidden
    Matrix dec_weights;  // input x hidden, untied
    Vector dec_bias;     // input

    Eigen::Index input_dim() const { return dec_weights.rows(); }
    Eigen::Index hidden_dim() const { return enc_weights.rows(); }
};

// gradients share the parameter layout
using ParamGradient = AutoencoderParams;

/// One minibatch: clean targets and their corrupted counterparts.
struct Batch {
    Matrix clean;      // B x input
    Matrix corrupted;  // B x input
};

struct ForwardPass {
    Matrix hidden;          // B x hidden
    Matrix reconstruction;  // B x input
};

namespace detail {

inline Matrix sigmoid(const Matrix& a) {
    return (1.0 / (1.0 + (-a.array()).exp())).matrix();
}

// bound used inside the cross-entropy only; gradients see the raw sigmoid
inline constexpr double kLossClamp = 1e-12;

}  // namespace detail

/// Uniform init in +-4*sqrt(6/(fan_in+fan_out)) for both weight matrices,
/// zero biases. Fill order (encoder row-major, then decoder row-major) is
/// part of the determinism contract.
inline AutoencoderParams init_params(std::uint64_t seed, int input_dim, int hidden_dim) {
    if (input_dim <= 0 || hidden_dim <= 0)
        throw std::invalid_argument("init_params: dimensions must be positive");
    const double limit = 4.0 * std::sqrt(6.0 / (input_dim + hidden_dim));
    rng::Stream stream(seed);
    AutoencoderParams p;
    p.enc_weights.resize(hidden_dim, input_dim);
    for (Eigen::Index r = 0; r < p.enc_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.enc_weights.cols(); ++c)
            p.enc_weights(r, c) = stream.uniform(-limit, limit);
    p.enc_bias = Vector::Zero(hidden_dim);
    p.dec_weights.resize(input_dim, hidden_dim);
    for (Eigen::Index r = 0; r < p.dec_weights.rows(); ++r)
        for (Eigen::Index c = 0; c < p.dec_weights.cols(); ++c)
            p.dec_weights(r, c) = stream.uniform(-limit, limit);
    p.dec_bias = Vector::Zero(input_dim);
    return p;
}

inline ForwardPass forward_pass(const AutoencoderParams& p, const Matrix& inputs) {
    if (inputs.cols() != p.enc_weights.cols())
        throw std::invalid_argument("forward_pass: input width does not match encoder");
    ForwardPass fp;
    fp.hidden = detail::sigmoid(
        ((inputs * p.enc_weights.transpose()).rowwise() + p.enc_bias.transpose()));
    fp.reconstruction = detail::sigmoid(
        ((fp.hidden * p.dec_weights.transpose()).rowwise() + p.dec_bias.transpose()));
    return fp;
}

inline Matrix forward(const AutoencoderParams& p, const Matrix& inputs) {
    return forward_pass(p, inputs).reconstruction;
}

/// Per-sample cross-entropy summed over pixels,
/// l_i = -sum_j [t log r + (1-t) log(1-r)], reconstructions clamped to
/// [1e-12, 1-1e-12] inside the logs only.
inline scalarize::LossVector per_sample_loss(const Matrix& reconstruction,
                                             const Matrix& target) {
    if (reconstruction.rows() != target.rows() || reconstruction.cols() != target.cols())
        throw std::invalid_argument("per_sample_loss: shape mismatch");
    scalarize::LossVector losses(static_cast<std::size_t>(reconstruction.rows()), 0.0);
    for (Eigen::Index i = 0; i < reconstruction.rows(); ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < reconstruction.cols(); ++j) {
            const double t = target(i, j);
            if (t < 0.0 || t > 1.0)
                throw std::invalid_argument("per_sample_loss: target outside [0,1]");
            const double r = std::clamp(reconstruction(i, j), detail::kLossClamp,
                                        1.0 - detail::kLossClamp);
            acc -= t * std::log(r) + (1.0 - t) * std::log1p(-r);
        }
        if (!std::isfinite(acc))
            throw std::domain_error("per_sample_loss: non-finite loss");
        losses[static_cast<std::size_t>(i)] = acc;
    }
    return losses;
}

/// Gradient of sum_i w_i * l_i with cached activations. Cross-entropy through
/// a sigmoid collapses to delta = R - T, so the clamp above never enters the
/// backward pass.
inline ParamGradient weighted_backward(const AutoencoderParams& p, const Batch& batch,
                                       const scalarize::WeightVector& weights,
                                       const ForwardPass& fp) {
    const Eigen::Index b = batch.corrupted.rows();
    if (batch.clean.rows() != b || batch.clean.cols() != batch.corrupted.cols())
        throw std::invalid_argument("weighted_backward: batch shape mismatch");
    if (static_cast<Eigen::Index>(weights.values.size()) != b)
        throw std::invalid_argument("weighted_backward: weight count != batch size");
    if (fp.reconstruction.rows() != b || fp.reconstruction.cols() != batch.clean.cols())
        throw std::invalid_argument("weighted_backward: stale forward cache");
    scalarize::detail::require_finite(weights.values, "weighted_backward");

    Eigen::Map<const Vector> w(weights.values.data(), b);
    Matrix delta_out = (fp.reconstruction - batch.clean).array().colwise() * w.array();
    Matrix delta_hid = (delta_out * p.dec_weights).array() * fp.hidden.array() *
                       (1.0 - fp.hidden.array());

    ParamGradient g;
    g.dec_weights = delta_out.transpose() * fp.hidden;
    g.dec_bias = delta_out.colwise().sum().transpose();
    g.enc_weights = delta_hid.transpose() * batch.corrupted;
    g.enc_bias = delta_hid.colwise().sum().transpose();
    return g;
}

inline ParamGradient weighted_backward(const AutoencoderParams& p, const Batch& batch,
                                       const scalarize::WeightVector& weights) {
    return weighted_backward(p, batch, weights, forward_pass(p, batch.corrupted));
}

}  // namespace hvmax::net
