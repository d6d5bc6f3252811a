#pragma once

// Minibatch SGD over the autoencoder under either objective: uniform mean
// loss, or log-hypervolume with self-adjusting weights and the linear Nadir
// slack schedule. Single-threaded and deterministic by construction.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hvmax/data.hpp"
#include "hvmax/net.hpp"
#include "hvmax/record.hpp"
#include "hvmax/rng.hpp"
#include "hvmax/scalarize.hpp"

namespace hvmax::optim {

using net::AutoencoderParams;
using net::Matrix;
using net::ParamGradient;

/// Scope of the max-loss term inside mu = max + eps(t): the current batch
/// (default) or a fresh pass over the whole corrupted training set.
enum class MuScope { Batch, FullSet };

struct TrainConfig {
    record::Objective objective = record::Objective::MeanLoss;
    double learning_rate = 0.1;
    int batch_size = 500;
    int epochs = 100;
    scalarize::NadirSchedule schedule{};
    std::uint64_t seed = 1;
    double corruption_p = 0.0;
    int hidden_dim = 500;
    MuScope mu_scope = MuScope::Batch;
};

inline void validate(const TrainConfig& c) {
    if (!(c.learning_rate > 0.0))
        throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (c.batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (c.epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (c.hidden_dim < 1) throw std::invalid_argument("TrainConfig: hidden_dim must be >= 1");
    if (c.corruption_p < 0.0 || c.corruption_p > 1.0)
        throw std::invalid_argument("TrainConfig: corruption_p must lie in [0,1]");
    scalarize::epsilon_at(c.schedule, 0);  // validates epsilon0 and kappa
}

inline AutoencoderParams sgd_step(const AutoencoderParams& p, const ParamGradient& g,
                                  double learning_rate) {
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("sgd_step: learning_rate must be > 0");
    if (p.enc_weights.rows() != g.enc_weights.rows() ||
        p.enc_weights.cols() != g.enc_weights.cols() ||
        p.dec_weights.rows() != g.dec_weights.rows() ||
        p.dec_weights.cols() != g.dec_weights.cols())
        throw std::invalid_argument("sgd_step: gradient shape mismatch");
    AutoencoderParams out;
    out.enc_weights = p.enc_weights - learning_rate * g.enc_weights;
    out.enc_bias = p.enc_bias - learning_rate * g.enc_bias;
    out.dec_weights = p.dec_weights - learning_rate * g.dec_weights;
    out.dec_bias = p.dec_bias - learning_rate * g.dec_bias;
    return out;
}

/// Mean and max per-sample reconstruction loss on noiseless inputs
/// (input == target; no corruption at evaluation time).
inline record::SplitMetrics evaluate(const AutoencoderParams& p, const Matrix& split) {
    if (split.rows() == 0) throw std::invalid_argument("evaluate: empty split");
    const scalarize::LossVector losses =
        net::per_sample_loss(net::forward(p, split), split);
    record::SplitMetrics m;
    m.max_loss = losses[0];
    double acc = 0.0;
    for (double l : losses) {
        acc += l;
        if (l > m.max_loss) m.max_loss = l;
    }
    m.mean_loss = acc / static_cast<double>(losses.size());
    return m;
}

namespace detail {

inline scalarize::WeightVector batch_weights(const TrainConfig& cfg,
                                             const scalarize::LossVector& losses,
                                             double epsilon, double full_set_max) {
    scalarize::WeightVector w;
    if (cfg.objective == record::Objective::MeanLoss) {
        w.values.assign(losses.size(), 1.0 / static_cast<double>(losses.size()));
        w.normalized = true;
        return w;
    }
    scalarize::Mu mu = cfg.mu_scope == MuScope::Batch
                           ? scalarize::mu_for_batch(losses, epsilon)
                           : scalarize::Mu{full_set_max + epsilon};
    // hv_weights itself rejects any mu <= l_i, so dominance is enforced here
    w = scalarize::normalize_weights(scalarize::hv_weights(losses, mu));
    double sum = 0.0;
    for (double v : w.values) sum += v;
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::logic_error("batch_weights: normalization drifted");
    return w;
}

inline std::vector<Eigen::Index> epoch_permutation(Eigen::Index n, std::uint64_t seed,
                                                   int epoch) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    rng::Stream stream(rng::derive_seed(seed, rng::kShuffleTag,
                                        static_cast<std::uint64_t>(epoch)));
    for (Eigen::Index i = n - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[stream.below(static_cast<std::size_t>(i) + 1)]);
    return perm;
}

}  // namespace detail

struct EpochResult {
    AutoencoderParams params;
    record::EpochMetrics metrics;
};

/// One pass over the (pre-corrupted) training set: seeded shuffle, minibatch
/// updates with the objective's weights, then a noiseless evaluation of all
/// three splits. epsilon(t) is fixed for the whole epoch.
inline EpochResult train_epoch(AutoencoderParams params, const data::Dataset& ds,
                               const Matrix& corrupted_train, const TrainConfig& cfg,
                               int epoch_index) {
    validate(cfg);
    if (epoch_index < 0) throw std::invalid_argument("train_epoch: negative epoch");
    const Eigen::Index n = ds.train.rows();
    if (corrupted_train.rows() != n || corrupted_train.cols() != ds.train.cols())
        throw std::invalid_argument("train_epoch: corrupted copy shape mismatch");

    const double epsilon = scalarize::epsilon_at(cfg.schedule, epoch_index);
    const std::vector<Eigen::Index> perm =
        detail::epoch_permutation(n, cfg.seed, epoch_index);

    for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
        const Eigen::Index stop = std::min<Eigen::Index>(start + cfg.batch_size, n);
        std::vector<Eigen::Index> idx(perm.begin() + start, perm.begin() + stop);

        net::Batch batch;
        batch.clean = ds.train(idx, Eigen::all);
        batch.corrupted = corrupted_train(idx, Eigen::all);

        const net::ForwardPass fp = net::forward_pass(params, batch.corrupted);
        const scalarize::LossVector losses =
            net::per_sample_loss(fp.reconstruction, batch.clean);

        double full_set_max = 0.0;
        if (cfg.objective == record::Objective::Hypervolume &&
            cfg.mu_scope == MuScope::FullSet) {
            const scalarize::LossVector all = net::per_sample_loss(
                net::forward(params, corrupted_train), ds.train);
            full_set_max = *std::max_element(all.begin(), all.end());
        }

        const scalarize::WeightVector w =
            detail::batch_weights(cfg, losses, epsilon, full_set_max);
        params = sgd_step(params, net::weighted_backward(params, batch, w, fp),
                          cfg.learning_rate);
    }

    EpochResult out;
    out.metrics.epoch = epoch_index + 1;
    out.metrics.train = evaluate(params, ds.train);
    out.metrics.valid = evaluate(params, ds.valid);
    out.metrics.test = evaluate(params, ds.test);
    out.params = std::move(params);
    return out;
}

/// Called once per epoch with the corrupted training copy, before the
/// updates run. Lets tests confirm byte-equal corruption across paired runs.
using EpochObserver = std::function<void(int epoch, const Matrix& corrupted_train)>;

/// Full run: deterministic init, epoch 0 recorded before any update, then
/// cfg.epochs training epochs with fresh per-epoch corruption. All randomness
/// derives from cfg.seed via fixed purpose tags, so two configs differing
/// only in objective see identical init, shuffles, and noise.
inline record::RunRecord train_run(const data::Dataset& ds, const TrainConfig& cfg,
                                   AutoencoderParams* final_params = nullptr,
                                   const EpochObserver& observer = {}) {
    validate(cfg);
    AutoencoderParams params = net::init_params(rng::derive_seed(cfg.seed, rng::kInitTag),
                                                static_cast<int>(ds.train.cols()),
                                                cfg.hidden_dim);
    record::RunRecord rec;
    rec.seed = cfg.seed;
    rec.objective = cfg.objective;
    rec.corruption_p = cfg.corruption_p;

    record::EpochMetrics before;
    before.epoch = 0;
    before.train = evaluate(params, ds.train);
    before.valid = evaluate(params, ds.valid);
    before.test = evaluate(params, ds.test);
    rec.epochs.push_back(before);

    for (int t = 0; t < cfg.epochs; ++t) {
        rng::Stream noise(rng::derive_seed(cfg.seed, rng::kNoiseTag,
                                           static_cast<std::uint64_t>(t)));
        const Matrix corrupted = data::salt_pepper(ds.train, cfg.corruption_p, noise);
        if (observer) observer(t, corrupted);
        EpochResult r = train_epoch(std::move(params), ds, corrupted, cfg, t);
        params = std::move(r.params);
        rec.epochs.push_back(r.metrics);
    }
    if (final_params) *final_params = std::move(params);
    return rec;
}

/// Two runs sharing everything but the objective. Any other difference
/// between the configs is a hard error: the comparison is only meaningful
/// when init, shuffles, and corruption match sample for sample.
inline std::pair<record::RunRecord, record::RunRecord> paired_run(
    const data::Dataset& ds, const TrainConfig& baseline, const TrainConfig& hv) {
    const auto same = [](const TrainConfig& a, const TrainConfig& b) {
        return a.learning_rate == b.learning_rate && a.batch_size == b.batch_size &&
               a.epochs == b.epochs && a.schedule.epsilon0 == b.schedule.epsilon0 &&
               a.schedule.kappa == b.schedule.kappa && a.seed == b.seed &&
               a.corruption_p == b.corruption_p && a.hidden_dim == b.hidden_dim &&
               a.mu_scope == b.mu_scope;
    };
    if (!same(baseline, hv))
        throw std::invalid_argument("paired_run: configs differ beyond objective");
    return {train_run(ds, baseline), train_run(ds, hv)};
}

}  // namespace hvmax::optim
