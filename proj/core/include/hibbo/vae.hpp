#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hibbo/matrix.hpp"
#include "hibbo/rng.hpp"

namespace hibbo::vae {

struct DenseLayer {
    Matrix W;  // in x out
    Matrix b;  // 1 x out
};

enum class OutputSquash { None, Sigmoid };

// MLP encoder/decoder with a reparameterized diagonal-Gaussian latent.
// The encoder trunk uses tanh activations and ends in parallel linear
// mu / log-sigma heads; log-sigma outputs are clamped to [-6, 3].
// The decoder mirrors the trunk back to the input dimension.
struct VaeModel {
    std::size_t input_dim = 0;
    std::size_t latent_dim = 0;
    std::vector<DenseLayer> encoder_trunk;
    DenseLayer mu_head;
    DenseLayer log_sigma_head;
    std::vector<DenseLayer> decoder;
    OutputSquash squash = OutputSquash::None;

    static VaeModel init(std::size_t input_dim, std::size_t latent_dim,
                         const std::vector<std::size_t>& hidden, Rng& rng,
                         OutputSquash squash = OutputSquash::None);

    std::size_t parameter_count() const;
};

// Visits all parameter matrices in a fixed canonical order (encoder trunk,
// mu head, log-sigma head, decoder; W before b).
void for_each_parameter(VaeModel& m, const std::function<void(Matrix&)>& fn);
void for_each_parameter(const VaeModel& m, const std::function<void(const Matrix&)>& fn);

struct LossConfig {
    double lambda_recon = 1.0;
    double lambda_kl = 1.0;
    double lambda_consistency = 0.0;  // 0 recovers the plain ELBO exactly
    std::size_t hippo_order = 50;
    bool reweigh = false;
    double reweigh_temperature = 1e-3;
    bool squared_reconstruction = false;  // smooth-at-zero alternative to the L2 norm
};

struct EncodeSample {
    Vector z, mu, log_sigma;
};

EncodeSample encode(const VaeModel& m, const Vector& x, Rng& rng);
EncodeSample encode_mean(const VaeModel& m, const Vector& x);  // deterministic z = mu
Vector decode(const VaeModel& m, const Vector& z);

Matrix encode_mean_batch(const VaeModel& m, const Matrix& X);  // rows -> mu rows
Matrix decode_batch(const VaeModel& m, const Matrix& Z);

struct LossBreakdown {
    double total = 0.0;
    double reconstruction = 0.0;
    double kl = 0.0;
    double consistency = 0.0;
};

struct LossResult {
    LossBreakdown value;
    std::vector<Matrix> gradients;  // canonical parameter order
};

// Mean ELBO loss over the batch rows of X: lambda_recon * ||x - x_bar||_2
// + lambda_kl * KL[N(mu, diag sigma^2) || N(0, I)], with one reparameterization
// sample per row taken from `noise` (N x latent_dim standard normals).
LossResult elbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                     const Matrix& noise);
LossResult elbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg, Rng& rng);

// Full training loss: ELBO plus lambda_consistency times the mean per-step
// HiPPO trajectory distance between X (in dataset order) and its
// reconstructions. Optional per-row weights multiply the reconstruction term.
LossResult hibbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                      const Matrix& noise, const Vector* weights = nullptr);
LossResult hibbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                      Rng& rng, const Vector* weights = nullptr);

// Rank-based weights w_i proportional to 1 / (temperature * N + rank_i), rank 0
// being the best (largest) objective, ties sharing the averaged rank,
// normalized to mean 1.
Vector reweigh_weights(const Vector& y, double temperature);

struct TrainResult {
    std::vector<LossBreakdown> trace;  // one entry per epoch
};

// Full-batch adaptive-moment descent for `epochs` epochs. `y` is consulted
// only when cfg.reweigh is set. Throws NonFiniteLoss (with the epoch in the
// message) if the loss or any gradient stops being finite.
TrainResult train(VaeModel& m, const Matrix& X, const Vector& y, const LossConfig& cfg,
                  std::size_t epochs, double learning_rate, Rng& rng);

// Versioned structured-text checkpoint; round-trips parameters exactly.
void save_model(const VaeModel& m, const std::string& path);
VaeModel load_model(const std::string& path);

}  // namespace hibbo::vae
