#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hibbo/matrix.hpp"
#include "hibbo/vae.hpp"

namespace hibbo::gp {

struct GpHyperparams {
    double lengthscale = 1.0;      // > 0
    double signal_variance = 1.0;  // > 0
    double noise_variance = 0.0;   // >= 0
};

double rbf_kernel(const Vector& a, const Vector& b, const GpHyperparams& h);

// Fitted posterior: constant mean = mean(y), Cholesky factor of
// K + noise_variance I (with the jitter ladder), and alpha = (K+..)^{-1}(y-m).
struct GpPosterior {
    Matrix Z;
    Vector y;
    GpHyperparams hyperparams;
    double mean = 0.0;
    Matrix L;
    Vector alpha;
    double jitter = 0.0;  // jitter the ladder actually needed

    std::size_t dim() const { return Z.cols(); }
    std::size_t size() const { return Z.rows(); }
};

GpPosterior fit(const Matrix& Z, const Vector& y, const GpHyperparams& h);

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
    bool variance_clamped = false;  // true when the raw variance was < 0
    double clamp_magnitude = 0.0;
};

Prediction predict(const GpPosterior& post, const Vector& zstar);

double log_marginal_likelihood(const Matrix& Z, const Vector& y, const GpHyperparams& h);

struct GridSpec {
    std::vector<double> lengthscales;
    std::vector<double> signal_variances;
    std::vector<double> noise_variances;
};

// Exhaustive grid argmax of the log marginal likelihood. Ties keep the
// smallest lengthscale, then the smallest noise variance.
GpHyperparams select_hyperparams(const Matrix& Z, const Vector& y, const GridSpec& grid);

// Distribution-mismatch diagnostics between the latent-space GP and the
// original space, probed at the rows of X_p with known objective values f.
//
//   delta_mean   = mean_i |posterior_mean(enc(x_i)) - f(x_i)|
//   delta_kernel = mean_{i<j} |k_lat(enc(x_i), enc(x_j)) - k_ref(x_i, x_j)|
//
// k_lat defaults to the posterior's fitted kernel; k_ref defaults to an RBF
// on the original inputs with lengthscale = median pairwise distance and the
// latent kernel's amplitude (so the diagnostic measures geometry, not scale).
// Both kernels can be overridden. The encoder mean stands in for the decoder
// inverse. This is a diagnostic proxy: the original-space kernel itself is
// not identifiable.
struct MismatchOptions {
    std::optional<GpHyperparams> latent_kernel;
    std::optional<GpHyperparams> reference_kernel;
};

struct Mismatch {
    double delta_mean = 0.0;
    double delta_kernel = 0.0;
};

Mismatch mismatch_diagnostics(const vae::VaeModel& model, const GpPosterior& post,
                              const Matrix& probes,
                              const std::function<double(const Vector&)>& f,
                              const MismatchOptions& opts = {});

// Median of pairwise Euclidean distances between the rows of X.
double median_pairwise_distance(const Matrix& X);

}  // namespace hibbo::gp
