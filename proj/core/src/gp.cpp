#include "hibbo/gp.hpp"

#include <algorithm>
#include <cmath>

#include "hibbo/errors.hpp"
#include "hibbo/linalg.hpp"

namespace hibbo::gp {

double rbf_kernel(const Vector& a, const Vector& b, const GpHyperparams& h) {
    if (a.size() != b.size()) throw DimensionMismatch("rbf_kernel: length mismatch");
    return h.signal_variance *
           std::exp(-squared_distance(a, b) / (2.0 * h.lengthscale * h.lengthscale));
}

namespace {

Matrix kernel_matrix(const Matrix& Z, const GpHyperparams& h) {
    const std::size_t n = Z.rows();
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector zi = Z.row_vector(i);
        k(i, i) = h.signal_variance + h.noise_variance;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rbf_kernel(zi, Z.row_vector(j), h);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

double mean_of(const Vector& y) {
    double s = 0.0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

}  // namespace

GpPosterior fit(const Matrix& Z, const Vector& y, const GpHyperparams& h) {
    if (Z.rows() == 0 || Z.rows() != y.size())
        throw DimensionMismatch("fit: rows(Z) must equal len(y) >= 1");
    GpPosterior post;
    post.Z = Z;
    post.y = y;
    post.hyperparams = h;
    post.mean = mean_of(y);
    post.L = cholesky_with_jitter(kernel_matrix(Z, h), &post.jitter);
    Vector centered(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) centered[i] = y[i] - post.mean;
    post.alpha = triangular_solve(post.L, triangular_solve(post.L, centered, false), true);
    return post;
}

Prediction predict(const GpPosterior& post, const Vector& zstar) {
    if (zstar.size() != post.dim()) throw DimensionMismatch("predict: latent dim mismatch");
    const std::size_t n = post.size();
    Vector ks(n);
    for (std::size_t i = 0; i < n; ++i)
        ks[i] = rbf_kernel(zstar, post.Z.row_vector(i), post.hyperparams);

    Prediction p;
    p.mean = post.mean + dot(ks, post.alpha);
    const Vector v = triangular_solve(post.L, ks, false);
    double var = post.hyperparams.signal_variance;
    for (double vi : v) var -= vi * vi;
    if (var < 0.0) {
        p.variance_clamped = true;
        p.clamp_magnitude = -var;
        var = 0.0;
    }
    p.variance = var;
    return p;
}

double log_marginal_likelihood(const Matrix& Z, const Vector& y, const GpHyperparams& h) {
    if (Z.rows() == 0 || Z.rows() != y.size())
        throw DimensionMismatch("log_marginal_likelihood: rows(Z) must equal len(y) >= 1");
    const std::size_t n = y.size();
    const double m = mean_of(y);
    const Matrix l = cholesky_with_jitter(kernel_matrix(Z, h));
    Vector centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = y[i] - m;
    const Vector w = triangular_solve(l, centered, false);
    double quad = 0.0, logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        quad += w[i] * w[i];
        logdet += std::log(l(i, i));
    }
    return -0.5 * quad - logdet - 0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

GpHyperparams select_hyperparams(const Matrix& Z, const Vector& y, const GridSpec& grid) {
    if (grid.lengthscales.empty() || grid.signal_variances.empty() ||
        grid.noise_variances.empty())
        throw EmptyGrid("select_hyperparams: empty grid");

    auto sorted = [](std::vector<double> v) { std::sort(v.begin(), v.end()); return v; };
    const std::vector<double> ells = sorted(grid.lengthscales);
    const std::vector<double> noises = sorted(grid.noise_variances);
    const std::vector<double> signals = sorted(grid.signal_variances);

    GpHyperparams best;
    double best_lml = -std::numeric_limits<double>::infinity();
    bool have = false;
    // Iteration order implements the tie-break: smallest lengthscale first,
    // then smallest noise variance; only a strictly larger LML replaces.
    for (double ell : ells)
        for (double sn : noises)
            for (double sf : signals) {
                const GpHyperparams h{ell, sf, sn};
                double lml;
                try {
                    lml = log_marginal_likelihood(Z, y, h);
                } catch (const NotPositiveDefinite&) {
                    continue;
                }
                if (!have || lml > best_lml) {
                    best = h;
                    best_lml = lml;
                    have = true;
                }
            }
    if (!have) throw NotPositiveDefinite("select_hyperparams: no grid cell factorizable");
    return best;
}

double median_pairwise_distance(const Matrix& X) {
    const std::size_t n = X.rows();
    std::vector<double> d;
    d.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d.push_back(std::sqrt(squared_distance(X.row_vector(i), X.row_vector(j))));
    if (d.empty()) return 1.0;
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size();
    return m % 2 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

Mismatch mismatch_diagnostics(const vae::VaeModel& model, const GpPosterior& post,
                              const Matrix& probes,
                              const std::function<double(const Vector&)>& f,
                              const MismatchOptions& opts) {
    const std::size_t n = probes.rows();
    if (n == 0) throw EmptyProbeSet("mismatch_diagnostics: empty probe set");

    const Matrix enc = vae::encode_mean_batch(model, probes);

    GpHyperparams k_lat = opts.latent_kernel.value_or(post.hyperparams);
    k_lat.noise_variance = 0.0;
    GpHyperparams k_ref;
    if (opts.reference_kernel) {
        k_ref = *opts.reference_kernel;
    } else {
        k_ref.lengthscale = median_pairwise_distance(probes);
        k_ref.signal_variance = k_lat.signal_variance;
    }
    k_ref.noise_variance = 0.0;

    Mismatch out;
    for (std::size_t i = 0; i < n; ++i) {
        const Vector xi = probes.row_vector(i);
        out.delta_mean += std::abs(predict(post, enc.row_vector(i)).mean - f(xi));
    }
    out.delta_mean /= static_cast<double>(n);

    if (n >= 2) {
        double acc = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double kz = rbf_kernel(enc.row_vector(i), enc.row_vector(j), k_lat);
                const double kx =
                    rbf_kernel(probes.row_vector(i), probes.row_vector(j), k_ref);
                acc += std::abs(kz - kx);
                ++pairs;
            }
        out.delta_kernel = acc / static_cast<double>(pairs);
    }
    return out;
}

}  // namespace hibbo::gp
