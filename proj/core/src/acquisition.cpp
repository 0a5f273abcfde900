#include "hibbo/acquisition.hpp"

#include <cmath>

#include "hibbo/errors.hpp"

namespace hibbo::acq {

Box Box::cube(std::size_t dim, double lo, double hi) {
    return {Vector(dim, lo), Vector(dim, hi)};
}

double ucb(const gp::GpPosterior& post, const Vector& z, double beta) {
    const gp::Prediction p = gp::predict(post, z);
    return p.mean + std::sqrt(beta) * std::sqrt(p.variance);
}

double ei(const gp::GpPosterior& post, const Vector& z, double best_y, double xi) {
    const gp::Prediction p = gp::predict(post, z);
    const double sigma = std::sqrt(p.variance);
    const double gap = p.mean - best_y - xi;
    if (sigma < 1e-12) return std::max(gap, 0.0);
    const double u = gap / sigma;
    const double cdf = 0.5 * std::erfc(-u / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
    return std::max(gap * cdf + sigma * pdf, 0.0);
}

namespace {

double evaluate(const gp::GpPosterior& post, const AcquisitionConfig& cfg,
                const Vector& z, double best_y) {
    return cfg.kind == Kind::Ucb ? ucb(post, z, cfg.beta) : ei(post, z, best_y, cfg.xi);
}

MaximizeResult maximize_grid(const gp::GpPosterior& post, const AcquisitionConfig& cfg,
                             double best_y) {
    const std::size_t d = cfg.box.dim();
    const std::size_t res = cfg.resolution;
    double total = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        total *= static_cast<double>(res);
        if (total > 1e7) throw GridTooLarge("maximize: resolution^d exceeds 1e7");
    }

    const std::size_t count = static_cast<std::size_t>(total);
    Vector z(d);
    std::vector<std::size_t> idx(d, 0);
    MaximizeResult best;
    bool have = false;
    for (std::size_t flat = 0; flat < count; ++flat) {
        for (std::size_t j = 0; j < d; ++j)
            z[j] = cfg.box.lo[j] +
                   (cfg.box.hi[j] - cfg.box.lo[j]) *
                       (static_cast<double>(idx[j]) / static_cast<double>(res - 1));
        const double v = evaluate(post, cfg, z, best_y);
        if (!have || v > best.value) {  // strict: first grid point wins ties
            best = {z, v};
            have = true;
        }
        // row-major advance: last coordinate fastest
        for (std::size_t j = d; j-- > 0;) {
            if (++idx[j] < res) break;
            idx[j] = 0;
        }
    }
    return best;
}

// Golden-section ascent of f over [lo, hi]; returns the best point found.
template <typename F>
std::pair<double, double> golden_section(F f, double lo, double hi, std::size_t iters) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (std::size_t i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

MaximizeResult maximize_multistart(const gp::GpPosterior& post,
                                   const AcquisitionConfig& cfg, Rng& rng,
                                   double best_y) {
    const std::size_t d = cfg.box.dim();
    MaximizeResult best;
    bool have = false;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        Vector z(d);
        for (std::size_t j = 0; j < d; ++j) z[j] = rng.uniform(cfg.box.lo[j], cfg.box.hi[j]);
        double value = evaluate(post, cfg, z, best_y);
        for (std::size_t pass = 0; pass < cfg.sweeps; ++pass) {
            for (std::size_t j = 0; j < d; ++j) {
                auto line = [&](double t) {
                    Vector zj = z;
                    zj[j] = t;
                    return evaluate(post, cfg, zj, best_y);
                };
                const auto [t, v] = golden_section(line, cfg.box.lo[j], cfg.box.hi[j], 40);
                if (v > value) {
                    z[j] = t;
                    value = v;
                }
            }
        }
        if (!have || value > best.value) {  // ordered reduction: first restart wins ties
            best = {std::move(z), value};
            have = true;
        }
    }
    return best;
}

}  // namespace

MaximizeResult maximize(const gp::GpPosterior& post, const AcquisitionConfig& cfg,
                        Rng& rng, double best_y) {
    if (cfg.box.dim() == 0 || cfg.box.dim() != post.dim())
        throw DimensionMismatch("maximize: box dimension != posterior dimension");
    for (std::size_t j = 0; j < cfg.box.dim(); ++j)
        if (!(cfg.box.lo[j] < cfg.box.hi[j]))
            throw ConfigInvalid("maximize: box lo must be < hi per dimension");
    if (cfg.mode == OptimizerMode::Grid) {
        if (cfg.resolution < 2) throw ConfigInvalid("maximize: grid resolution must be >= 2");
        return maximize_grid(post, cfg, best_y);
    }
    if (cfg.restarts < 1) throw ConfigInvalid("maximize: restarts must be >= 1");
    return maximize_multistart(post, cfg, rng, best_y);
}

}  // namespace hibbo::acq
