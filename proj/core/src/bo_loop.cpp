#include "hibbo/bo_loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hibbo/errors.hpp"
#include "hibbo/log.hpp"

namespace hibbo::bo {

const char* method_name(Method m) {
    switch (m) {
        case Method::Hibbo: return "hibbo";
        case Method::Base: return "base";
        case Method::Reweigh: return "reweigh";
        case Method::HibboRw: return "hibbo-rw";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
    for (Method m : {Method::Hibbo, Method::Base, Method::Reweigh, Method::HibboRw})
        if (name == method_name(m)) return m;
    return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

vae::LossConfig method_loss(const BoConfig& cfg) {
    vae::LossConfig loss = cfg.loss;
    switch (cfg.method) {
        case Method::Base:
            loss.lambda_consistency = 0.0;
            loss.reweigh = false;
            break;
        case Method::Reweigh:
            loss.lambda_consistency = 0.0;
            loss.reweigh = true;
            break;
        case Method::Hibbo:
            loss.reweigh = false;
            break;
        case Method::HibboRw:
            loss.reweigh = true;
            break;
    }
    return loss;
}

double variance_of(const Vector& y) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    return var / static_cast<double>(y.size());
}

}  // namespace

RunRecord run(const problems::BenchmarkProblem& problem, const BoConfig& config) {
    if (config.budget < 1 || config.frequency < 1)
        throw ConfigInvalid("run: budget and frequency must be >= 1");

    std::size_t initial = config.initial_samples;
    const Matrix* dataset = nullptr;
    if (config.initial_design == InitialDesign::Dataset) {
        dataset = problem.dataset();
        if (!dataset) throw ConfigInvalid("run: problem has no dataset for dataset init");
        initial = dataset->rows();
    }
    if (initial < 2) throw ConfigInvalid("run: initial sample count must be >= 2");
    if (config.budget < initial)
        throw BudgetExhaustedBeforeStart("run: budget smaller than initial design");

    Rng root(config.seed);
    Rng init_rng = root.split("initial-design");
    Rng model_rng = root.split("model-init");
    Rng train_rng = root.split("train");
    Rng acq_rng = root.split("acquisition");

    const std::size_t d = problem.dim();
    const vae::LossConfig loss = method_loss(config);

    RunRecord rec;
    rec.problem = problem.name();
    rec.method = method_name(config.method);
    rec.seed = config.seed;
    rec.config_hash = config.config_hash;
    rec.budget = config.budget;
    rec.dim = d;
    rec.latent_dim = config.latent_dim;

    acq::AcquisitionConfig acq_cfg = config.acquisition;
    if (acq_cfg.box.dim() == 0) acq_cfg.box = acq::Box::cube(config.latent_dim, -3.0, 3.0);
    if (acq_cfg.box.dim() != config.latent_dim)
        throw ConfigInvalid("run: acquisition box dimension != latent_dim");

    Matrix X(initial, d);
    Vector y(initial);
    double best = -std::numeric_limits<double>::infinity();

    auto t0 = Clock::now();
    for (std::size_t i = 0; i < initial; ++i) {
        Vector x(d);
        if (dataset) {
            x = dataset->row_vector(i);
        } else {
            for (std::size_t j = 0; j < d; ++j)
                x[j] = init_rng.uniform(problem.box_lo()[j], problem.box_hi()[j]);
        }
        const double f = problem.evaluate(x);
        X.set_row(i, x);
        y[i] = f;
        best = std::max(best, f);
        rec.queries.push_back({i, 0, true, std::move(x), f, best, 0.0});
    }
    rec.times.evaluation_s += seconds_since(t0);

    vae::VaeModel model =
        vae::VaeModel::init(d, config.latent_dim, config.hidden, model_rng, config.squash);

    std::size_t evals = initial;
    std::size_t round = 0;
    try {
        while (evals < config.budget) {
            ++round;
            const std::size_t epochs =
                round == 1 ? config.pretrain_epochs : config.retrain_epochs;

            t0 = Clock::now();
            vae::train(model, X, y, loss, epochs, config.learning_rate, train_rng);
            rec.times.train_s += seconds_since(t0);

            // Re-encode every observation with the current encoder.
            Matrix Z = vae::encode_mean_batch(model, X);

            for (std::size_t k = 0; k < config.frequency && evals < config.budget; ++k) {
                const double var_y = std::max(variance_of(y), 1e-12);
                gp::GridSpec grid;
                grid.lengthscales = config.gp_lengthscales;
                for (double f : config.gp_signal_factors)
                    grid.signal_variances.push_back(f * var_y);
                for (double f : config.gp_noise_factors)
                    grid.noise_variances.push_back(f * var_y);

                t0 = Clock::now();
                const gp::GpHyperparams h = gp::select_hyperparams(Z, y, grid);
                const gp::GpPosterior post = gp::fit(Z, y, h);
                rec.times.gp_fit_s += seconds_since(t0);

                t0 = Clock::now();
                const acq::MaximizeResult opt = acq::maximize(post, acq_cfg, acq_rng, best);
                rec.times.acquisition_s += seconds_since(t0);

                if (opt.value < acq_cfg.threshold) break;  // skip ahead to retraining

                const Vector xhat = vae::decode(model, opt.z);
                t0 = Clock::now();
                const double f = problem.evaluate(xhat);
                rec.times.evaluation_s += seconds_since(t0);

                const std::size_t rows = X.rows();
                Matrix grown(rows + 1, d);
                std::copy(X.values().begin(), X.values().end(), grown.data());
                grown.set_row(rows, xhat);
                X = std::move(grown);
                y.push_back(f);

                Matrix z_grown(Z.rows() + 1, config.latent_dim);
                std::copy(Z.values().begin(), Z.values().end(), z_grown.data());
                z_grown.set_row(Z.rows(), vae::encode_mean(model, xhat).mu);
                Z = std::move(z_grown);

                best = std::max(best, f);
                rec.queries.push_back({evals, round, false, xhat, f, best, opt.value});
                ++evals;
            }
        }
    } catch (const Error& e) {
        throw RuntimeFailure("run: at evaluation " + std::to_string(evals) + ": " + e.what());
    }

    log::info("run " + rec.method + " seed " + std::to_string(rec.seed) +
              ": best " + format_g17(best) + " (train " + std::to_string(rec.times.train_s) +
              "s, gp " + std::to_string(rec.times.gp_fit_s) + "s, acq " +
              std::to_string(rec.times.acquisition_s) + "s)");
    return rec;
}

namespace {
double quantile(std::vector<double> sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}
}  // namespace

std::vector<ComparisonRow> compare(const std::vector<RunRecord>& records) {
    if (records.empty()) return {};
    const std::string& problem = records.front().problem;
    const std::size_t budget = records.front().budget;
    for (const RunRecord& r : records)
        if (r.problem != problem || r.budget != budget)
            throw MixedProblems("compare: records from different problems or budgets");

    std::vector<std::string> methods;
    for (const RunRecord& r : records)
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
    std::sort(methods.begin(), methods.end());

    std::vector<ComparisonRow> rows;
    for (const std::string& m : methods) {
        for (std::size_t q = 0; q < budget; ++q) {
            std::vector<double> vals;
            for (const RunRecord& r : records) {
                if (r.method != m) continue;
                if (q < r.queries.size()) vals.push_back(r.queries[q].best_so_far);
            }
            if (vals.empty()) continue;
            std::sort(vals.begin(), vals.end());
            rows.push_back({m, q, quantile(vals, 0.5), quantile(vals, 0.25),
                            quantile(vals, 0.75)});
        }
    }
    return rows;
}

}  // namespace hibbo::bo
