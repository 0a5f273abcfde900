#include "hibbo/vae.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hibbo/errors.hpp"
#include "hibbo/hippo.hpp"
#include "hibbo/tape.hpp"

namespace hibbo::vae {

namespace {

DenseLayer init_layer(std::size_t in, std::size_t out, Rng& rng) {
    const double lim = 1.0 / std::sqrt(static_cast<double>(in));
    return {rng.uniform_matrix(in, out, -lim, lim), Matrix(1, out)};
}

}  // namespace

VaeModel VaeModel::init(std::size_t input_dim, std::size_t latent_dim,
                        const std::vector<std::size_t>& hidden, Rng& rng,
                        OutputSquash squash) {
    if (latent_dim >= input_dim)
        throw DimensionMismatch("VaeModel: latent_dim must be < input_dim");
    if (hidden.empty())
        throw DimensionMismatch("VaeModel: need at least one hidden layer");
    VaeModel m;
    m.input_dim = input_dim;
    m.latent_dim = latent_dim;
    m.squash = squash;

    std::size_t prev = input_dim;
    for (std::size_t h : hidden) {
        m.encoder_trunk.push_back(init_layer(prev, h, rng));
        prev = h;
    }
    m.mu_head = init_layer(prev, latent_dim, rng);
    m.log_sigma_head = init_layer(prev, latent_dim, rng);

    prev = latent_dim;
    for (auto it = hidden.rbegin(); it != hidden.rend(); ++it) {
        m.decoder.push_back(init_layer(prev, *it, rng));
        prev = *it;
    }
    m.decoder.push_back(init_layer(prev, input_dim, rng));
    return m;
}

std::size_t VaeModel::parameter_count() const {
    std::size_t n = 0;
    for_each_parameter(*this, [&](const Matrix& p) { n += p.size(); });
    return n;
}

void for_each_parameter(VaeModel& m, const std::function<void(Matrix&)>& fn) {
    for (auto& l : m.encoder_trunk) { fn(l.W); fn(l.b); }
    fn(m.mu_head.W); fn(m.mu_head.b);
    fn(m.log_sigma_head.W); fn(m.log_sigma_head.b);
    for (auto& l : m.decoder) { fn(l.W); fn(l.b); }
}

void for_each_parameter(const VaeModel& m, const std::function<void(const Matrix&)>& fn) {
    for_each_parameter(const_cast<VaeModel&>(m), [&](Matrix& p) { fn(p); });
}

// ---------------------------------------------------------------------------
// Plain (tape-free) forward passes
// ---------------------------------------------------------------------------

namespace {

constexpr double kLogSigmaLo = -6.0;
constexpr double kLogSigmaHi = 3.0;

Matrix affine(const Matrix& x, const DenseLayer& l) {
    Matrix out = matmul(x, l.W);
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += l.b(0, j);
    return out;
}

Matrix tanh_inplace(Matrix m) {
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = std::tanh(m.data()[i]);
    return m;
}

std::pair<Matrix, Matrix> encoder_heads(const VaeModel& m, const Matrix& X) {
    Matrix h = X;
    for (const auto& l : m.encoder_trunk) h = tanh_inplace(affine(h, l));
    Matrix mu = affine(h, m.mu_head);
    Matrix ls = affine(h, m.log_sigma_head);
    for (std::size_t i = 0; i < ls.size(); ++i)
        ls.data()[i] = std::clamp(ls.data()[i], kLogSigmaLo, kLogSigmaHi);
    return {std::move(mu), std::move(ls)};
}

}  // namespace

EncodeSample encode(const VaeModel& m, const Vector& x, Rng& rng) {
    if (x.size() != m.input_dim) throw DimensionMismatch("encode: input length != d");
    auto [mu, ls] = encoder_heads(m, Matrix::row(x));
    EncodeSample s;
    s.mu = mu.row_vector(0);
    s.log_sigma = ls.row_vector(0);
    s.z.resize(m.latent_dim);
    for (std::size_t j = 0; j < m.latent_dim; ++j)
        s.z[j] = s.mu[j] + std::exp(s.log_sigma[j]) * rng.normal();
    return s;
}

EncodeSample encode_mean(const VaeModel& m, const Vector& x) {
    if (x.size() != m.input_dim) throw DimensionMismatch("encode_mean: input length != d");
    auto [mu, ls] = encoder_heads(m, Matrix::row(x));
    EncodeSample s;
    s.mu = mu.row_vector(0);
    s.log_sigma = ls.row_vector(0);
    s.z = s.mu;
    return s;
}

Vector decode(const VaeModel& m, const Vector& z) {
    if (z.size() != m.latent_dim) throw DimensionMismatch("decode: latent length != d'");
    return decode_batch(m, Matrix::row(z)).row_vector(0);
}

Matrix encode_mean_batch(const VaeModel& m, const Matrix& X) {
    if (X.cols() != m.input_dim) throw DimensionMismatch("encode_mean_batch: width != d");
    return encoder_heads(m, X).first;
}

Matrix decode_batch(const VaeModel& m, const Matrix& Z) {
    if (Z.cols() != m.latent_dim) throw DimensionMismatch("decode_batch: width != d'");
    Matrix h = Z;
    for (std::size_t i = 0; i + 1 < m.decoder.size(); ++i)
        h = tanh_inplace(affine(h, m.decoder[i]));
    h = affine(h, m.decoder.back());
    if (m.squash == OutputSquash::Sigmoid)
        for (std::size_t i = 0; i < h.size(); ++i)
            h.data()[i] = 0.5 * std::tanh(0.5 * h.data()[i]) + 0.5;
    return h;
}

// ---------------------------------------------------------------------------
// Loss tape
// ---------------------------------------------------------------------------

namespace {

struct LossTape {
    Tape tape;
    std::vector<Tape::NodeId> params;
    Tape::NodeId total = -1;
    Tape::NodeId recon = -1;
    Tape::NodeId kl = -1;
    Tape::NodeId cons = -1;  // -1 when the consistency term is off
};

LossTape build_loss_tape(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                         const Matrix& noise, const Vector* weights) {
    if (X.rows() == 0) throw EmptyDataset("loss: empty dataset");
    if (X.cols() != m.input_dim) throw DimensionMismatch("loss: batch width != d");
    if (noise.rows() != X.rows() || noise.cols() != m.latent_dim)
        throw DimensionMismatch("loss: noise must be N x latent_dim");
    if (weights && weights->size() != X.rows())
        throw DimensionMismatch("loss: weight count != batch rows");

    const std::size_t n = X.rows();
    const double inv_n = 1.0 / static_cast<double>(n);

    LossTape lt;
    Tape& t = lt.tape;

    // Parameters enter the tape in canonical order.
    std::vector<const Matrix*> param_ptrs;
    for_each_parameter(m, [&](const Matrix& p) { param_ptrs.push_back(&p); });
    for (const Matrix* p : param_ptrs) lt.params.push_back(t.param(*p));

    std::size_t next = 0;
    auto take = [&] { return lt.params[next++]; };
    auto affine_node = [&](Tape::NodeId x) {
        const Tape::NodeId w = take();
        const Tape::NodeId b = take();
        return t.add_rowvec(t.matmul(x, w), b);
    };

    const Tape::NodeId xc = t.constant(X);

    Tape::NodeId h = xc;
    for (std::size_t i = 0; i < m.encoder_trunk.size(); ++i) h = t.tanh(affine_node(h));
    const Tape::NodeId mu = affine_node(h);
    const Tape::NodeId ls = t.clamp(affine_node(h), kLogSigmaLo, kLogSigmaHi);

    const Tape::NodeId eps = t.constant(noise);
    const Tape::NodeId z = t.add(mu, t.hadamard(t.exp(ls), eps));

    Tape::NodeId d = z;
    for (std::size_t i = 0; i + 1 < m.decoder.size(); ++i) d = t.tanh(affine_node(d));
    d = affine_node(d);
    if (m.squash == OutputSquash::Sigmoid)
        d = t.shift(t.scale(t.tanh(t.scale(d, 0.5)), 0.5), 0.5);

    // Reconstruction: mean of per-row L2 norms (or squared norms).
    const Tape::NodeId sq_rows = t.row_sums(t.square(t.sub(xc, d)));
    Tape::NodeId per_row = cfg.squared_reconstruction ? sq_rows : t.sqrt(sq_rows);
    if (weights) per_row = t.hadamard(per_row, t.constant(Matrix::column(*weights)));
    lt.recon = t.scale(t.sum(per_row), inv_n);

    // KL: 0.5 * mean over rows of sum(sigma^2 + mu^2 - 1 - 2 log sigma).
    const Tape::NodeId two_ls = t.scale(ls, 2.0);
    const Tape::NodeId kl_terms = t.shift(t.sub(t.add(t.exp(two_ls), t.square(mu)), two_ls), -1.0);
    lt.kl = t.scale(t.sum(kl_terms), 0.5 * inv_n);

    Tape::NodeId total =
        t.add(t.scale(lt.recon, cfg.lambda_recon), t.scale(lt.kl, cfg.lambda_kl));

    if (cfg.lambda_consistency > 0.0) {
        // Trajectory consistency: both trajectories are driven by the same
        // discretized matrices, so identical reconstructions give exactly 0.
        const hippo::HippoOperator op = hippo::build_legs_operator(cfg.hippo_order);
        Matrix c_data(cfg.hippo_order, m.input_dim);
        Tape::NodeId c_bar = t.constant(Matrix(cfg.hippo_order, m.input_dim));
        Tape::NodeId acc = -1;
        for (std::size_t i = 0; i < n; ++i) {
            auto [a_bar, b_bar] = hippo::discretize_step(op, i + 1);
            const Matrix b_col = Matrix::column(b_bar);
            c_data = add(matmul(a_bar, c_data),
                         matmul(b_col, Matrix::row(X.row_vector(i))));
            const Tape::NodeId ac = t.constant(a_bar);
            const Tape::NodeId bc = t.constant(b_col);
            c_bar = t.add(t.matmul(ac, c_bar), t.matmul(bc, t.slice_rows(d, i, i + 1)));
            const Tape::NodeId dist = t.sqrt(t.sum(t.square(t.sub(t.constant(c_data), c_bar))));
            acc = (acc < 0) ? dist : t.add(acc, dist);
        }
        lt.cons = t.scale(acc, inv_n);
        total = t.add(total, t.scale(lt.cons, cfg.lambda_consistency));
    }

    lt.total = total;
    return lt;
}

LossResult run_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                    const Matrix& noise, const Vector* weights) {
    LossTape lt = build_loss_tape(m, X, cfg, noise, weights);
    LossResult res;
    res.value.total = lt.tape.value(lt.total)(0, 0);
    res.value.reconstruction = lt.tape.value(lt.recon)(0, 0);
    res.value.kl = lt.tape.value(lt.kl)(0, 0);
    res.value.consistency = lt.cons >= 0 ? lt.tape.value(lt.cons)(0, 0) : 0.0;
    const Tape::Gradients g = lt.tape.backward(lt.total);
    res.gradients.reserve(lt.params.size());
    for (Tape::NodeId id : lt.params) res.gradients.push_back(g.at(id));
    return res;
}

}  // namespace

LossResult elbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                     const Matrix& noise) {
    LossConfig c = cfg;
    c.lambda_consistency = 0.0;
    return run_loss(m, X, c, noise, nullptr);
}

LossResult elbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg, Rng& rng) {
    return elbo_loss(m, X, cfg, rng.normal_matrix(X.rows(), m.latent_dim));
}

LossResult hibbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                      const Matrix& noise, const Vector* weights) {
    return run_loss(m, X, cfg, noise, weights);
}

LossResult hibbo_loss(const VaeModel& m, const Matrix& X, const LossConfig& cfg,
                      Rng& rng, const Vector* weights) {
    return hibbo_loss(m, X, cfg, rng.normal_matrix(X.rows(), m.latent_dim), weights);
}

Vector reweigh_weights(const Vector& y, double temperature) {
    const std::size_t n = y.size();
    if (n == 0) throw EmptyInput("reweigh_weights: empty objective vector");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });

    // Averaged ranks for ties, rank 0 = best objective.
    Vector rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && y[order[j + 1]] == y[order[i]]) ++j;
        const double shared = 0.5 * (static_cast<double>(i) + static_cast<double>(j));
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = shared;
        i = j + 1;
    }

    Vector w(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = 1.0 / (temperature * static_cast<double>(n) + rank[k]);
        total += w[k];
    }
    const double norm = static_cast<double>(n) / total;  // mean 1
    for (double& v : w) v *= norm;
    return w;
}

TrainResult train(VaeModel& m, const Matrix& X, const Vector& y, const LossConfig& cfg,
                  std::size_t epochs, double learning_rate, Rng& rng) {
    TrainResult result;
    if (epochs == 0) return result;

    Vector weights;
    const Vector* wptr = nullptr;
    if (cfg.reweigh) {
        weights = reweigh_weights(y, cfg.reweigh_temperature);
        wptr = &weights;
    }

    std::vector<Matrix*> params;
    for_each_parameter(m, [&](Matrix& p) { params.push_back(&p); });

    // Adaptive-moment state; moments start fresh for each training call.
    std::vector<Matrix> mom1, mom2;
    for (Matrix* p : params) {
        mom1.emplace_back(p->rows(), p->cols());
        mom2.emplace_back(p->rows(), p->cols());
    }
    constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        const Matrix noise = rng.normal_matrix(X.rows(), m.latent_dim);
        LossResult lr = hibbo_loss(m, X, cfg, noise, wptr);
        if (!std::isfinite(lr.value.total))
            throw NonFiniteLoss("train: non-finite loss at epoch " + std::to_string(epoch) +
                                " (total=" + std::to_string(lr.value.total) + ")");
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(epoch));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(epoch));
        for (std::size_t p = 0; p < params.size(); ++p) {
            const Matrix& g = lr.gradients[p];
            if (!g.all_finite())
                throw NonFiniteLoss("train: non-finite gradient at epoch " +
                                    std::to_string(epoch));
            Matrix& v = *params[p];
            for (std::size_t k = 0; k < v.size(); ++k) {
                const double gk = g.data()[k];
                mom1[p].data()[k] = beta1 * mom1[p].data()[k] + (1.0 - beta1) * gk;
                mom2[p].data()[k] = beta2 * mom2[p].data()[k] + (1.0 - beta2) * gk * gk;
                const double mhat = mom1[p].data()[k] / bc1;
                const double vhat = mom2[p].data()[k] / bc2;
                v.data()[k] -= learning_rate * mhat / (std::sqrt(vhat) + adam_eps);
            }
        }
        result.trace.push_back(lr.value);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {
void write_matrix(std::FILE* f, const Matrix& m) {
    std::fprintf(f, "matrix %zu %zu\n", m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            std::fprintf(f, j ? " %.17g" : "%.17g", m(i, j));
        std::fprintf(f, "\n");
    }
}

Matrix read_matrix(std::istream& in) {
    std::string tag;
    std::size_t rows, cols;
    if (!(in >> tag >> rows >> cols) || tag != "matrix")
        throw RuntimeFailure("load_model: malformed matrix header");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!(in >> m.data()[i])) throw RuntimeFailure("load_model: truncated matrix");
    return m;
}
}  // namespace

void save_model(const VaeModel& m, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw RuntimeFailure("save_model: cannot open " + path);
    std::fprintf(f, "hibbo-vae 1\n");
    std::fprintf(f, "%zu %zu %d %zu %zu\n", m.input_dim, m.latent_dim,
                 m.squash == OutputSquash::Sigmoid ? 1 : 0, m.encoder_trunk.size(),
                 m.decoder.size());
    for_each_parameter(m, [&](const Matrix& p) { write_matrix(f, p); });
    std::fclose(f);
}

VaeModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RuntimeFailure("load_model: cannot open " + path);
    std::string magic;
    int version;
    in >> magic >> version;
    if (magic != "hibbo-vae" || version != 1)
        throw RuntimeFailure("load_model: unsupported checkpoint format");
    VaeModel m;
    int squash;
    std::size_t trunk_count, decoder_count;
    in >> m.input_dim >> m.latent_dim >> squash >> trunk_count >> decoder_count;
    m.squash = squash ? OutputSquash::Sigmoid : OutputSquash::None;
    m.encoder_trunk.resize(trunk_count);
    m.decoder.resize(decoder_count);
    for_each_parameter(m, [&](Matrix& p) { p = read_matrix(in); });
    return m;
}

}  // namespace hibbo::vae
