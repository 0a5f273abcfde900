#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hibbo/acquisition.hpp"
#include "hibbo/gp.hpp"
#include "hibbo/problems.hpp"
#include "hibbo/vae.hpp"

namespace hibbo::bo {

enum class Method { Hibbo, Base, Reweigh, HibboRw };

const char* method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

enum class InitialDesign { Uniform, Dataset };

struct BoConfig {
    std::size_t budget = 100;          // total objective evaluations, incl. initial
    std::size_t frequency = 5;         // BO steps per VAE retrain (nu)
    std::size_t initial_samples = 10;
    Method method = Method::Hibbo;
    vae::LossConfig loss{.lambda_consistency = 1.0};
    acq::AcquisitionConfig acquisition;  // box defaults to [-3,3]^latent_dim

    // GP hyperparameter grid: absolute lengthscales; variance entries are
    // multiples of var(y) at fit time.
    std::vector<double> gp_lengthscales{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> gp_signal_factors{0.5, 1.0, 2.0};
    std::vector<double> gp_noise_factors{1e-6, 1e-4, 1e-2};

    std::uint64_t seed = 0;
    std::size_t latent_dim = 10;
    std::vector<std::size_t> hidden{50, 50, 50, 50, 50};
    std::size_t pretrain_epochs = 50;  // first round
    std::size_t retrain_epochs = 10;   // later rounds
    double learning_rate = 1e-3;
    InitialDesign initial_design = InitialDesign::Uniform;
    vae::OutputSquash squash = vae::OutputSquash::None;

    std::uint64_t config_hash = 0;  // embedded in outputs by the harness
};

struct QueryRecord {
    std::size_t index = 0;   // 0-based evaluation index
    std::size_t round = 0;   // retrain round marker (0 = initial design)
    bool initial = false;
    Vector x;
    double objective = 0.0;
    double best_so_far = 0.0;
    double acquisition_value = 0.0;  // 0 for initial-design rows
};

struct PhaseTimes {
    double train_s = 0.0;
    double gp_fit_s = 0.0;
    double acquisition_s = 0.0;
    double evaluation_s = 0.0;
};

struct RunRecord {
    std::string problem;
    std::string method;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::size_t budget = 0;
    std::size_t dim = 0;
    std::size_t latent_dim = 0;
    std::vector<QueryRecord> queries;
    PhaseTimes times;  // not serialized: re-runs must be byte-identical

    double best_value() const { return queries.empty() ? 0.0 : queries.back().best_so_far; }
};

// Executes Algorithm-1-style alternation: (re)train the VAE on the data seen
// so far under the method's loss, re-encode, then up to `frequency` BO steps
// of GP fit + acquisition maximization + decode + evaluate, until the budget
// is consumed. Deterministic given (config, seed).
RunRecord run(const problems::BenchmarkProblem& problem, const BoConfig& config);

struct ComparisonRow {
    std::string method;
    std::size_t query = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
};

// Per-method per-query median and interquartile range of best-so-far.
// All records must share the problem and budget.
std::vector<ComparisonRow> compare(const std::vector<RunRecord>& records);

// --- serialization (line-delimited records; see tools/) -------------------

std::string to_jsonl(const RunRecord& record);
RunRecord parse_jsonl(const std::string& text);
void write_record_file(const RunRecord& record, const std::string& path);
RunRecord read_record_file(const std::string& path);

// printf-style %.17g formatting used by every serializer (round-trips doubles).
std::string format_g17(double v);

}  // namespace hibbo::bo
