#include "hibbo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hibbo/errors.hpp"

namespace hibbo::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigInvalid("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size() || d < 0) throw std::invalid_argument(v);
        return static_cast<std::uint64_t>(d);
    } catch (const std::exception&) {
        throw ConfigInvalid("config: key '" + key + "' has non-integer value '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigInvalid("config: key '" + key + "' has non-boolean value '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    bool acq_box_low_set = false, acq_box_high_set = false;
    double box_low = -3.0, box_high = 3.0;

    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigInvalid("config: malformed section header at line " +
                                    std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "problem" && section != "run" && section != "loss" &&
                section != "acquisition" && section != "gp")
                throw ConfigInvalid("config: unknown section '" + section + "'");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigInvalid("config: expected 'key = value' at line " +
                                std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (section == "problem") {
            if (key == "kind") {
                if (value != "ackley" && value != "shape")
                    throw ConfigInvalid("config: problem.kind must be ackley or shape, got '" +
                                        value + "'");
                cfg.problem_kind = value;
            } else if (key == "dimension") {
                cfg.dimension = parse_uint(qual, value);
            } else if (key == "side") {
                cfg.side = parse_uint(qual, value);
            } else if (key == "dataset_size") {
                cfg.dataset_size = parse_uint(qual, value);
            } else {
                throw ConfigInvalid("config: unknown key '" + qual + "'");
            }
        } else if (section == "run") {
            if (key == "methods") {
                cfg.methods.clear();
                for (const std::string& name : split_list(value)) {
                    const auto m = bo::method_from_name(name);
                    if (!m)
                        throw ConfigInvalid("config: unknown method '" + name + "'");
                    cfg.methods.push_back(*m);
                }
                if (cfg.methods.empty())
                    throw ConfigInvalid("config: run.methods must not be empty");
            } else if (key == "seeds") {
                cfg.seeds.clear();
                for (const std::string& s : split_list(value))
                    cfg.seeds.push_back(parse_uint(qual, s));
                if (cfg.seeds.empty())
                    throw ConfigInvalid("config: run.seeds must not be empty");
            } else if (key == "budget") {
                cfg.bo.budget = parse_uint(qual, value);
            } else if (key == "frequency") {
                cfg.bo.frequency = parse_uint(qual, value);
            } else if (key == "initial_samples") {
                cfg.bo.initial_samples = parse_uint(qual, value);
            } else if (key == "latent_dim") {
                cfg.bo.latent_dim = parse_uint(qual, value);
            } else if (key == "hidden") {
                cfg.bo.hidden.clear();
                for (const std::string& s : split_list(value))
                    cfg.bo.hidden.push_back(parse_uint(qual, s));
            } else if (key == "pretrain_epochs") {
                cfg.bo.pretrain_epochs = parse_uint(qual, value);
            } else if (key == "retrain_epochs") {
                cfg.bo.retrain_epochs = parse_uint(qual, value);
            } else if (key == "learning_rate") {
                cfg.bo.learning_rate = parse_double(qual, value);
            } else if (key == "initial_design") {
                if (value == "uniform")
                    cfg.bo.initial_design = bo::InitialDesign::Uniform;
                else if (value == "dataset")
                    cfg.bo.initial_design = bo::InitialDesign::Dataset;
                else
                    throw ConfigInvalid("config: run.initial_design must be uniform or dataset");
            } else if (key == "out_dir") {
                cfg.out_dir = value;
            } else {
                throw ConfigInvalid("config: unknown key '" + qual + "'");
            }
        } else if (section == "loss") {
            if (key == "lambda_recon") cfg.bo.loss.lambda_recon = parse_double(qual, value);
            else if (key == "lambda_kl") cfg.bo.loss.lambda_kl = parse_double(qual, value);
            else if (key == "lambda_consistency")
                cfg.bo.loss.lambda_consistency = parse_double(qual, value);
            else if (key == "hippo_order")
                cfg.bo.loss.hippo_order = parse_uint(qual, value);
            else if (key == "reweigh_temperature")
                cfg.bo.loss.reweigh_temperature = parse_double(qual, value);
            else if (key == "squared_reconstruction")
                cfg.bo.loss.squared_reconstruction = parse_bool(qual, value);
            else
                throw ConfigInvalid("config: unknown key '" + qual + "'");
        } else if (section == "acquisition") {
            if (key == "kind") {
                if (value == "ucb") cfg.bo.acquisition.kind = acq::Kind::Ucb;
                else if (value == "ei") cfg.bo.acquisition.kind = acq::Kind::Ei;
                else throw ConfigInvalid("config: acquisition.kind must be ucb or ei");
            } else if (key == "beta") {
                cfg.bo.acquisition.beta = parse_double(qual, value);
            } else if (key == "xi") {
                cfg.bo.acquisition.xi = parse_double(qual, value);
            } else if (key == "mode") {
                if (value == "multistart")
                    cfg.bo.acquisition.mode = acq::OptimizerMode::Multistart;
                else if (value == "grid")
                    cfg.bo.acquisition.mode = acq::OptimizerMode::Grid;
                else
                    throw ConfigInvalid("config: acquisition.mode must be multistart or grid");
            } else if (key == "restarts") {
                cfg.bo.acquisition.restarts = parse_uint(qual, value);
            } else if (key == "sweeps") {
                cfg.bo.acquisition.sweeps = parse_uint(qual, value);
            } else if (key == "resolution") {
                cfg.bo.acquisition.resolution = parse_uint(qual, value);
            } else if (key == "box_low") {
                box_low = parse_double(qual, value);
                acq_box_low_set = true;
            } else if (key == "box_high") {
                box_high = parse_double(qual, value);
                acq_box_high_set = true;
            } else if (key == "threshold") {
                cfg.bo.acquisition.threshold = parse_double(qual, value);
            } else {
                throw ConfigInvalid("config: unknown key '" + qual + "'");
            }
        } else if (section == "gp") {
            auto parse_doubles = [&](const std::string& v) {
                std::vector<double> out;
                for (const std::string& s : split_list(v)) out.push_back(parse_double(qual, s));
                if (out.empty()) throw ConfigInvalid("config: '" + qual + "' must not be empty");
                return out;
            };
            if (key == "lengthscales") cfg.bo.gp_lengthscales = parse_doubles(value);
            else if (key == "signal_variance_factors")
                cfg.bo.gp_signal_factors = parse_doubles(value);
            else if (key == "noise_variance_factors")
                cfg.bo.gp_noise_factors = parse_doubles(value);
            else
                throw ConfigInvalid("config: unknown key '" + qual + "'");
        } else {
            throw ConfigInvalid("config: key '" + key + "' outside any section");
        }
    }

    if (acq_box_low_set || acq_box_high_set || cfg.problem_kind == "shape") {
        if (!(box_low < box_high))
            throw ConfigInvalid("config: acquisition.box_low must be < box_high");
    }
    cfg.bo.acquisition.box = acq::Box::cube(cfg.bo.latent_dim, box_low, box_high);

    if (cfg.bo.budget < 1) throw ConfigInvalid("config: run.budget must be >= 1");
    if (cfg.bo.frequency < 1) throw ConfigInvalid("config: run.frequency must be >= 1");
    if (cfg.bo.hidden.empty()) throw ConfigInvalid("config: run.hidden must not be empty");

    if (cfg.problem_kind == "shape") {
        cfg.bo.squash = vae::OutputSquash::Sigmoid;
        cfg.bo.initial_design = bo::InitialDesign::Dataset;
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("config: cannot read file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_text(const ExperimentConfig& cfg) {
    std::string s;
    auto num = [](double v) { return bo::format_g17(v); };
    auto list = [&](const std::vector<double>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            out += num(v[i]);
        }
        return out;
    };

    s += "problem.kind=" + cfg.problem_kind + "\n";
    s += "problem.dimension=" + std::to_string(cfg.dimension) + "\n";
    s += "problem.side=" + std::to_string(cfg.side) + "\n";
    s += "problem.dataset_size=" + std::to_string(cfg.dataset_size) + "\n";
    s += "run.budget=" + std::to_string(cfg.bo.budget) + "\n";
    s += "run.frequency=" + std::to_string(cfg.bo.frequency) + "\n";
    s += "run.initial_samples=" + std::to_string(cfg.bo.initial_samples) + "\n";
    s += "run.latent_dim=" + std::to_string(cfg.bo.latent_dim) + "\n";
    s += "run.hidden=";
    for (std::size_t i = 0; i < cfg.bo.hidden.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(cfg.bo.hidden[i]);
    }
    s += "\n";
    s += "run.pretrain_epochs=" + std::to_string(cfg.bo.pretrain_epochs) + "\n";
    s += "run.retrain_epochs=" + std::to_string(cfg.bo.retrain_epochs) + "\n";
    s += "run.learning_rate=" + num(cfg.bo.learning_rate) + "\n";
    s += std::string("run.initial_design=") +
         (cfg.bo.initial_design == bo::InitialDesign::Dataset ? "dataset" : "uniform") + "\n";
    s += "loss.lambda_recon=" + num(cfg.bo.loss.lambda_recon) + "\n";
    s += "loss.lambda_kl=" + num(cfg.bo.loss.lambda_kl) + "\n";
    s += "loss.lambda_consistency=" + num(cfg.bo.loss.lambda_consistency) + "\n";
    s += "loss.hippo_order=" + std::to_string(cfg.bo.loss.hippo_order) + "\n";
    s += "loss.reweigh_temperature=" + num(cfg.bo.loss.reweigh_temperature) + "\n";
    s += std::string("loss.squared_reconstruction=") +
         (cfg.bo.loss.squared_reconstruction ? "true" : "false") + "\n";
    s += std::string("acquisition.kind=") +
         (cfg.bo.acquisition.kind == acq::Kind::Ucb ? "ucb" : "ei") + "\n";
    s += "acquisition.beta=" + num(cfg.bo.acquisition.beta) + "\n";
    s += "acquisition.xi=" + num(cfg.bo.acquisition.xi) + "\n";
    s += std::string("acquisition.mode=") +
         (cfg.bo.acquisition.mode == acq::OptimizerMode::Grid ? "grid" : "multistart") + "\n";
    s += "acquisition.restarts=" + std::to_string(cfg.bo.acquisition.restarts) + "\n";
    s += "acquisition.sweeps=" + std::to_string(cfg.bo.acquisition.sweeps) + "\n";
    s += "acquisition.resolution=" + std::to_string(cfg.bo.acquisition.resolution) + "\n";
    const acq::Box& box = cfg.bo.acquisition.box;
    s += "acquisition.box_low=" + num(box.dim() ? box.lo[0] : -3.0) + "\n";
    s += "acquisition.box_high=" + num(box.dim() ? box.hi[0] : 3.0) + "\n";
    s += "acquisition.threshold=" + num(cfg.bo.acquisition.threshold) + "\n";
    s += "gp.lengthscales=" + list(cfg.bo.gp_lengthscales) + "\n";
    s += "gp.signal_variance_factors=" + list(cfg.bo.gp_signal_factors) + "\n";
    s += "gp.noise_variance_factors=" + list(cfg.bo.gp_noise_factors) + "\n";
    return s;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t config_hash(const ExperimentConfig& cfg, bo::Method method) {
    return fnv1a64(canonical_text(cfg) + "method=" + bo::method_name(method) + "\n");
}

problems::BenchmarkProblem make_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.problem_kind == "shape")
        return problems::shape_area_problem(cfg.side, seed, cfg.dataset_size);
    return problems::ackley(cfg.dimension);
}

bo::BoConfig make_bo_config(const ExperimentConfig& cfg, bo::Method method,
                            std::uint64_t seed) {
    bo::BoConfig b = cfg.bo;
    b.method = method;
    b.seed = seed;
    b.config_hash = config_hash(cfg, method);
    return b;
}

}  // namespace hibbo::cli
