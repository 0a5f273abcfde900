#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hibbo/bo_loop.hpp"
#include "hibbo/problems.hpp"

namespace hibbo::cli {

// One experiment: a problem, a method list, a seed list, and the shared BO
// configuration. Parsed from a sectioned key/value config file; unknown
// sections or keys are rejected by name.
struct ExperimentConfig {
    // [problem]
    std::string problem_kind = "ackley";  // ackley | shape
    std::size_t dimension = 60;           // ackley input dimension
    std::size_t side = 64;                // shape canvas side
    std::size_t dataset_size = 60;        // shape training shapes

    // [run]
    std::vector<bo::Method> methods{bo::Method::Base, bo::Method::Hibbo};
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir;  // optional; --out overrides

    bo::BoConfig bo;  // budget, frequency, loss, acquisition, gp grid, ...
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical rendering of every experiment-relevant field (excludes out_dir);
// equal configs produce identical text.
std::string canonical_text(const ExperimentConfig& cfg);

// FNV-1a hash of the canonical text plus the concrete method, so records of
// different methods under one experiment never collide.
std::uint64_t config_hash(const ExperimentConfig& cfg, bo::Method method);

std::uint64_t fnv1a64(const std::string& text);

problems::BenchmarkProblem make_problem(const ExperimentConfig& cfg, std::uint64_t seed);
bo::BoConfig make_bo_config(const ExperimentConfig& cfg, bo::Method method,
                            std::uint64_t seed);

}  // namespace hibbo::cli
