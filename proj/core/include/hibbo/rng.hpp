#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "hibbo/matrix.hpp"

namespace hibbo {

// Deterministic random stream: a seeded mt19937_64 with hand-rolled
// uniform/normal transforms so the produced doubles are identical across
// standard-library implementations. Streams for distinct purposes are
// derived from the root seed by fixed labeled splits.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent child stream for the given purpose label. Depends only on
    // the root seed and the label, never on how much this stream was used.
    Rng split(std::string_view label) const;

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();
    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);
    double normal();                         // standard normal (Box-Muller)
    std::size_t uniform_index(std::size_t n);  // {0, ..., n-1}

    Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi);
    Matrix normal_matrix(std::size_t rows, std::size_t cols);

private:
    std::uint64_t seed_ = 0;
    std::mt19937_64 engine_;
};

}  // namespace hibbo
