#pragma once

#include <limits>

#include "hibbo/gp.hpp"
#include "hibbo/rng.hpp"

namespace hibbo::acq {

struct Box {
    Vector lo, hi;  // per-dimension bounds, lo < hi

    static Box cube(std::size_t dim, double lo, double hi);
    std::size_t dim() const { return lo.size(); }
};

enum class Kind { Ucb, Ei };
enum class OptimizerMode { Multistart, Grid };

struct AcquisitionConfig {
    Kind kind = Kind::Ucb;
    double beta = 4.0;   // UCB exploration weight
    double xi = 0.01;    // EI improvement margin
    Box box;             // latent search box; defaults to [-3,3]^d at run time
    OptimizerMode mode = OptimizerMode::Multistart;
    std::size_t restarts = 16;
    std::size_t sweeps = 2;       // coordinate golden-section passes per restart
    std::size_t resolution = 41;  // grid points per dimension
    double threshold = -std::numeric_limits<double>::infinity();  // eta
};

double ucb(const gp::GpPosterior& post, const Vector& z, double beta);
double ei(const gp::GpPosterior& post, const Vector& z, double best_y, double xi);

struct MaximizeResult {
    Vector z;
    double value = 0.0;
};

// Maximizes the configured acquisition over the box. Grid mode enumerates
// resolution^d points (row-major, first strict maximum kept); multistart mode
// refines uniform restarts with coordinate-wise golden-section sweeps.
// best_y is the incumbent objective (used by EI only).
MaximizeResult maximize(const gp::GpPosterior& post, const AcquisitionConfig& cfg,
                        Rng& rng, double best_y);

}  // namespace hibbo::acq
