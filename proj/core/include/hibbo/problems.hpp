#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hibbo/matrix.hpp"

namespace hibbo::problems {

// A black-box objective under the maximization convention, with exact
// evaluation accounting. Evaluators are pure; the counter is atomic so
// concurrent harness runs on separate instances stay correct.
class BenchmarkProblem {
public:
    BenchmarkProblem(std::string name, std::size_t dim, Vector box_lo, Vector box_hi,
                     std::function<double(const Vector&)> objective,
                     std::optional<double> known_optimum = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    const Vector& box_lo() const { return box_lo_; }
    const Vector& box_hi() const { return box_hi_; }
    std::optional<double> known_optimum() const { return known_optimum_; }

    double evaluate(const Vector& x) const;
    std::uint64_t evaluations() const { return counter_->load(); }

    // Optional attached training dataset (used by the shape task).
    void attach_dataset(Matrix X, Vector values);
    const Matrix* dataset() const { return dataset_ ? &dataset_->first : nullptr; }
    const Vector* dataset_values() const { return dataset_ ? &dataset_->second : nullptr; }

private:
    std::string name_;
    std::size_t dim_;
    Vector box_lo_, box_hi_;
    std::function<double(const Vector&)> objective_;
    std::optional<double> known_optimum_;
    std::shared_ptr<std::atomic<std::uint64_t>> counter_;
    std::shared_ptr<std::pair<Matrix, Vector>> dataset_;
};

// Raw Ackley value (a = 20, b = 0.2, c = 2*pi): 0 at the origin, > 0 elsewhere.
double ackley_value(const Vector& x);

// Ackley on [-32.768, 32.768]^d, exposed negated so the BO loop maximizes.
BenchmarkProblem ackley(std::size_t d);

// Shape-area task: inputs are side*side images (row-major pixels); the
// objective is the fraction of pixels >= 0.5. Ships with a seeded training
// dataset of filled rectangles and ellipses covering roughly 5-40% of the
// canvas area.
BenchmarkProblem shape_area_problem(std::size_t side, std::uint64_t seed,
                                    std::size_t dataset_size = 60);

// Writes the attached shape dataset as portable graymaps plus an index file
// (index.csv: file,area). Returns the number of images written.
std::size_t save_shape_dataset(const BenchmarkProblem& problem, const std::string& dir);

// 3-d sin-manifold curve x(t) = [sin t, sin 2t, t] on [0, 2pi]; the natural
// objective is the curve parameter t = x[2].
Matrix sin_manifold_dataset(std::size_t count, double t0 = 0.0, double t1 = 6.283185307179586);

enum class Fig2Family { SinSin, SinTanh, CosCos, CosTanh, TanhTanh, TanhCos };

const char* fig2_family_name(Fig2Family family);
std::optional<Fig2Family> fig2_family_from_name(const std::string& name);

struct Fig2Pair {
    Vector x_seq, y_seq;  // 50-point scalar sequences
};

// Sequence pairs of the Figure-2 demos: the base functions are sampled on a
// uniform grid (one period [0, 2pi] for sin/cos, [-3, 3] for tanh); x_seq
// carries noise coefficient 0.1 and y_seq 0.5 (standard normal).
Fig2Pair figure2_sequences(Fig2Family family, std::uint64_t seed,
                           double noise_x = 0.1, double noise_y = 0.5,
                           std::size_t points = 50);

}  // namespace hibbo::problems
