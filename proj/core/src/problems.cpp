#include "hibbo/problems.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hibbo/errors.hpp"
#include "hibbo/rng.hpp"

namespace hibbo::problems {

BenchmarkProblem::BenchmarkProblem(std::string name, std::size_t dim, Vector box_lo,
                                   Vector box_hi,
                                   std::function<double(const Vector&)> objective,
                                   std::optional<double> known_optimum)
    : name_(std::move(name)),
      dim_(dim),
      box_lo_(std::move(box_lo)),
      box_hi_(std::move(box_hi)),
      objective_(std::move(objective)),
      known_optimum_(known_optimum),
      counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

double BenchmarkProblem::evaluate(const Vector& x) const {
    if (x.size() != dim_) throw DimensionMismatch("evaluate: input dim mismatch");
    counter_->fetch_add(1);
    return objective_(x);
}

void BenchmarkProblem::attach_dataset(Matrix X, Vector values) {
    dataset_ = std::make_shared<std::pair<Matrix, Vector>>(std::move(X), std::move(values));
}

double ackley_value(const Vector& x) {
    constexpr double a = 20.0, b = 0.2, c = 2.0 * M_PI;
    const double n = static_cast<double>(x.size());
    double sq = 0.0, cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(c * v);
    }
    return -a * std::exp(-b * std::sqrt(sq / n)) - std::exp(cs / n) + a + std::exp(1.0);
}

BenchmarkProblem ackley(std::size_t d) {
    constexpr double bound = 32.768;
    return BenchmarkProblem(
        "ackley" + std::to_string(d), d, Vector(d, -bound), Vector(d, bound),
        [](const Vector& x) { return -ackley_value(x); }, 0.0);
}

namespace {

void draw_shape(Rng& rng, std::size_t side, double* pixels) {
    const double canvas = static_cast<double>(side * side);
    const double area = rng.uniform(0.05, 0.40);
    const double aspect = rng.uniform(0.5, 2.0);
    if (rng.uniform() < 0.5) {
        // filled axis-aligned rectangle
        std::size_t w = static_cast<std::size_t>(std::lround(std::sqrt(area * canvas * aspect)));
        w = std::min(std::max<std::size_t>(w, 2), side);
        std::size_t h = static_cast<std::size_t>(std::lround(area * canvas / static_cast<double>(w)));
        h = std::min(std::max<std::size_t>(h, 2), side);
        const std::size_t x0 = rng.uniform_index(side - w + 1);
        const std::size_t y0 = rng.uniform_index(side - h + 1);
        for (std::size_t y = y0; y < y0 + h; ++y)
            for (std::size_t x = x0; x < x0 + w; ++x) pixels[y * side + x] = 1.0;
    } else {
        // filled ellipse
        double sa = std::sqrt(area * canvas * aspect / M_PI);
        double sb = area * canvas / (M_PI * sa);
        sa = std::min(std::max(sa, 1.5), static_cast<double>(side) / 2.0);
        sb = std::min(std::max(sb, 1.5), static_cast<double>(side) / 2.0);
        const double cx = rng.uniform(sa, static_cast<double>(side) - sa);
        const double cy = rng.uniform(sb, static_cast<double>(side) - sb);
        for (std::size_t y = 0; y < side; ++y)
            for (std::size_t x = 0; x < side; ++x) {
                const double dx = (static_cast<double>(x) + 0.5 - cx) / sa;
                const double dy = (static_cast<double>(y) + 0.5 - cy) / sb;
                if (dx * dx + dy * dy <= 1.0) pixels[y * side + x] = 1.0;
            }
    }
}

}  // namespace

BenchmarkProblem shape_area_problem(std::size_t side, std::uint64_t seed,
                                    std::size_t dataset_size) {
    if (side < 8) throw ConfigInvalid("shape_area_problem: side must be >= 8");
    const std::size_t d = side * side;
    BenchmarkProblem p(
        "shape" + std::to_string(side), d, Vector(d, 0.0), Vector(d, 1.0),
        [d](const Vector& x) {
            std::size_t on = 0;
            for (double v : x) on += v >= 0.5;
            return static_cast<double>(on) / static_cast<double>(d);
        },
        1.0);

    Rng rng = Rng(seed).split("shape-dataset");
    Matrix X(dataset_size, d);
    Vector areas(dataset_size);
    for (std::size_t i = 0; i < dataset_size; ++i) {
        draw_shape(rng, side, X.data() + i * d);
        double on = 0.0;
        for (std::size_t j = 0; j < d; ++j) on += X(i, j) >= 0.5;
        areas[i] = on / static_cast<double>(d);
    }
    p.attach_dataset(std::move(X), std::move(areas));
    return p;
}

std::size_t save_shape_dataset(const BenchmarkProblem& problem, const std::string& dir) {
    const Matrix* X = problem.dataset();
    const Vector* areas = problem.dataset_values();
    if (!X) throw EmptyInput("save_shape_dataset: problem has no dataset");
    const std::size_t side = static_cast<std::size_t>(std::lround(std::sqrt(
        static_cast<double>(problem.dim()))));
    std::filesystem::create_directories(dir);
    std::FILE* index = std::fopen((dir + "/index.csv").c_str(), "w");
    if (!index) throw RuntimeFailure("save_shape_dataset: cannot open index.csv");
    std::fprintf(index, "file,area\n");
    for (std::size_t i = 0; i < X->rows(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "shape_%04zu.pgm", i);
        std::FILE* f = std::fopen((dir + "/" + name).c_str(), "w");
        if (!f) {
            std::fclose(index);
            throw RuntimeFailure("save_shape_dataset: cannot open image file");
        }
        std::fprintf(f, "P2\n%zu %zu\n255\n", side, side);
        for (std::size_t y = 0; y < side; ++y) {
            for (std::size_t x = 0; x < side; ++x)
                std::fprintf(f, x ? " %d" : "%d",
                             (*X)(i, y * side + x) >= 0.5 ? 255 : 0);
            std::fprintf(f, "\n");
        }
        std::fclose(f);
        std::fprintf(index, "%s,%.17g\n", name, (*areas)[i]);
    }
    std::fclose(index);
    return X->rows();
}

Matrix sin_manifold_dataset(std::size_t count, double t0, double t1) {
    Matrix X(count, 3);
    for (std::size_t i = 0; i < count; ++i) {
        const double t =
            t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(count - 1);
        X(i, 0) = std::sin(t);
        X(i, 1) = std::sin(2.0 * t);
        X(i, 2) = t;
    }
    return X;
}

const char* fig2_family_name(Fig2Family family) {
    switch (family) {
        case Fig2Family::SinSin: return "sin-sin";
        case Fig2Family::SinTanh: return "sin-tanh";
        case Fig2Family::CosCos: return "cos-cos";
        case Fig2Family::CosTanh: return "cos-tanh";
        case Fig2Family::TanhTanh: return "tanh-tanh";
        case Fig2Family::TanhCos: return "tanh-cos";
    }
    return "?";
}

std::optional<Fig2Family> fig2_family_from_name(const std::string& name) {
    for (Fig2Family f : {Fig2Family::SinSin, Fig2Family::SinTanh, Fig2Family::CosCos,
                         Fig2Family::CosTanh, Fig2Family::TanhTanh, Fig2Family::TanhCos})
        if (name == fig2_family_name(f)) return f;
    return std::nullopt;
}

namespace {
Vector base_sequence(char kind, std::size_t points) {
    Vector v(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(points - 1);
        switch (kind) {
            case 's': v[i] = std::sin(2.0 * M_PI * frac); break;
            case 'c': v[i] = std::cos(2.0 * M_PI * frac); break;
            case 't': v[i] = std::tanh(-3.0 + 6.0 * frac); break;
        }
    }
    return v;
}

std::pair<char, char> family_kinds(Fig2Family family) {
    switch (family) {
        case Fig2Family::SinSin: return {'s', 's'};
        case Fig2Family::SinTanh: return {'s', 't'};
        case Fig2Family::CosCos: return {'c', 'c'};
        case Fig2Family::CosTanh: return {'c', 't'};
        case Fig2Family::TanhTanh: return {'t', 't'};
        case Fig2Family::TanhCos: return {'t', 'c'};
    }
    return {'s', 's'};
}
}  // namespace

Fig2Pair figure2_sequences(Fig2Family family, std::uint64_t seed, double noise_x,
                           double noise_y, std::size_t points) {
    const auto [ka, kb] = family_kinds(family);
    Fig2Pair pair;
    pair.x_seq = base_sequence(ka, points);
    pair.y_seq = base_sequence(kb, points);
    Rng rng = Rng(seed).split("fig2-noise");
    for (double& v : pair.x_seq) v += noise_x * rng.normal();
    for (double& v : pair.y_seq) v += noise_y * rng.normal();
    return pair;
}

}  // namespace hibbo::problems
