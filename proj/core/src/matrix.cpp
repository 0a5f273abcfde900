#include "hibbo/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hibbo/errors.hpp"

namespace hibbo {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionMismatch("Matrix: data length != rows*cols");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw DimensionMismatch("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::row(const Vector& v) { return Matrix(1, v.size(), v); }

Matrix Matrix::column(const Vector& v) { return Matrix(v.size(), 1, v); }

Vector Matrix::row_vector(std::size_t i) const {
    return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

void Matrix::set_row(std::size_t i, const Vector& v) {
    if (v.size() != cols_) throw DimensionMismatch("set_row: length mismatch");
    std::copy(v.begin(), v.end(), data_.begin() + i * cols_);
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dims differ");
    Matrix c(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    // i-k-j order keeps the inner loop contiguous in both b and c.
    for (std::size_t i = 0; i < n; ++i) {
        double* ci = c.data() + i * m;
        const double* ai = a.data() + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            if (av == 0.0) continue;
            const double* bp = b.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) ci[j] += av * bp[j];
        }
    }
    return c;
}

namespace {
void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(std::string(what) + ": shape mismatch");
}
}  // namespace

Matrix add(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "add");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "sub");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "hadamard");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] *= b.data()[i];
    return c;
}

Matrix scale(const Matrix& a, double k) {
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] *= k;
    return c;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("squared_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double norm2(const Vector& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s);
}

}  // namespace hibbo
