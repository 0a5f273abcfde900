#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace hibbo {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. The lingua franca of the library.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, Vector data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix row(const Vector& v);     // 1 x n
    static Matrix column(const Vector& v);  // n x 1

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const Vector& values() const { return data_; }

    Vector row_vector(std::size_t i) const;
    void set_row(std::size_t i, const Vector& v);

    Matrix transposed() const;
    bool all_finite() const;
    double max_abs() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double k);

double dot(const Vector& a, const Vector& b);
double squared_distance(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double frobenius_norm(const Matrix& a);

}  // namespace hibbo
