#pragma once

#include <cstddef>
#include <vector>

namespace lapreg {

/// Dense row-major matrix of doubles. Sized for the small symmetric
/// matrices this library works with (node counts up to a few hundred),
/// so no sparse or blocked storage.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n);

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    size_t size() const { return data_.size(); }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double scale);

    Matrix transposed() const;

    /// (M + M^T) / 2.
    Matrix symmetrized() const;

    bool operator==(const Matrix& other) const = default;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(double scale, Matrix mat);
Matrix matmul(const Matrix& lhs, const Matrix& rhs);

double frobenius_norm(const Matrix& mat);
double frobenius_inner(const Matrix& lhs, const Matrix& rhs);

/// Largest |a_ij - a_ji|; 0 for an exactly symmetric matrix.
double max_asymmetry(const Matrix& mat);

}  // namespace lapreg
