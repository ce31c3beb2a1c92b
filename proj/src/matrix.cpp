#include "lapreg/matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "lapreg/errors.hpp"

namespace lapreg {

Matrix Matrix::identity(int n) {
    Matrix eye(n, n);
    for (int i = 0; i < n; ++i) eye(i, i) = 1.0;
    return eye;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorCode::DimensionMismatch, "matrix addition shape mismatch");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        fail(ErrorCode::DimensionMismatch, "matrix subtraction shape mismatch");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double scale) {
    for (double& value : data_) value *= scale;
    return *this;
}

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::symmetrized() const {
    Matrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return out;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) {
    lhs += rhs;
    return lhs;
}

Matrix operator-(Matrix lhs, const Matrix& rhs) {
    lhs -= rhs;
    return lhs;
}

Matrix operator*(double scale, Matrix mat) {
    mat *= scale;
    return mat;
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) fail(ErrorCode::DimensionMismatch, "matmul shape mismatch");
    Matrix out(lhs.rows(), rhs.cols());
    for (int i = 0; i < lhs.rows(); ++i) {
        for (int k = 0; k < lhs.cols(); ++k) {
            const double left = lhs(i, k);
            if (left == 0.0) continue;
            for (int j = 0; j < rhs.cols(); ++j) out(i, j) += left * rhs(k, j);
        }
    }
    return out;
}

double frobenius_norm(const Matrix& mat) {
    double sum = 0.0;
    for (size_t k = 0; k < mat.size(); ++k) sum += mat.data()[k] * mat.data()[k];
    return std::sqrt(sum);
}

double frobenius_inner(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
        fail(ErrorCode::DimensionMismatch, "frobenius_inner shape mismatch");
    double sum = 0.0;
    for (size_t k = 0; k < lhs.size(); ++k) sum += lhs.data()[k] * rhs.data()[k];
    return sum;
}

double max_asymmetry(const Matrix& mat) {
    double worst = 0.0;
    for (int i = 0; i < mat.rows(); ++i)
        for (int j = i + 1; j < mat.cols(); ++j) worst = std::max(worst, std::fabs(mat(i, j) - mat(j, i)));
    return worst;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::RowSumNonZero: return "RowSumNonZero";
        case ErrorCode::OffDiagonalOutOfBox: return "OffDiagonalOutOfBox";
        case ErrorCode::EntryOutOfBox: return "EntryOutOfBox";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BadInput: return "BadInput";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::LocalNeedsScalarPredictor: return "LocalNeedsScalarPredictor";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::AllBandwidthsFailed: return "AllBandwidthsFailed";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorCode::BandwidthTooSmall: return "BandwidthTooSmall";
    }
    std::abort();
}

}  // namespace lapreg
