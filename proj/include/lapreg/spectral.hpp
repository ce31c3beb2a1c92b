#pragma once

#include <vector>

#include "lapreg/matrix.hpp"

namespace lapreg {

/// Eigendecomposition S = U diag(values) U^T of a symmetric matrix.
/// Eigenvalues are sorted descending; each eigenvector is normalized so
/// its largest-magnitude component (first such index on ties) is
/// nonnegative, making the output canonical and bit-reproducible.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps the strict
/// upper triangle in row-major order until the off-diagonal Frobenius
/// norm falls below 1e-12 * ||S||_F; throws NoConvergence after 100
/// sweeps and NotSymmetric when ||S - S^T||_F > 1e-10 * ||S||_F.
SpectralDecomposition sym_eigen(const Matrix& sym);

/// Matrix power map S^alpha = U diag(lambda^alpha) U^T for PSD S.
/// Eigenvalues in [-1e-9, 0) are clamped to zero; anything lower throws
/// NegativeEigenvalue.
Matrix matrix_power(const Matrix& psd, double alpha);

/// Smallest floating-point negative eigenvalue treated as zero.
inline constexpr double kEigenvalueClampTol = 1e-9;

}  // namespace lapreg
