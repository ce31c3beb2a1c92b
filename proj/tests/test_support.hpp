#pragma once

#include <vector>

#include "lapreg/graph.hpp"
#include "lapreg/matrix.hpp"
#include "lapreg/rng.hpp"

namespace lapreg::testing {

inline Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows.begin()->size());
    Matrix mat(m, n);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double value : row) mat(i, j++) = value;
        ++i;
    }
    return mat;
}

inline Matrix random_symmetric(Rng& rng, int m, double scale = 1.0) {
    Matrix mat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const double value = scale * (2.0 * rng.uniform() - 1.0);
            mat(i, j) = value;
            mat(j, i) = value;
        }
    return mat;
}

/// PSD with largest eigenvalue at most `top`: scaled A^T A, using
/// trace >= lambda_1 so no eigensolver is involved.
inline Matrix random_psd(Rng& rng, int m, double top = 10.0) {
    Matrix a(m, m);
    for (size_t k = 0; k < a.size(); ++k) a.data()[k] = rng.normal();
    Matrix gram = matmul(a.transposed(), a);
    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += gram(i, i);
    if (trace > 0.0) gram *= top / trace;
    return gram;
}

/// Uniformly random feasible Laplacian: strict upper entries U[-W, 0].
inline GraphLaplacian random_laplacian(Rng& rng, int m, double bound = 1.0) {
    std::vector<double> values(static_cast<size_t>(m) * (m - 1) / 2);
    for (double& value : values) value = -bound * rng.uniform();
    return vech_inv(HalfVector{std::move(values), m}, bound);
}

inline double max_abs_diff(const Matrix& lhs, const Matrix& rhs) {
    double worst = 0.0;
    for (size_t k = 0; k < lhs.size(); ++k) {
        const double diff = lhs.data()[k] - rhs.data()[k];
        worst = std::max(worst, diff < 0 ? -diff : diff);
    }
    return worst;
}

}  // namespace lapreg::testing
