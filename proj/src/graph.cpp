#include "lapreg/graph.hpp"

#include <cmath>
#include <string>

#include "lapreg/errors.hpp"

namespace lapreg {

namespace {

std::string at_index(int i, int j) { return "(" + std::to_string(i) + ", " + std::to_string(j) + ")"; }

}  // namespace

GraphLaplacian GraphLaplacian::validated(const Matrix& raw, double bound) {
    if (!raw.square() || raw.rows() == 0) fail(ErrorCode::DimensionMismatch, "laplacian must be square and nonempty");
    if (bound < 0.0) fail(ErrorCode::BadInput, "bound W must be nonnegative");
    const int m = raw.rows();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::fabs(raw(i, j) - raw(j, i)) > kSymmetryTol)
                fail(ErrorCode::NotSymmetric, "asymmetry above tolerance at " + at_index(i, j));
    Matrix entries = raw.symmetrized();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double value = entries(i, j);
            if (value < -bound - kOffDiagonalTol || value > kOffDiagonalTol)
                fail(ErrorCode::OffDiagonalOutOfBox, "entry " + std::to_string(value) + " outside [-W, 0] at " + at_index(i, j));
        }
    }
    const double row_sum_tol = kRowSumTolFactor * m * bound;
    for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) sum += entries(i, j);
        if (std::fabs(sum) > row_sum_tol)
            fail(ErrorCode::RowSumNonZero, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
    return GraphLaplacian(std::move(entries), bound);
}

GraphLaplacian GraphLaplacian::unchecked(Matrix entries, double bound) {
    return GraphLaplacian(std::move(entries), bound);
}

AdjacencyMatrix AdjacencyMatrix::validated(const Matrix& raw, double bound) {
    if (!raw.square() || raw.rows() == 0) fail(ErrorCode::DimensionMismatch, "adjacency must be square and nonempty");
    if (bound < 0.0) fail(ErrorCode::BadInput, "bound W must be nonnegative");
    const int m = raw.rows();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::fabs(raw(i, j) - raw(j, i)) > kSymmetryTol)
                fail(ErrorCode::NotSymmetric, "asymmetry above tolerance at " + at_index(i, j));
    Matrix weights = raw.symmetrized();
    for (int i = 0; i < m; ++i) {
        if (std::fabs(weights(i, i)) > kOffDiagonalTol)
            fail(ErrorCode::BadInput, "diagonal must be zero at " + at_index(i, i));
        weights(i, i) = 0.0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            if (weights(i, j) < -kOffDiagonalTol || weights(i, j) > bound + kOffDiagonalTol)
                fail(ErrorCode::EntryOutOfBox, "weight outside [0, W] at " + at_index(i, j));
        }
    }
    return AdjacencyMatrix(std::move(weights), bound);
}

AdjacencyMatrix AdjacencyMatrix::unchecked(Matrix weights, double bound) {
    return AdjacencyMatrix(std::move(weights), bound);
}

GraphLaplacian laplacian_from_adjacency(const AdjacencyMatrix& adjacency) {
    const int m = adjacency.size();
    const Matrix& weights = adjacency.weights();
    Matrix entries(m, m);
    for (int i = 0; i < m; ++i) {
        double degree = 0.0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            entries(i, j) = -weights(i, j);
            degree += weights(i, j);
        }
        entries(i, i) = degree;
    }
    return GraphLaplacian::unchecked(std::move(entries), adjacency.bound());
}

AdjacencyMatrix adjacency_from_laplacian(const GraphLaplacian& laplacian) {
    const int m = laplacian.size();
    Matrix weights(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            // Tolerance-level positive off-diagonals would become negative
            // weights; treat them as absent edges.
            weights(i, j) = laplacian.entries()(i, j) < 0.0 ? -laplacian.entries()(i, j) : 0.0;
        }
    return AdjacencyMatrix::unchecked(std::move(weights), laplacian.bound());
}

HalfVector vech(const GraphLaplacian& laplacian) {
    return HalfVector{strict_upper(laplacian.entries()), laplacian.size()};
}

GraphLaplacian vech_inv(const HalfVector& half, double bound) {
    const int m = half.size;
    if (half.values.size() != static_cast<size_t>(m) * (m - 1) / 2)
        fail(ErrorCode::DimensionMismatch, "half vector length does not match node count");
    for (size_t k = 0; k < half.values.size(); ++k)
        if (half.values[k] < -bound || half.values[k] > 0.0)
            fail(ErrorCode::EntryOutOfBox, "half vector entry " + std::to_string(half.values[k]) + " outside [-W, 0] at " + std::to_string(k));
    return GraphLaplacian::unchecked(centered_from_strict_upper(half.values, m), bound);
}

int node_count_for_half_vector(size_t length) {
    // length = m(m-1)/2
    const double root = (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(length))) / 2.0;
    const int m = static_cast<int>(std::lround(root));
    if (m < 2 || static_cast<size_t>(m) * (m - 1) / 2 != length)
        fail(ErrorCode::DimensionMismatch, "length " + std::to_string(length) + " is not m(m-1)/2 for any m");
    return m;
}

std::vector<double> strict_upper(const Matrix& mat) {
    const int m = mat.rows();
    std::vector<double> values;
    values.reserve(static_cast<size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) values.push_back(mat(i, j));
    return values;
}

Matrix centered_from_strict_upper(const std::vector<double>& values, int size) {
    if (values.size() != static_cast<size_t>(size) * (size - 1) / 2)
        fail(ErrorCode::DimensionMismatch, "strict upper triangle length mismatch");
    Matrix mat(size, size);
    size_t k = 0;
    for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j, ++k) {
            mat(i, j) = values[k];
            mat(j, i) = values[k];
        }
    for (int i = 0; i < size; ++i) {
        double sum = 0.0;
        for (int j = 0; j < size; ++j)
            if (j != i) sum += mat(i, j);
        mat(i, i) = -sum;
    }
    return mat;
}

}  // namespace lapreg
