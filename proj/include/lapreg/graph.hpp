#pragma once

#include <vector>

#include "lapreg/matrix.hpp"

namespace lapreg {

/// Validation tolerances for graph Laplacians: symmetry is absolute,
/// row sums scale with m*W so accumulated arithmetic noise from weighted
/// averaging does not reject honest data.
inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kOffDiagonalTol = 1e-12;
inline constexpr double kRowSumTolFactor = 1e-10;

/// Graph Laplacian of a simple weighted undirected labeled graph on m
/// nodes: symmetric, zero row sums, off-diagonal entries in [-W, 0].
/// Immutable after construction.
class GraphLaplacian {
  public:
    /// Validates a raw square matrix against the Laplacian constraints and
    /// symmetrizes sub-tolerance asymmetry. Throws NotSymmetric,
    /// OffDiagonalOutOfBox or RowSumNonZero naming the first violating
    /// index.
    static GraphLaplacian validated(const Matrix& raw, double bound);

    /// Wraps a matrix that is feasible by construction (projection and
    /// vech outputs). No checks beyond shape.
    static GraphLaplacian unchecked(Matrix entries, double bound);

    const Matrix& entries() const { return entries_; }
    int size() const { return entries_.rows(); }
    double bound() const { return bound_; }

  private:
    GraphLaplacian(Matrix entries, double bound) : entries_(std::move(entries)), bound_(bound) {}

    Matrix entries_;
    double bound_;
};

/// Symmetric nonnegative edge weights, zero diagonal, entries in [0, W].
class AdjacencyMatrix {
  public:
    static AdjacencyMatrix validated(const Matrix& raw, double bound);
    static AdjacencyMatrix unchecked(Matrix weights, double bound);

    const Matrix& weights() const { return weights_; }
    int size() const { return weights_.rows(); }
    double bound() const { return bound_; }

  private:
    AdjacencyMatrix(Matrix weights, double bound) : weights_(std::move(weights)), bound_(bound) {}

    Matrix weights_;
    double bound_;
};

/// Strict upper triangle of a centered symmetric matrix in row-major
/// order: (0,1), (0,2), ..., (0,m-1), (1,2), ... Length m(m-1)/2.
struct HalfVector {
    std::vector<double> values;
    int size = 0;  // node count m
};

GraphLaplacian laplacian_from_adjacency(const AdjacencyMatrix& adjacency);
AdjacencyMatrix adjacency_from_laplacian(const GraphLaplacian& laplacian);

HalfVector vech(const GraphLaplacian& laplacian);

/// Rebuilds the Laplacian whose strict upper triangle is `half` (diagonal
/// completed so each row sums to zero). Entries must lie in [-W, 0].
GraphLaplacian vech_inv(const HalfVector& half, double bound);

/// Node count for a half-vector of the given length; throws if the length
/// is not of the form m(m-1)/2.
int node_count_for_half_vector(size_t length);

/// vech/vech_inv on plain matrices, for centered symmetric matrices that
/// are not box-constrained Laplacians (embedding-space intermediates).
std::vector<double> strict_upper(const Matrix& mat);
Matrix centered_from_strict_upper(const std::vector<double>& values, int size);

}  // namespace lapreg
