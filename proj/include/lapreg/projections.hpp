#pragma once

#include <vector>

#include "lapreg/graph.hpp"
#include "lapreg/matrix.hpp"

namespace lapreg {

/// Stopping control for the Laplacian projection solver. `tolerance`
/// bounds the Euclidean norm of the step-scaled projected-gradient map.
struct QPSettings {
    double tolerance = 1e-10;
    int max_iters = 50000;
};

/// PSD matrices with largest eigenvalue capped; the target of the
/// embedding projection used by the power-metric pipeline.
struct EmbeddingSpace {
    int size = 0;
    double cap = 0.0;  // D^alpha

    /// Gershgorin default: eigenvalues of an m-node Laplacian with edge
    /// bound W stay below D = 2(m-1)W.
    static EmbeddingSpace with_gershgorin_cap(int size, double bound, double alpha);
};

struct LaplacianProjection {
    GraphLaplacian laplacian;
    bool converged = true;
    int iterations = 0;
    double residual = 0.0;
};

/// Nearest graph Laplacian to B in Frobenius distance: the box-constrained
/// QP over the strict upper triangle, with the symmetry and zero-row-sum
/// constraints eliminated by the vech parameterization. Solved by FISTA
/// with constant step 1/lambda_max(H). On a feasible input the start
/// iterate already has zero residual, so the projection is exactly
/// idempotent. When the iteration cap is hit the best iterate is returned
/// with `converged == false`.
LaplacianProjection project_laplacian(const Matrix& target, double bound, const QPSettings& settings = {},
                                      const GraphLaplacian* warm_start = nullptr);

/// Nearest PSD matrix: negative eigenvalues truncated at zero.
Matrix project_psd(const Matrix& sym);

/// Projection onto the embedding space: eigenvalues clamped into
/// [0, cap] in one spectral pass, eigenvectors untouched.
Matrix project_embedding(const Matrix& sym, const EmbeddingSpace& space);

/// Largest Hessian eigenvalue of the reduced projection QP for node count
/// m (power iteration, cached per m). Equals 4m analytically; the cached
/// value carries a small safety pad.
double laplacian_qp_lipschitz(int size);

}  // namespace lapreg
