#include "lapreg/projections.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "lapreg/errors.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/spectral.hpp"

namespace lapreg {

EmbeddingSpace EmbeddingSpace::with_gershgorin_cap(int size, double bound, double alpha) {
    const double d = 2.0 * (size - 1) * bound;
    return EmbeddingSpace{size, std::pow(d, alpha)};
}

namespace {

struct PairTable {
    std::vector<int> first;
    std::vector<int> second;
};

PairTable build_pairs(int m) {
    PairTable pairs;
    const size_t d = static_cast<size_t>(m) * (m - 1) / 2;
    pairs.first.reserve(d);
    pairs.second.reserve(d);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            pairs.first.push_back(i);
            pairs.second.push_back(j);
        }
    return pairs;
}

void node_sums(const std::vector<double>& v, const PairTable& pairs, int m, std::vector<double>& sums) {
    sums.assign(m, 0.0);
    for (size_t e = 0; e < v.size(); ++e) {
        sums[pairs.first[e]] += v[e];
        sums[pairs.second[e]] += v[e];
    }
}

// Gradient of f(v) = 2 sum_e (v_e - t_e)^2 + sum_i (S_i + c_i)^2 where
// S_i is the sum of v over pairs touching node i, t the off-diagonal
// targets and c the diagonal targets.
void gradient(const std::vector<double>& v, const std::vector<double>& off_target,
              const std::vector<double>& diag_target, const PairTable& pairs, int m,
              std::vector<double>& sums, std::vector<double>& grad) {
    node_sums(v, pairs, m, sums);
    grad.resize(v.size());
    for (size_t e = 0; e < v.size(); ++e) {
        grad[e] = 4.0 * (v[e] - off_target[e]) + 2.0 * (sums[pairs.first[e]] + diag_target[pairs.first[e]]) +
                  2.0 * (sums[pairs.second[e]] + diag_target[pairs.second[e]]);
    }
}

inline double clamp_box(double value, double bound) {
    if (value < -bound) return -bound;
    if (value > 0.0) return 0.0;
    return value;
}

}  // namespace

double laplacian_qp_lipschitz(int size) {
    static std::mutex guard;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto found = cache.find(size);
    if (found != cache.end()) return found->second;

    const PairTable pairs = build_pairs(size);
    const size_t d = pairs.first.size();
    double estimate;
    if (d == 0) {
        estimate = 1.0;
    } else {
        // Power iteration on H v = 8v + 2 * (S_i - v + S_j - v).
        Rng rng(0x9d7f2c55u ^ static_cast<uint64_t>(size));
        std::vector<double> v(d), hv(d), sums;
        for (double& value : v) value = rng.uniform() + 0.5;
        estimate = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            node_sums(v, pairs, size, sums);
            double norm = 0.0;
            for (size_t e = 0; e < d; ++e) {
                hv[e] = 4.0 * v[e] + 2.0 * (sums[pairs.first[e]] + sums[pairs.second[e]]);
                norm += hv[e] * hv[e];
            }
            norm = std::sqrt(norm);
            const double previous = estimate;
            estimate = norm;
            for (size_t e = 0; e < d; ++e) v[e] = hv[e] / norm;
            if (iter > 5 && std::fabs(estimate - previous) <= 1e-13 * estimate) break;
        }
        estimate *= 1.0 + 1e-6;  // pad so the FISTA step stays below 1/lambda_max
    }
    cache.emplace(size, estimate);
    return estimate;
}

LaplacianProjection project_laplacian(const Matrix& target, double bound, const QPSettings& settings,
                                      const GraphLaplacian* warm_start) {
    if (!target.square() || target.rows() == 0) fail(ErrorCode::DimensionMismatch, "projection target must be square");
    if (bound < 0.0) fail(ErrorCode::BadInput, "bound W must be nonnegative");
    if (settings.tolerance <= 0.0 || settings.max_iters < 1) fail(ErrorCode::BadConfig, "bad QP settings");

    const int m = target.rows();
    const Matrix sym = target.symmetrized();
    if (m == 1) {
        Matrix zero(1, 1);
        return LaplacianProjection{GraphLaplacian::unchecked(std::move(zero), bound), true, 0, 0.0};
    }

    const PairTable pairs = build_pairs(m);
    const size_t d = pairs.first.size();
    std::vector<double> off_target(d);
    for (size_t e = 0; e < d; ++e) off_target[e] = sym(pairs.first[e], pairs.second[e]);
    std::vector<double> diag_target(m);
    for (int i = 0; i < m; ++i) diag_target[i] = sym(i, i);

    const double lipschitz = laplacian_qp_lipschitz(m);
    const double step = 1.0 / lipschitz;

    std::vector<double> x(d);
    if (warm_start != nullptr && warm_start->size() == m) {
        const Matrix& warm = warm_start->entries();
        for (size_t e = 0; e < d; ++e) x[e] = clamp_box(warm(pairs.first[e], pairs.second[e]), bound);
    } else {
        for (size_t e = 0; e < d; ++e) x[e] = clamp_box(off_target[e], bound);
    }

    std::vector<double> y = x;
    std::vector<double> x_next(d), grad, sums;
    double momentum = 1.0;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;

    for (int iter = 0; iter < settings.max_iters; ++iter) {
        gradient(y, off_target, diag_target, pairs, m, sums, grad);
        for (size_t e = 0; e < d; ++e) x_next[e] = clamp_box(y[e] - step * grad[e], bound);

        gradient(x_next, off_target, diag_target, pairs, m, sums, grad);
        double r2 = 0.0;
        for (size_t e = 0; e < d; ++e) {
            const double moved = x_next[e] - clamp_box(x_next[e] - step * grad[e], bound);
            r2 += moved * moved;
        }
        residual = std::sqrt(r2);
        iterations = iter + 1;
        if (residual <= settings.tolerance) {
            x = x_next;
            converged = true;
            break;
        }

        double restart = 0.0;
        for (size_t e = 0; e < d; ++e) restart += (y[e] - x_next[e]) * (x_next[e] - x[e]);
        if (restart > 0.0) {
            momentum = 1.0;
            y = x_next;
        } else {
            const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            const double mix = (momentum - 1.0) / momentum_next;
            for (size_t e = 0; e < d; ++e) y[e] = x_next[e] + mix * (x_next[e] - x[e]);
            momentum = momentum_next;
        }
        x.swap(x_next);
    }

    return LaplacianProjection{vech_inv(HalfVector{std::move(x), m}, bound), converged, iterations, residual};
}

Matrix project_psd(const Matrix& sym) {
    SpectralDecomposition decomp = sym_eigen(sym);
    const int m = sym.rows();
    Matrix out(m, m);
    for (int k = 0; k < m; ++k) {
        const double lambda = decomp.eigenvalues[k];
        if (lambda <= 0.0) continue;
        for (int i = 0; i < m; ++i) {
            const double scaled = lambda * decomp.eigenvectors(i, k);
            for (int j = i; j < m; ++j) {
                out(i, j) += scaled * decomp.eigenvectors(j, k);
            }
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) out(j, i) = out(i, j);
    return out;
}

Matrix project_embedding(const Matrix& sym, const EmbeddingSpace& space) {
    if (space.cap < 0.0) fail(ErrorCode::BadConfig, "embedding cap must be nonnegative");
    if (sym.rows() != space.size) fail(ErrorCode::DimensionMismatch, "embedding space size mismatch");
    SpectralDecomposition decomp = sym_eigen(sym);
    const int m = sym.rows();
    Matrix out(m, m);
    for (int k = 0; k < m; ++k) {
        double lambda = decomp.eigenvalues[k];
        if (lambda > space.cap) lambda = space.cap;
        if (lambda <= 0.0) continue;
        for (int i = 0; i < m; ++i) {
            const double scaled = lambda * decomp.eigenvectors(i, k);
            for (int j = i; j < m; ++j) out(i, j) += scaled * decomp.eigenvectors(j, k);
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) out(j, i) = out(i, j);
    return out;
}

}  // namespace lapreg
