#include "lapreg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lapreg/errors.hpp"

namespace lapreg {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalStop = 1e-12;
constexpr double kSymmetryRelTol = 1e-10;

double off_diagonal_norm(const Matrix& mat) {
    double sum = 0.0;
    for (int i = 0; i < mat.rows(); ++i)
        for (int j = 0; j < mat.cols(); ++j)
            if (i != j) sum += mat(i, j) * mat(i, j);
    return std::sqrt(sum);
}

void canonicalize(SpectralDecomposition& decomp) {
    const int m = static_cast<int>(decomp.eigenvalues.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return decomp.eigenvalues[a] > decomp.eigenvalues[b]; });

    std::vector<double> sorted_values(m);
    Matrix sorted_vectors(m, m);
    for (int k = 0; k < m; ++k) {
        const int src = order[k];
        sorted_values[k] = decomp.eigenvalues[src];
        int peak = 0;
        double peak_abs = -1.0;
        for (int i = 0; i < m; ++i) {
            const double mag = std::fabs(decomp.eigenvectors(i, src));
            if (mag > peak_abs) {
                peak_abs = mag;
                peak = i;
            }
        }
        const double sign = decomp.eigenvectors(peak, src) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < m; ++i) sorted_vectors(i, k) = sign * decomp.eigenvectors(i, src);
    }
    decomp.eigenvalues = std::move(sorted_values);
    decomp.eigenvectors = std::move(sorted_vectors);
}

}  // namespace

SpectralDecomposition sym_eigen(const Matrix& sym) {
    if (!sym.square() || sym.rows() == 0) fail(ErrorCode::DimensionMismatch, "sym_eigen needs a square matrix");
    const double norm = frobenius_norm(sym);
    const double asym = frobenius_norm(sym - sym.transposed());
    if (asym > kSymmetryRelTol * norm)
        fail(ErrorCode::NotSymmetric, "relative asymmetry " + std::to_string(norm > 0 ? asym / norm : asym));

    const int m = sym.rows();
    Matrix a = sym.symmetrized();
    Matrix vectors = Matrix::identity(m);
    const double stop = kOffDiagonalStop * norm;

    int sweep = 0;
    while (off_diagonal_norm(a) > stop) {
        if (++sweep > kMaxSweeps) fail(ErrorCode::NoConvergence, "jacobi sweep cap reached");
        for (int p = 0; p < m - 1; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
                double t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < m; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = aip - s * (aiq + tau * aip);
                    a(p, i) = a(i, p);
                    a(i, q) = aiq + s * (aip - tau * aiq);
                    a(q, i) = a(i, q);
                }
                for (int i = 0; i < m; ++i) {
                    const double vip = vectors(i, p);
                    const double viq = vectors(i, q);
                    vectors(i, p) = vip - s * (viq + tau * vip);
                    vectors(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
    }

    SpectralDecomposition decomp;
    decomp.eigenvalues.resize(m);
    for (int i = 0; i < m; ++i) decomp.eigenvalues[i] = a(i, i);
    decomp.eigenvectors = std::move(vectors);
    canonicalize(decomp);
    return decomp;
}

Matrix matrix_power(const Matrix& psd, double alpha) {
    if (alpha <= 0.0) fail(ErrorCode::BadInput, "power exponent must be positive");
    SpectralDecomposition decomp = sym_eigen(psd);
    const int m = psd.rows();
    std::vector<double> powered(m);
    for (int k = 0; k < m; ++k) {
        double lambda = decomp.eigenvalues[k];
        if (lambda < -kEigenvalueClampTol)
            fail(ErrorCode::NegativeEigenvalue, "eigenvalue " + std::to_string(lambda) + " below -1e-9");
        if (lambda < 0.0) lambda = 0.0;
        powered[k] = std::pow(lambda, alpha);
    }
    Matrix out(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double sum = 0.0;
            for (int k = 0; k < m; ++k) sum += powered[k] * decomp.eigenvectors(i, k) * decomp.eigenvectors(j, k);
            out(i, j) = sum;
            out(j, i) = sum;
        }
    return out;
}

}  // namespace lapreg
