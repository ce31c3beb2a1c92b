#include <doctest.h>

#include <cmath>

#include "lapreg/errors.hpp"
#include "lapreg/rng.hpp"
#include "lapreg/spectral.hpp"
#include "test_support.hpp"

using namespace lapreg;
using namespace lapreg::testing;

TEST_SUITE("spectral") {

TEST_CASE("diagonal input sorts eigenvalues descending") {
    const auto decomp = sym_eigen(make_matrix({{4, 0}, {0, 9}}));
    CHECK(decomp.eigenvalues[0] == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(decomp.eigenvalues[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("analytic 2x2 eigenpairs with the sign convention") {
    const auto decomp = sym_eigen(make_matrix({{0, 1}, {1, 0}}));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(decomp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(decomp.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(decomp.eigenvectors(0, 0) == doctest::Approx(inv_sqrt2));
    CHECK(decomp.eigenvectors(1, 0) == doctest::Approx(inv_sqrt2));
    CHECK(decomp.eigenvectors(0, 1) == doctest::Approx(inv_sqrt2));
    CHECK(decomp.eigenvectors(1, 1) == doctest::Approx(-inv_sqrt2));
}

TEST_CASE("reconstruction and orthogonality on random symmetric matrices") {
    Rng rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix sym = random_symmetric(rng, 10, 3.0);
        const auto decomp = sym_eigen(sym);

        Matrix recon(10, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                double sum = 0.0;
                for (int k = 0; k < 10; ++k)
                    sum += decomp.eigenvalues[k] * decomp.eigenvectors(i, k) * decomp.eigenvectors(j, k);
                recon(i, j) = sum;
            }
        CHECK(frobenius_norm(recon - sym) <= 1e-9 * (1.0 + frobenius_norm(sym)));

        const Matrix gram = matmul(decomp.eigenvectors.transposed(), decomp.eigenvectors);
        CHECK(frobenius_norm(gram - Matrix::identity(10)) <= 1e-10);
        for (int k = 1; k < 10; ++k) CHECK(decomp.eigenvalues[k - 1] >= decomp.eigenvalues[k]);
    }
}

TEST_CASE("bit-identical output for identical input") {
    Rng rng(31);
    const Matrix sym = random_symmetric(rng, 7, 2.0);
    const auto first = sym_eigen(sym);
    const auto second = sym_eigen(sym);
    CHECK(first.eigenvalues == second.eigenvalues);
    CHECK(first.eigenvectors == second.eigenvectors);
}

TEST_CASE("rejects asymmetric input") {
    CHECK_THROWS_AS((void)sym_eigen(make_matrix({{1, 2}, {0, 1}})), Error);
}

TEST_CASE("matrix power on diagonal and analytic inputs") {
    CHECK(max_abs_diff(matrix_power(make_matrix({{4, 0}, {0, 9}}), 0.5), make_matrix({{2, 0}, {0, 3}})) <= 1e-12);

    Rng rng(37);
    const Matrix psd = random_psd(rng, 6, 5.0);
    CHECK(frobenius_norm(matrix_power(psd, 1.0) - psd) <= 1e-12);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Matrix root = matrix_power(make_matrix({{1, -1}, {-1, 1}}), 0.5);
    CHECK(max_abs_diff(root, inv_sqrt2 * make_matrix({{1, -1}, {-1, 1}})) <= 1e-12);
}

TEST_CASE("power maps invert each other") {
    Rng rng(41);
    for (double alpha : {0.5, 2.0}) {
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix psd = random_psd(rng, 8, 10.0);
            const Matrix round_trip = matrix_power(matrix_power(psd, alpha), 1.0 / alpha);
            CHECK(frobenius_norm(round_trip - psd) <= 1e-8);
        }
    }
}

TEST_CASE("power map is Holder continuous below one and Lipschitz above") {
    Rng rng(43);
    const int m = 8;
    for (double alpha : {0.25, 0.5}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Matrix a = random_psd(rng, m, 10.0);
            const Matrix b = random_psd(rng, m, 10.0);
            const double lhs = frobenius_norm(matrix_power(a, alpha) - matrix_power(b, alpha));
            const double rhs = std::pow(m, (1.0 - alpha) / 2.0) * std::pow(frobenius_norm(a - b), alpha);
            CHECK(lhs <= rhs * (1.0 + 1e-9));
        }
    }
    const double cap = 10.0;
    for (double alpha : {2.0, 3.0}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Matrix a = random_psd(rng, m, cap);
            const Matrix b = random_psd(rng, m, cap);
            const double lhs = frobenius_norm(matrix_power(a, alpha) - matrix_power(b, alpha));
            const double rhs = alpha * std::pow(cap, alpha - 1.0) * frobenius_norm(a - b);
            CHECK(lhs <= rhs * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("clamps tiny negative eigenvalues and rejects real ones") {
    Matrix nearly_psd = make_matrix({{1, 0}, {0, -0.5e-9}});
    const Matrix powered = matrix_power(nearly_psd, 0.5);
    CHECK(powered(1, 1) == 0.0);

    CHECK_THROWS_AS((void)matrix_power(make_matrix({{1, 0}, {0, -1}}), 0.5), Error);
    try {
        (void)matrix_power(make_matrix({{1, 0}, {0, -1}}), 0.5);
    } catch (const Error& error) {
        CHECK(error.code() == ErrorCode::NegativeEigenvalue);
    }
}

}  // TEST_SUITE
