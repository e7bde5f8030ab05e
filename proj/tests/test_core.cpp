#include <doctest.h>

#include <cmath>

#include "flexkit/core.hpp"
#include "flexkit/rng.hpp"
#include "flexkit/spectral.hpp"

using namespace flexkit;

TEST_CASE("matvec identity and hand-checked products") {
    DenseMatrix I = DenseMatrix::identity(3);
    Point v{1.0, 2.0, 3.0};
    Point out = matvec(I, v);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 2.0);
    CHECK(out[2] == 3.0);

    DenseMatrix A(2, 2, {7.0, 6.0, 1.0, 0.0});
    Point w = matvec(A, Point{-1.0, -7.0});
    CHECK(w[0] == -49.0);
    CHECK(w[1] == -1.0);

    DenseMatrix Z(4, 3);
    Point z = matvec(Z, v);
    for (std::size_t i = 0; i < 4; ++i) CHECK(z[i] == 0.0);
}

TEST_CASE("matvec rejects dimension mismatch") {
    DenseMatrix A(2, 3);
    CHECK_THROWS_AS(matvec(A, Point{1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(dot(Point{1.0}, Point{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("points refuse non-finite entries") {
    CHECK_THROWS_AS(Point{std::nan("")}, std::invalid_argument);
    CHECK_THROWS_AS(Point{1.0 / 0.0}, std::invalid_argument);
}

TEST_CASE("spectral norm on the counterexample matrices") {
    DenseMatrix skew(2, 2, {0.0, 9.0, -9.0, 0.0});
    CHECK(spectral_norm_checked(skew) == doctest::Approx(9.0).epsilon(1e-9));

    DenseMatrix A(2, 2, {7.0, 6.0, 1.0, 0.0});
    DenseMatrix block = block2x2(DenseMatrix(2, 2), A, -1.0 * A.transpose(), DenseMatrix(2, 2));
    const double sigma = spectral_norm_checked(block);
    // Closed form from the characteristic polynomial of A^T A:
    // trace 86, det 36, sigma_max = sqrt((86 + sqrt(86^2 - 4*36)) / 2).
    const double expected = std::sqrt((86.0 + std::sqrt(86.0 * 86.0 - 144.0)) / 2.0);
    CHECK(sigma == doctest::Approx(expected).epsilon(1e-9));
    CHECK(sigma == doctest::Approx(9.25091).epsilon(1e-5));

    CHECK(spectral_norm_checked(DenseMatrix::identity(17)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spectral norm contract errors") {
    DenseMatrix Z(3, 3);
    CHECK_THROWS_AS(spectral_norm(Z), std::invalid_argument);

    DenseMatrix M(2, 2, {1.0, 2.0, 3.0, 4.0});
    SpectralResult r = spectral_norm(M, 1e-16, 1);  // cannot converge in one step
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(spectral_norm_checked(M, 1e-16, 1), std::runtime_error);
}

TEST_CASE("spectral norm dominates Rayleigh quotients of random vectors") {
    RngStream rng(42);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform(0, 8));
        DenseMatrix M(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) M(i, j) = rng.normal();
        const double sigma = spectral_norm_checked(M);
        for (int t = 0; t < 100; ++t) {
            Point v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();
            const double nv = norm(v);
            if (nv == 0.0) continue;
            CHECK(sigma >= norm(matvec(M, v)) / nv - 1e-8);
        }
        const double c = -2.5;
        CHECK(spectral_norm_checked(c * M) ==
              doctest::Approx(std::abs(c) * sigma).epsilon(1e-8));
    }
}

TEST_CASE("sparse matvec agrees exactly with its dense expansion") {
    RngStream rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 20;
        std::vector<std::size_t> offsets{0};
        std::vector<std::size_t> cols;
        std::vector<double> vals;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (rng.uniform01() < 0.3) {
                    cols.push_back(j);
                    vals.push_back(rng.normal());
                }
            }
            offsets.push_back(vals.size());
        }
        SparseMatrix S(n, n, offsets, cols, vals);
        DenseMatrix D = S.to_dense();
        Point v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal();
        Point a = matvec(S, v);
        Point b = matvec(D, v);
        Point at = matvec_transpose(S, v);
        Point bt = matvec_transpose(D, v);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(a[i] == b[i]);
            CHECK(at[i] == bt[i]);
        }
    }
}

TEST_CASE("sparse matrix validates CSR invariants") {
    CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 2}, {1, 1}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 2}, {2, 1}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(SparseMatrix(1, 3, {0, 1}, {1, 2}, {1.0, 2.0}), std::invalid_argument);
    SparseMatrix ok(2, 3, {0, 2, 3}, {0, 2, 1}, {1.0, 2.0, 3.0});
    CHECK(ok.nnz() == 3);
}

TEST_CASE("symmetric eigenvalue extremes and smallest singular value") {
    DenseMatrix S(3, 3, {4.0, 1.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0, -2.0});
    EigenExtremes ext = symmetric_extreme_eigs(S);
    CHECK(ext.converged);
    // 2x2 block eigenvalues (7 +- sqrt(5))/2, plus the isolated -2.
    CHECK(ext.lambda_max == doctest::Approx((7.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-8));
    CHECK(ext.lambda_min == doctest::Approx(-2.0).epsilon(1e-8));

    DenseMatrix D(2, 2, {3.0, 0.0, 0.0, 0.5});
    CHECK(smallest_singular_value(D) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("dense solver round trip and singular detection") {
    DenseMatrix A(3, 3, {2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0});
    Point x{1.0, -2.0, 0.5};
    Point b = matvec(A, x);
    Point got = solve_dense(A, b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(x[i]).epsilon(1e-12));

    DenseMatrix sing(2, 2, {1.0, 2.0, 2.0, 4.0});
    CHECK_THROWS_AS(solve_dense(sing, Point{1.0, 1.0}), std::runtime_error);
}
