#pragma once

#include <cstddef>
#include <functional>

#include "flexkit/core.hpp"

namespace flexkit {

struct SpectralResult {
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Largest singular value via power iteration on M^T M, started from the
// normalized all-ones vector so that repeated runs are bit-for-bit identical.
SpectralResult spectral_norm(const DenseMatrix& M, double tol = 1e-10,
                             std::size_t max_iter = 10000);
SpectralResult spectral_norm(const SparseMatrix& M, double tol = 1e-10,
                             std::size_t max_iter = 10000);

// Same, but throws std::runtime_error when the iteration does not converge.
double spectral_norm_checked(const DenseMatrix& M, double tol = 1e-10,
                             std::size_t max_iter = 10000);
double spectral_norm_checked(const SparseMatrix& M, double tol = 1e-10,
                             std::size_t max_iter = 10000);

struct EigenExtremes {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    bool converged = false;
};

// Extreme eigenvalues of a symmetric matrix by shifted power iterations.
EigenExtremes symmetric_extreme_eigs(const DenseMatrix& S, double tol = 1e-10,
                                     std::size_t max_iter = 10000);

// Smallest singular value of M via shifted power iteration on M^T M.
double smallest_singular_value(const DenseMatrix& M, double tol = 1e-10,
                               std::size_t max_iter = 10000);

// Dominant eigenvalue (largest magnitude, signed) of a symmetric operator
// given as a matvec callback. Building block for the routines above.
SpectralResult dominant_symmetric_eig(const std::function<Point(const Point&)>& apply,
                                      std::size_t n, double tol, std::size_t max_iter);

}  // namespace flexkit
