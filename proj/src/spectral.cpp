#include "flexkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace flexkit {

namespace {

Point normalized_ones(std::size_t n) {
    return Point(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) strictly
// below x, from the Sturm sequence of shifted leading minors.
std::size_t sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta,
                        double x) {
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double b2 = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1];
        d = alpha[i] - x - (d == 0.0 ? b2 / 1e-300 : b2 / d);
        if (d < 0.0) ++count;
    }
    return count;
}

double tridiag_extreme(const std::vector<double>& alpha, const std::vector<double>& beta,
                       bool largest) {
    // Gershgorin enclosure, then bisection on the Sturm count.
    double lo = alpha[0], hi = alpha[0];
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                         (i + 1 < alpha.size() ? std::abs(beta[i]) : 0.0);
        lo = std::min(lo, alpha[i] - r);
        hi = std::max(hi, alpha[i] + r);
    }
    const std::size_t n = alpha.size();
    const double span = std::max(hi - lo, 1e-300);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * span; ++it) {
        const double mid = 0.5 * (lo + hi);
        const std::size_t below = sturm_count(alpha, beta, mid);
        if (largest ? below < n : below == 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct LanczosResult {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Lanczos with full reorthogonalization, started from the normalized all-ones
// vector so results are bit-for-bit reproducible. Runs to the full dimension
// (capped) unless both extreme Ritz values stabilize first; handles clustered
// or exactly repeated extreme eigenvalues, where plain power iteration stalls.
LanczosResult lanczos_extremes(const std::function<Point(const Point&)>& apply,
                               std::size_t n, double tol, std::size_t max_iter) {
    LanczosResult out;
    const std::size_t cap = std::min({n, max_iter, static_cast<std::size_t>(500)});
    std::vector<Point> basis;
    std::vector<double> alpha, beta;
    Point v = normalized_ones(n);
    basis.push_back(v);
    double prev_min = 0.0, prev_max = 0.0;

    for (std::size_t j = 0; j < cap; ++j) {
        Point w = apply(basis[j]);
        const double a = dot(w, basis[j]);
        alpha.push_back(a);
        w -= a * basis[j];
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        for (int pass = 0; pass < 2; ++pass) {
            for (const Point& q : basis) w -= dot(w, q) * q;
        }
        const double b = norm(w);
        out.iterations = j + 1;

        const double cur_min = tridiag_extreme(alpha, beta, false);
        const double cur_max = tridiag_extreme(alpha, beta, true);
        const double scale = std::max({1.0, std::abs(cur_min), std::abs(cur_max)});
        if (b <= 1e-14 * scale || j + 1 == n) {
            // Exact invariant subspace for the all-ones starting vector.
            out.lambda_min = cur_min;
            out.lambda_max = cur_max;
            out.converged = true;
            return out;
        }
        if (j >= 2 && std::abs(cur_min - prev_min) <= tol * scale &&
            std::abs(cur_max - prev_max) <= tol * scale) {
            out.lambda_min = cur_min;
            out.lambda_max = cur_max;
            out.converged = true;
            return out;
        }
        prev_min = cur_min;
        prev_max = cur_max;
        beta.push_back(b);
        basis.push_back((1.0 / b) * w);
    }
    if (!alpha.empty()) {
        out.lambda_min = tridiag_extreme(alpha, beta, false);
        out.lambda_max = tridiag_extreme(alpha, beta, true);
        out.converged = out.iterations == cap && cap == n;
    }
    return out;
}

template <typename Matrix>
SpectralResult spectral_norm_impl(const Matrix& M, double tol, std::size_t max_iter) {
    if (M.max_abs() == 0.0) {
        throw std::invalid_argument("spectral_norm: matrix must be nonzero");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("spectral_norm: tol must be positive");
    auto apply = [&M](const Point& v) { return matvec_transpose(M, matvec(M, v)); };
    LanczosResult lr = lanczos_extremes(apply, M.cols(), tol, max_iter);
    SpectralResult out;
    out.value = std::sqrt(std::max(0.0, lr.lambda_max));
    out.iterations = lr.iterations;
    out.converged = lr.converged;
    return out;
}

template <typename Matrix>
double spectral_norm_checked_impl(const Matrix& M, double tol, std::size_t max_iter) {
    SpectralResult r = spectral_norm_impl(M, tol, max_iter);
    if (!r.converged) {
        throw std::runtime_error("spectral_norm: eigenvalue iteration did not converge");
    }
    return r.value;
}

}  // namespace

SpectralResult dominant_symmetric_eig(const std::function<Point(const Point&)>& apply,
                                      std::size_t n, double tol, std::size_t max_iter) {
    LanczosResult lr = lanczos_extremes(apply, n, tol, max_iter);
    SpectralResult out;
    out.value = std::abs(lr.lambda_max) >= std::abs(lr.lambda_min) ? lr.lambda_max
                                                                   : lr.lambda_min;
    out.iterations = lr.iterations;
    out.converged = lr.converged;
    return out;
}

SpectralResult spectral_norm(const DenseMatrix& M, double tol, std::size_t max_iter) {
    return spectral_norm_impl(M, tol, max_iter);
}

SpectralResult spectral_norm(const SparseMatrix& M, double tol, std::size_t max_iter) {
    return spectral_norm_impl(M, tol, max_iter);
}

double spectral_norm_checked(const DenseMatrix& M, double tol, std::size_t max_iter) {
    return spectral_norm_checked_impl(M, tol, max_iter);
}

double spectral_norm_checked(const SparseMatrix& M, double tol, std::size_t max_iter) {
    return spectral_norm_checked_impl(M, tol, max_iter);
}

EigenExtremes symmetric_extreme_eigs(const DenseMatrix& S, double tol, std::size_t max_iter) {
    if (S.rows() != S.cols()) {
        throw std::invalid_argument("symmetric_extreme_eigs: matrix not square");
    }
    EigenExtremes out;
    if (S.max_abs() == 0.0) {
        out.converged = true;
        return out;
    }
    auto apply = [&S](const Point& v) { return matvec(S, v); };
    LanczosResult lr = lanczos_extremes(apply, S.rows(), tol, max_iter);
    out.lambda_min = lr.lambda_min;
    out.lambda_max = lr.lambda_max;
    out.converged = lr.converged;
    return out;
}

double smallest_singular_value(const DenseMatrix& M, double tol, std::size_t max_iter) {
    if (M.max_abs() == 0.0) return 0.0;
    auto apply = [&M](const Point& v) { return matvec_transpose(M, matvec(M, v)); };
    LanczosResult lr = lanczos_extremes(apply, M.cols(), tol, max_iter);
    return std::sqrt(std::max(0.0, lr.lambda_min));
}

}  // namespace flexkit
