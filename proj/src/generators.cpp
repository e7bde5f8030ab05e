#include "flexkit/generators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "flexkit/rng.hpp"
#include "flexkit/spectral.hpp"

namespace flexkit {

namespace {

// Symmetrized Gaussian shifted to be positive definite:
// S <- (S + S^T)/2, then S <- S + (|lambda_min(S)| + 1) I.
DenseMatrix shifted_gaussian(std::size_t n, RngStream& rng) {
    const double sd = 1.0 / std::sqrt(static_cast<double>(n));
    DenseMatrix S(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) S(i, j) = sd * rng.normal();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (S(i, j) + S(j, i));
            S(i, j) = avg;
            S(j, i) = avg;
        }
    EigenExtremes ext = symmetric_extreme_eigs(S);
    if (!ext.converged) throw std::runtime_error("shifted_gaussian: eigenvalue iteration stalled");
    const double shift = std::abs(ext.lambda_min) + 1.0;
    for (std::size_t i = 0; i < n; ++i) S(i, i) += shift;
    return S;
}

DenseMatrix gaussian_matrix(std::size_t n, double sd, RngStream& rng) {
    DenseMatrix C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) C(i, j) = sd * rng.normal();
    return C;
}

}  // namespace

ProblemInstance gen_quadratic_minimax(std::size_t n, double omega, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_quadratic_minimax: n must be >= 1");
    if (!(omega >= 0.0)) throw std::invalid_argument("gen_quadratic_minimax: omega must be >= 0");

    RngStream sol_rng = make_substream(seed, 0);
    Point xstar(n), ystar(n);
    for (std::size_t i = 0; i < n; ++i) xstar[i] = sol_rng.normal();
    for (std::size_t i = 0; i < n; ++i) ystar[i] = sol_rng.normal();

    RngStream rng_a = make_substream(seed, 1);
    RngStream rng_b = make_substream(seed, 2);
    RngStream rng_c = make_substream(seed, 3);
    DenseMatrix A = omega * shifted_gaussian(n, rng_a);
    DenseMatrix B = omega * shifted_gaussian(n, rng_b);
    DenseMatrix C = gaussian_matrix(n, 1.0 / std::sqrt(static_cast<double>(n)), rng_c);

    DenseMatrix M = block2x2(A, C, -1.0 * C.transpose(), B);

    auto data = std::make_shared<std::pair<DenseMatrix, Point>>(M, Point(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        data->second[i] = xstar[i];
        data->second[n + i] = ystar[i];
    }

    ProblemInstance inst;
    inst.dimension = 2 * n;
    inst.F = [data](const Point& z) {
        return matvec(data->first, z - data->second);
    };
    inst.prox = ZeroProx{};
    inst.lipschitz = spectral_norm_checked(M);
    inst.known_solution = data->second;
    inst.jacobian = [data](const Point&) { return data->first; };
    if (omega > 0.0) {
        EigenExtremes ea = symmetric_extreme_eigs(A);
        EigenExtremes eb = symmetric_extreme_eigs(B);
        inst.strong_monotonicity = std::min(ea.lambda_min, eb.lambda_min);
        inst.lower_lipschitz = smallest_singular_value(M);
    }
    return inst;
}

ProblemInstance gen_bilinear_game(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_bilinear_game: n must be >= 1");

    RngStream rng = make_substream(seed, 0);
    DenseMatrix S = gaussian_matrix(n, 1.0, rng);
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = S(i, j) - S(j, i);

    DenseMatrix K = block2x2(DenseMatrix(n, n), A, -1.0 * A.transpose(), DenseMatrix(n, n));
    auto data = std::make_shared<DenseMatrix>(A);

    ProblemInstance inst;
    inst.dimension = 2 * n;
    inst.F = [data, n](const Point& z) {
        Point x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = z[i];
            y[i] = z[n + i];
        }
        Point Ay = matvec(*data, y);
        Point ATx = matvec_transpose(*data, x);
        Point out(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = Ay[i];
            out[n + i] = -ATx[i];
        }
        return out;
    };
    inst.prox = SimplexProductProx{{n, n}};
    // n = 1 degenerates to the zero payoff; any positive constant is a valid
    // Lipschitz bound for F = 0.
    inst.lipschitz = K.max_abs() == 0.0 ? 1.0 : spectral_norm_checked(K);
    auto kmat = std::make_shared<DenseMatrix>(K);
    inst.jacobian = [kmat](const Point&) { return *kmat; };
    return inst;
}

CournotParams sample_cournot_params(std::size_t n, std::uint64_t seed) {
    RngStream rng = make_substream(seed, 0);
    CournotParams p;
    p.T.resize(n);
    p.a.resize(n);
    p.b.resize(n);
    p.m.resize(n);
    p.d.resize(n);
    for (std::size_t attempt = 0; attempt < 10000; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) p.m[i] = rng.uniform(150.0, 250.0);
        for (std::size_t i = 0; i < n; ++i) p.b[i] = rng.uniform(30.0, 50.0);
        for (std::size_t i = 0; i < n; ++i) p.T[i] = rng.uniform(3.0, 7.0);
        for (std::size_t i = 0; i < n; ++i) p.d[i] = rng.uniform(5.0, 20.0);
        std::sort(p.d.begin(), p.d.end());
        for (std::size_t i = 0; i < n; ++i) p.a[i] = p.d[i] / rng.uniform(-10.0, -5.0);
        std::sort(p.a.begin(), p.a.end(), std::greater<double>());
        bool valid = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (p.b[i] < -2.0 * p.a[i] * p.T[i] || p.m[i] <= p.b[i] || p.d[i] <= -p.a[i]) {
                valid = false;
                break;
            }
        }
        if (valid) {
            p.attempts = attempt + 1;
            return p;
        }
    }
    throw std::runtime_error("sample_cournot_params: rejection loop exceeded 10000 attempts");
}

ProblemInstance gen_cournot_nash(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_cournot_nash: n must be >= 1");
    CournotParams p = sample_cournot_params(n, seed);

    DenseMatrix A(n, n);
    Point shift(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A(i, j) = p.d[i];
        A(i, i) = 2.0 * (p.a[i] + p.d[i]);
        shift[i] = p.b[i] - p.m[i];
    }
    auto data = std::make_shared<std::pair<DenseMatrix, Point>>(A, shift);

    ProblemInstance inst;
    inst.dimension = n;
    inst.F = [data](const Point& z) { return matvec(data->first, z) + data->second; };
    inst.prox = BoxProx{std::vector<double>(n, 0.0), p.T};
    inst.lipschitz = spectral_norm_checked(A);
    inst.jacobian = [data](const Point&) { return data->first; };
    return inst;
}

}  // namespace flexkit
