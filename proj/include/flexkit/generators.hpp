#pragma once

#include <cstdint>

#include "flexkit/problem.hpp"

namespace flexkit {

// Quadratic convex-concave minimax instance on R^{2n}:
//   F(x, y) = (A(x - x*) + C(y - y*),  B(y - y*) - C^T(x - x*)),  g = 0,
// with A = omega * S_A, B = omega * S_B for symmetrized, shifted Gaussian
// matrices and C a fresh Gaussian matrix. The known solution is (x*, y*).
ProblemInstance gen_quadratic_minimax(std::size_t n, double omega, std::uint64_t seed);

// Bilinear zero-sum game on two probability simplices:
//   F(x, y) = (A y, -A^T x) with skew-symmetric A = S - S^T.
ProblemInstance gen_bilinear_game(std::size_t n, std::uint64_t seed);

// Cournot-Nash oligopoly equilibrium with box constraints [0, T_i]:
//   F(z) = A z + (b - m), off-diagonal row i equal to d_i, diagonal
//   2(a_i + d_i). Parameters are rejection-sampled until the market model is
//   valid; more than 10000 rejected draws raises std::runtime_error.
ProblemInstance gen_cournot_nash(std::size_t n, std::uint64_t seed);

// Raw Cournot parameters, exposed for inspection and the datagen CLI command.
struct CournotParams {
    std::vector<double> T, a, b, m, d;
    std::size_t attempts = 0;
};
CournotParams sample_cournot_params(std::size_t n, std::uint64_t seed);

}  // namespace flexkit
