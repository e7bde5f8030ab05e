#pragma once

#include <optional>

#include "flexkit/problem.hpp"

namespace flexkit {

// Algorithmic operators of the extragradient scheme. Each evaluation counts
// one F and one prox evaluation on the instance.
Point t1(ProblemInstance& inst, double gamma, const Point& z);
Point t2(ProblemInstance& inst, double gamma, const Point& z,
         const Point* zbar = nullptr);

// Residual R_gamma(z) = (z - T1(z)) / gamma; its zeros are the solutions.
Point residual_R(ProblemInstance& inst, double gamma, const Point& z);

// Lyapunov merit on a triple (z, zbar, zplus):
//   V = 2/gamma <z - z+, F(z) - F(zbar)> + ||z+ - zbar||^2/gamma^2
//       + ||z - z+||^2/gamma^2.
// The _with variant takes the two F values the caller already holds.
double lyapunov_V(ProblemInstance& inst, double gamma, const Point& z,
                  const Point& zbar, const Point& zplus);
double lyapunov_V_with(double gamma, const Point& z, const Point& zbar,
                       const Point& zplus, const Point& F_z, const Point& F_zbar);

// alpha(gamma, L_F) = gamma^2/2 (sqrt(5 - 4 gamma^2 L_F^2) - 1), the residual
// weight of the Fejer inequality; zero exactly at gamma L_F = 1.
double alpha_coeff(double gamma, double lipschitz);

// Subgradient witness of the second extragradient prox step:
//   xi = (z - z_next)/gamma - F(zbar)  is in  dg(z_next).
Point xi_witness(double gamma, const Point& z, const Point& z_next,
                 const Point& F_zbar);

// || z - prox_g(z - F(z)) || with unit prox step. Measurement only: uses the
// probe evaluation path and does not touch the instance counters.
double natural_residual(const ProblemInstance& inst, const Point& z);
double natural_residual_with(const ProblemInstance& inst, const Point& z,
                             const Point& F_z);

// inf_{xi in dg(z)} ||F(z) + xi||, available in closed form for g = 0 and the
// weighted l1 norm; absent for the other prox variants.
std::optional<double> tangent_residual(const ProblemInstance& inst, const Point& z);
std::optional<double> tangent_residual_with(const ProblemInstance& inst, const Point& z,
                                            const Point& F_z);

struct MeasureRecord {
    double V = 0.0;
    double norm_R = 0.0;
    double natural_residual = 0.0;
    std::optional<double> tangent_residual;
    std::optional<double> tseng_residual;  // ||F(z) + xi|| when xi is known
};

// Collects every optimality measure for one extragradient step
// (z, zbar, zplus) with the step's cached F values; xi, when supplied, is the
// subgradient witness carried over from the previous step.
MeasureRecord measures_for_step(const ProblemInstance& inst, double gamma,
                                const Point& z, const Point& zbar, const Point& zplus,
                                const Point& F_z, const Point& F_zbar,
                                const Point* xi = nullptr);

}  // namespace flexkit
