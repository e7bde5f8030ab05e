#include "flexkit/lyapunov.hpp"

#include <cmath>
#include <stdexcept>

namespace flexkit {

namespace {

void require_gamma(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("step size gamma must be positive");
}

}  // namespace

Point t1(ProblemInstance& inst, double gamma, const Point& z) {
    require_gamma(gamma);
    Point Fz = inst.eval_F(z);
    return inst.eval_prox(z - gamma * Fz, gamma);
}

Point t2(ProblemInstance& inst, double gamma, const Point& z, const Point* zbar) {
    require_gamma(gamma);
    Point zb = zbar ? *zbar : t1(inst, gamma, z);
    Point Fzb = inst.eval_F(zb);
    return inst.eval_prox(z - gamma * Fzb, gamma);
}

Point residual_R(ProblemInstance& inst, double gamma, const Point& z) {
    require_gamma(gamma);
    Point zb = t1(inst, gamma, z);
    return (1.0 / gamma) * (z - zb);
}

double lyapunov_V_with(double gamma, const Point& z, const Point& zbar,
                       const Point& zplus, const Point& F_z, const Point& F_zbar) {
    require_gamma(gamma);
    const double inv = 1.0 / gamma;
    const double ip = dot(z - zplus, F_z - F_zbar);
    return 2.0 * inv * ip + inv * inv * (norm_sq(zplus - zbar) + norm_sq(z - zplus));
}

double lyapunov_V(ProblemInstance& inst, double gamma, const Point& z,
                  const Point& zbar, const Point& zplus) {
    Point Fz = inst.eval_F(z);
    Point Fzb = inst.eval_F(zbar);
    return lyapunov_V_with(gamma, z, zbar, zplus, Fz, Fzb);
}

double alpha_coeff(double gamma, double lipschitz) {
    require_gamma(gamma);
    if (!(lipschitz > 0.0)) throw std::invalid_argument("alpha_coeff: L_F must be positive");
    const double x2 = gamma * gamma * lipschitz * lipschitz;
    return 0.5 * gamma * gamma * (std::sqrt(5.0 - 4.0 * x2) - 1.0);
}

Point xi_witness(double gamma, const Point& z, const Point& z_next, const Point& F_zbar) {
    require_gamma(gamma);
    return (1.0 / gamma) * (z - z_next) - F_zbar;
}

double natural_residual_with(const ProblemInstance& inst, const Point& z, const Point& F_z) {
    return norm(z - inst.probe_prox(z - F_z, 1.0));
}

double natural_residual(const ProblemInstance& inst, const Point& z) {
    return natural_residual_with(inst, z, inst.probe_F(z));
}

std::optional<double> tangent_residual_with(const ProblemInstance& inst, const Point& z,
                                            const Point& F_z) {
    if (is_zero_prox(inst.prox)) return norm(F_z);
    if (const auto* l1 = std::get_if<L1Prox>(&inst.prox)) {
        const double lambda = l1->lambda;
        double sum = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            double r;
            if (z[i] != 0.0) {
                r = std::abs(F_z[i] + lambda * (z[i] > 0.0 ? 1.0 : -1.0));
            } else {
                r = std::max(std::abs(F_z[i]) - lambda, 0.0);
            }
            sum += r * r;
        }
        return std::sqrt(sum);
    }
    return std::nullopt;
}

std::optional<double> tangent_residual(const ProblemInstance& inst, const Point& z) {
    return tangent_residual_with(inst, z, inst.probe_F(z));
}

MeasureRecord measures_for_step(const ProblemInstance& inst, double gamma,
                                const Point& z, const Point& zbar, const Point& zplus,
                                const Point& F_z, const Point& F_zbar, const Point* xi) {
    MeasureRecord m;
    m.V = lyapunov_V_with(gamma, z, zbar, zplus, F_z, F_zbar);
    m.norm_R = norm(z - zbar) / gamma;
    m.natural_residual = natural_residual_with(inst, z, F_z);
    m.tangent_residual = tangent_residual_with(inst, z, F_z);
    if (xi) m.tseng_residual = norm(F_z + *xi);
    return m;
}

}  // namespace flexkit
