#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flexkit/directions.hpp"
#include "flexkit/problem.hpp"

namespace flexkit {

enum class Method { eg, tseng, flex, iflex, proxflex };
enum class Branch { full_step, line_search, nominal };
enum class StopReason { tolerance, max_iterations, budget, failure };

std::string to_string(Method m);
std::string to_string(Branch b);
std::string to_string(StopReason r);
std::optional<Method> method_from_string(const std::string& name);

struct SolverConfig {
    // gamma = gamma_fraction / L_F; the fraction must lie in (0, 1) so that
    // gamma L_F < 1 holds strictly.
    double gamma_fraction = 0.9;
    double rho = 0.99;
    double sigma = 0.1;
    double beta = 0.3;
    int big_m = 2;  // M: line-search grid {beta^1, ..., beta^M, 0}
    long long max_iterations = 1000000;
    long long max_operator_evals = 100000000;
    double residual_tolerance = 0.0;
    std::optional<double> safeguard_D;
    bool strengthened_proxflex = false;
    std::optional<double> mu_strong;  // used only by the strengthened mode
    int iflex_backtrack_cap = 200;
};

// Table-1 defaults; I-FLEX uses beta = 0.01.
SolverConfig default_config(Method m);

struct TraceRow {
    long long k = 0;
    long long f_evals = 0;     // cumulative within the run
    long long prox_evals = 0;  // cumulative within the run
    double V = 0.0;
    double norm_R = 0.0;
    std::optional<double> norm_F;  // present only when g = 0
    double natural_residual = 0.0;
    std::optional<double> tangent_residual;
    std::optional<double> tseng_residual;  // ||F(z^k) + xi^k||, EG rows with k >= 1
    std::optional<double> objective;       // f(z^k) when the instance exposes one
    double tau = 0.0;
    Branch branch = Branch::nominal;
    double wall_ms = 0.0;
    bool direction_fallback = false;
};

struct IterationTrace {
    std::vector<TraceRow> rows;
    StopReason reason = StopReason::budget;
    std::string message;
    Point final_point;
    std::vector<double> superlin_ratios;
};

// One extragradient step: zbar = prox(z - gamma F(z)), z+ = prox(z - gamma
// F(zbar)). Costs 2 F and 2 prox evaluations.
struct StepResult {
    Point zbar;
    Point znext;
    Point F_z;
    Point F_zbar;
};
StepResult step_eg(ProblemInstance& inst, double gamma, const Point& z);

// Tseng's forward-backward-forward step: z+ = zbar + gamma (F(z) - F(zbar)).
// Costs 2 F and 1 prox evaluations.
StepResult step_tseng(ProblemInstance& inst, double gamma, const Point& z);

// Extragradient step with both prox operators replaced by the linear
// resolvent (I + gamma T)^{-1}; used by the divergence demonstration.
StepResult step_resolvent_eg(const DenseMatrix& F_mat, const DenseMatrix& T_mat,
                             double gamma, const Point& z);

// Feasible deterministic starting point: prox of the all-ones vector.
Point default_start(const ProblemInstance& inst);

// Runs `method` from z0. `provider` supplies directions for the line-search
// methods and is ignored by eg/tseng; passing nullptr uses the zero direction.
IterationTrace run(ProblemInstance& inst, const SolverConfig& config, Method method,
                   DirectionProvider* provider, const Point& z0);

}  // namespace flexkit
