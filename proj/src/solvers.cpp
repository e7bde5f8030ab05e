#include "flexkit/solvers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "flexkit/lyapunov.hpp"

namespace flexkit {

std::string to_string(Method m) {
    switch (m) {
        case Method::eg: return "eg";
        case Method::tseng: return "tseng";
        case Method::flex: return "flex";
        case Method::iflex: return "iflex";
        case Method::proxflex: return "proxflex";
    }
    return "?";
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::full_step: return "full-step";
        case Branch::line_search: return "line-search";
        case Branch::nominal: return "nominal";
    }
    return "?";
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::tolerance: return "tolerance";
        case StopReason::max_iterations: return "max_iterations";
        case StopReason::budget: return "budget";
        case StopReason::failure: return "failure";
    }
    return "?";
}

std::optional<Method> method_from_string(const std::string& name) {
    if (name == "eg") return Method::eg;
    if (name == "tseng") return Method::tseng;
    if (name == "flex") return Method::flex;
    if (name == "iflex") return Method::iflex;
    if (name == "proxflex") return Method::proxflex;
    return std::nullopt;
}

SolverConfig default_config(Method m) {
    SolverConfig c;
    if (m == Method::iflex) c.beta = 0.01;
    return c;
}

StepResult step_eg(ProblemInstance& inst, double gamma, const Point& z) {
    StepResult out;
    out.F_z = inst.eval_F(z);
    out.zbar = inst.eval_prox(z - gamma * out.F_z, gamma);
    out.F_zbar = inst.eval_F(out.zbar);
    out.znext = inst.eval_prox(z - gamma * out.F_zbar, gamma);
    return out;
}

StepResult step_tseng(ProblemInstance& inst, double gamma, const Point& z) {
    StepResult out;
    out.F_z = inst.eval_F(z);
    out.zbar = inst.eval_prox(z - gamma * out.F_z, gamma);
    out.F_zbar = inst.eval_F(out.zbar);
    out.znext = out.zbar + gamma * (out.F_z - out.F_zbar);
    return out;
}

StepResult step_resolvent_eg(const DenseMatrix& F_mat, const DenseMatrix& T_mat,
                             double gamma, const Point& z) {
    if (F_mat.rows() != F_mat.cols() || T_mat.rows() != T_mat.cols() ||
        F_mat.rows() != T_mat.rows()) {
        throw std::invalid_argument("step_resolvent_eg: matrices must be square, same size");
    }
    const std::size_t n = F_mat.rows();
    DenseMatrix R = DenseMatrix::identity(n) + gamma * T_mat;
    StepResult out;
    out.F_z = matvec(F_mat, z);
    out.zbar = solve_dense(R, z - gamma * out.F_z);
    out.F_zbar = matvec(F_mat, out.zbar);
    out.znext = solve_dense(R, z - gamma * out.F_zbar);
    return out;
}

Point default_start(const ProblemInstance& inst) {
    return inst.probe_prox(Point(inst.dimension, 1.0), 1.0);
}

namespace {

using Clock = std::chrono::steady_clock;

struct RunContext {
    ProblemInstance& inst;
    const SolverConfig& cfg;
    double gamma;
    long long start_f;
    long long start_prox;
    Clock::time_point t0;
    IterationTrace trace;

    RunContext(ProblemInstance& i, const SolverConfig& c)
        : inst(i),
          cfg(c),
          gamma(c.gamma_fraction / i.lipschitz),
          start_f(i.counters.f_evals),
          start_prox(i.counters.prox_evals),
          t0(Clock::now()) {}

    long long used_evals() const {
        return (inst.counters.f_evals - start_f) + (inst.counters.prox_evals - start_prox);
    }

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }

    TraceRow base_row(long long k) const {
        TraceRow row;
        row.k = k;
        row.f_evals = inst.counters.f_evals - start_f;
        row.prox_evals = inst.counters.prox_evals - start_prox;
        row.wall_ms = elapsed_ms();
        return row;
    }

    bool out_of_budget() { return used_evals() >= cfg.max_operator_evals; }

    void finish(StopReason reason, const Point& z, std::string msg = {}) {
        trace.reason = reason;
        trace.message = std::move(msg);
        trace.final_point = z;
    }
};

// Absolute floor for the line-search acceptance slack: once iterates agree to
// the last ulp, the merit evaluations fluctuate by about
// eps^2 n (1 + ||z||^2) max(L^2, 1/gamma^2) and a purely relative slack can no
// longer absorb the noise.
double merit_noise_floor(double gamma, double lips, std::size_t n, double z_norm_sq) {
    const double eps = 2.220446049250313e-16;
    const double scale = std::max(lips * lips, 1.0 / (gamma * gamma));
    return 4.0 * eps * eps * static_cast<double>(n) * (1.0 + z_norm_sq) * scale;
}

void validate_config(const SolverConfig& cfg) {
    auto in01 = [](double x) { return x > 0.0 && x < 1.0; };
    if (!in01(cfg.gamma_fraction)) {
        throw std::invalid_argument("SolverConfig: gamma_fraction must be in (0,1)");
    }
    if (!in01(cfg.rho) || !in01(cfg.sigma) || !in01(cfg.beta)) {
        throw std::invalid_argument("SolverConfig: rho, sigma, beta must be in (0,1)");
    }
    if (cfg.big_m < 0) throw std::invalid_argument("SolverConfig: M must be >= 0");
    if (cfg.max_iterations < 0 || cfg.max_operator_evals < 0) {
        throw std::invalid_argument("SolverConfig: negative budget");
    }
    if (!(cfg.residual_tolerance >= 0.0)) {
        throw std::invalid_argument("SolverConfig: residual_tolerance must be >= 0");
    }
}

IterationTrace run_eg_tseng(ProblemInstance& inst, const SolverConfig& cfg, Method method,
                            const Point& z0) {
    RunContext ctx(inst, cfg);
    const double gamma = ctx.gamma;
    Point z = z0;
    std::optional<Point> xi;  // subgradient witness from the previous EG step

    for (long long k = 0;; ++k) {
        if (ctx.out_of_budget()) {
            ctx.finish(StopReason::budget, z);
            break;
        }
        if (k >= cfg.max_iterations) {
            ctx.finish(StopReason::max_iterations, z);
            break;
        }

        StepResult s = method == Method::eg ? step_eg(inst, gamma, z)
                                            : step_tseng(inst, gamma, z);
        // The subgradient-witness measure is specific to the EG second prox.
        const Point* xi_ptr = (xi && method == Method::eg) ? &*xi : nullptr;
        MeasureRecord m =
            measures_for_step(inst, gamma, z, s.zbar, s.znext, s.F_z, s.F_zbar, xi_ptr);
        const double norm_R = m.norm_R;

        TraceRow row = ctx.base_row(k);
        row.V = m.V;
        row.norm_R = m.norm_R;
        if (is_zero_prox(inst.prox)) row.norm_F = norm(s.F_z);
        row.natural_residual = m.natural_residual;
        row.tangent_residual = m.tangent_residual;
        row.tseng_residual = m.tseng_residual;
        if (inst.objective) row.objective = (*inst.objective)(z);
        ctx.trace.rows.push_back(std::move(row));

        if (method == Method::eg) xi = xi_witness(gamma, z, s.znext, s.F_zbar);
        z = s.znext;
        if (norm_R <= cfg.residual_tolerance) {
            ctx.finish(StopReason::tolerance, z);
            break;
        }
    }
    return std::move(ctx.trace);
}

// FLEX and I-FLEX share the g = 0 engine; they differ only in the tau grid.
IterationTrace run_flex_family(ProblemInstance& inst, const SolverConfig& cfg,
                               Method method, DirectionProvider& dir, const Point& z0) {
    RunContext ctx(inst, cfg);
    const double gamma = ctx.gamma;
    const double lips = inst.lipschitz;
    const double sigma_fac = cfg.sigma * (1.0 - gamma * gamma * lips * lips);
    SuperlinTracker superlin;

    Point z = z0;
    Point Fz = inst.eval_F(z);

    auto terminal_row = [&](long long k) {
        TraceRow row = ctx.base_row(k);
        row.V = norm_sq(Fz);
        row.norm_R = norm(Fz);
        row.norm_F = row.norm_R;
        row.natural_residual = row.norm_R;
        row.tangent_residual = row.norm_R;
        if (inst.objective) row.objective = (*inst.objective)(z);
        ctx.trace.rows.push_back(std::move(row));
    };

    for (long long k = 0;; ++k) {
        const double Fz_norm = norm(Fz);
        if (Fz_norm <= cfg.residual_tolerance) {
            terminal_row(k);
            ctx.finish(StopReason::tolerance, z);
            break;
        }
        if (ctx.out_of_budget()) {
            ctx.finish(StopReason::budget, z);
            break;
        }
        if (k >= cfg.max_iterations) {
            ctx.finish(StopReason::max_iterations, z);
            break;
        }

        Point d = dir.compute(inst, z, Fz);
        if (cfg.safeguard_D) d = safeguard(d, Fz, *cfg.safeguard_D);
        const Point z_trial = z + d;

        Point z_next, F_next;
        Branch branch = Branch::nominal;
        double tau = 0.0;
        bool failed = false;
        std::string fail_msg;

        if (method == Method::flex) {
            Point F_trial = inst.eval_F(z_trial);
            superlin.record(norm(F_trial), Fz_norm);
            if (norm(F_trial) <= cfg.rho * Fz_norm) {
                z_next = z_trial;
                F_next = F_trial;
                branch = Branch::full_step;
                tau = 1.0;
            } else {
                const Point zbar = z - gamma * Fz;
                const Point Fzbar = inst.eval_F(zbar);
                const Point w = z - gamma * Fzbar;
                const double rhs = norm_sq(Fz) - sigma_fac * norm_sq(Fz - Fzbar);
                const double slack = 1e-9 * norm_sq(Fz) +
                                     merit_noise_floor(gamma, lips, z.size(), norm_sq(z));
                bool accepted = false;
                double t = 1.0;
                for (int i = 1; i <= cfg.big_m && !accepted; ++i) {
                    t *= cfg.beta;
                    Point cand = lincomb(1.0 - t, w, t, z_trial);
                    Point Fc = inst.eval_F(cand);
                    if (norm_sq(Fc) <= rhs + slack) {
                        accepted = true;
                        z_next = std::move(cand);
                        F_next = std::move(Fc);
                        branch = Branch::line_search;
                        tau = t;
                    }
                }
                if (!accepted) {
                    Point Fw = inst.eval_F(w);
                    if (norm_sq(Fw) <= rhs + slack) {
                        z_next = w;
                        F_next = std::move(Fw);
                        branch = Branch::nominal;
                        tau = 0.0;
                    } else {
                        failed = true;
                        fail_msg =
                            "FLEX: nominal step violated its guaranteed descent "
                            "inequality; this indicates an implementation bug or an "
                            "instance whose Lipschitz constant is understated";
                    }
                }
            }
        } else {  // I-FLEX: infinite backtracking from tau = 1
            const Point zbar = z - gamma * Fz;
            const Point Fzbar = inst.eval_F(zbar);
            const double rhs = norm_sq(Fz) - sigma_fac * norm_sq(Fz - Fzbar);
            const double slack = 1e-9 * norm_sq(Fz) +
                                 merit_noise_floor(gamma, lips, z.size(), norm_sq(z));

            Point F_trial = inst.eval_F(z_trial);
            superlin.record(norm(F_trial), Fz_norm);
            if (norm_sq(F_trial) <= rhs + slack) {
                z_next = z_trial;
                F_next = std::move(F_trial);
                branch = Branch::full_step;
                tau = 1.0;
            } else {
                const Point w = z - gamma * Fzbar;  // deferred until tau = 1 fails
                bool accepted = false;
                double t = 1.0;
                for (int i = 1; i <= cfg.iflex_backtrack_cap && !accepted; ++i) {
                    t *= cfg.beta;
                    Point cand = lincomb(1.0 - t, w, t, z_trial);
                    Point Fc = inst.eval_F(cand);
                    if (norm_sq(Fc) <= rhs + slack) {
                        accepted = true;
                        z_next = std::move(cand);
                        F_next = std::move(Fc);
                        branch = Branch::line_search;
                        tau = t;
                    }
                }
                if (!accepted) {
                    if (norm(Fz - Fzbar) > cfg.residual_tolerance) {
                        failed = true;
                        fail_msg =
                            "I-FLEX: backtrack cap exceeded; F is likely not injective "
                            "or the tolerance does not match the problem scale";
                    } else {
                        // ||F(z) - F(zbar)|| is already below tolerance scale:
                        // the line search has stagnated at the solution set.
                        terminal_row(k);
                        ctx.finish(StopReason::tolerance, z,
                                   "line search stagnated within tolerance");
                        break;
                    }
                }
            }
        }

        if (failed) {
            ctx.finish(StopReason::failure, z, fail_msg);
            break;
        }

        TraceRow row = ctx.base_row(k);
        row.V = norm_sq(Fz);
        row.norm_R = Fz_norm;
        row.norm_F = Fz_norm;
        row.natural_residual = Fz_norm;
        row.tangent_residual = Fz_norm;
        if (inst.objective) row.objective = (*inst.objective)(z);
        row.tau = tau;
        row.branch = branch;
        row.direction_fallback = dir.last_fallback();
        ctx.trace.rows.push_back(std::move(row));

        dir.accept(z_next, F_next);
        z = std::move(z_next);
        Fz = std::move(F_next);
    }
    ctx.trace.superlin_ratios = superlin.ratios();
    return std::move(ctx.trace);
}

IterationTrace run_proxflex(ProblemInstance& inst, const SolverConfig& cfg,
                            DirectionProvider& dir, const Point& z0) {
    RunContext ctx(inst, cfg);
    const double gamma = ctx.gamma;
    const double lips = inst.lipschitz;
    const double inv_g2 = 1.0 / (gamma * gamma);
    const double sigma_fac = cfg.sigma * (1.0 - gamma * gamma * lips * lips) * inv_g2;
    SuperlinTracker superlin;

    std::optional<double> mu;
    if (cfg.strengthened_proxflex) {
        mu = cfg.mu_strong ? cfg.mu_strong : inst.strong_monotonicity;
        if (!mu) {
            throw std::invalid_argument(
                "proxflex: strengthened line search requires mu_F (config or instance)");
        }
    }

    struct Bundle {
        Point z, Fz, zbar, Fzbar, w;
        double V = 0.0;
    };
    auto eval_bundle = [&](Point at) {
        Bundle b;
        b.z = std::move(at);
        b.Fz = inst.eval_F(b.z);
        b.zbar = inst.eval_prox(b.z - gamma * b.Fz, gamma);
        b.Fzbar = inst.eval_F(b.zbar);
        b.w = inst.eval_prox(b.z - gamma * b.Fzbar, gamma);
        b.V = lyapunov_V_with(gamma, b.z, b.zbar, b.w, b.Fz, b.Fzbar);
        return b;
    };

    Bundle cur = eval_bundle(z0);

    for (long long k = 0;; ++k) {
        const double norm_R = norm(cur.z - cur.zbar) / gamma;
        if (norm_R <= cfg.residual_tolerance) {
            TraceRow row = ctx.base_row(k);
            row.V = cur.V;
            row.norm_R = norm_R;
            row.natural_residual = natural_residual_with(inst, cur.z, cur.Fz);
            row.tangent_residual = tangent_residual_with(inst, cur.z, cur.Fz);
            if (inst.objective) row.objective = (*inst.objective)(cur.z);
            ctx.trace.rows.push_back(std::move(row));
            ctx.finish(StopReason::tolerance, cur.z);
            break;
        }
        if (ctx.out_of_budget()) {
            ctx.finish(StopReason::budget, cur.z);
            break;
        }
        if (k >= cfg.max_iterations) {
            ctx.finish(StopReason::max_iterations, cur.z);
            break;
        }

        Point r = (1.0 / gamma) * (cur.z - cur.zbar);
        Point d = dir.compute(inst, cur.z, r);
        if (cfg.safeguard_D) d = safeguard(d, r, *cfg.safeguard_D);

        Bundle trial = eval_bundle(cur.z + d);
        superlin.record(trial.V, cur.V);

        Bundle next;
        Branch branch = Branch::nominal;
        double tau = 0.0;
        bool failed = false;

        if (trial.V <= cfg.rho * cfg.rho * cur.V) {
            next = std::move(trial);
            branch = Branch::full_step;
            tau = 1.0;
        } else {
            double rhs = cur.V - sigma_fac * norm_sq(cur.w - cur.zbar);
            if (mu) rhs -= 2.0 / gamma * cfg.sigma * (*mu) * norm_sq(cur.w - cur.z);
            const double slack = 1e-9 * std::abs(cur.V) +
                                 merit_noise_floor(gamma, lips, cur.z.size(), norm_sq(cur.z));
            bool accepted = false;
            double t = 1.0;
            for (int i = 1; i <= cfg.big_m && !accepted; ++i) {
                t *= cfg.beta;
                Bundle cand = eval_bundle(lincomb(1.0 - t, cur.w, t, trial.z));
                if (cand.V <= rhs + slack) {
                    accepted = true;
                    next = std::move(cand);
                    branch = Branch::line_search;
                    tau = t;
                }
            }
            if (!accepted) {
                Bundle cand = eval_bundle(cur.w);
                if (cand.V <= rhs + slack) {
                    next = std::move(cand);
                    branch = Branch::nominal;
                    tau = 0.0;
                } else {
                    failed = true;
                }
            }
        }

        if (failed) {
            ctx.finish(StopReason::failure, cur.z,
                       "Prox-FLEX: nominal step violated its guaranteed descent "
                       "inequality; this indicates an implementation bug or an "
                       "instance whose Lipschitz constant is understated");
            break;
        }

        TraceRow row = ctx.base_row(k);
        row.V = cur.V;
        row.norm_R = norm_R;
        row.natural_residual = natural_residual_with(inst, cur.z, cur.Fz);
        row.tangent_residual = tangent_residual_with(inst, cur.z, cur.Fz);
        if (inst.objective) row.objective = (*inst.objective)(cur.z);
        row.tau = tau;
        row.branch = branch;
        row.direction_fallback = dir.last_fallback();
        ctx.trace.rows.push_back(std::move(row));

        Point r_next = (1.0 / gamma) * (next.z - next.zbar);
        dir.accept(next.z, r_next);
        cur = std::move(next);
    }
    ctx.trace.superlin_ratios = superlin.ratios();
    return std::move(ctx.trace);
}

}  // namespace

IterationTrace run(ProblemInstance& inst, const SolverConfig& config, Method method,
                   DirectionProvider* provider, const Point& z0) {
    validate_config(config);
    if (!(inst.lipschitz > 0.0)) {
        throw std::invalid_argument("run: instance must carry a positive L_F");
    }
    if (z0.size() != inst.dimension) {
        throw std::invalid_argument("run: starting point dimension mismatch");
    }
    if ((method == Method::flex || method == Method::iflex) && !is_zero_prox(inst.prox)) {
        throw std::invalid_argument(to_string(method) + " requires an unconstrained instance (g = 0)");
    }

    ZeroDirection zero_dir;
    DirectionProvider& dir = provider ? *provider : static_cast<DirectionProvider&>(zero_dir);

    switch (method) {
        case Method::eg:
        case Method::tseng:
            return run_eg_tseng(inst, config, method, z0);
        case Method::flex:
        case Method::iflex:
            return run_flex_family(inst, config, method, dir, z0);
        case Method::proxflex:
            // With g = 0 the Prox-FLEX tests reduce exactly to the FLEX ones
            // and each trial needs just one F evaluation, so use that engine.
            if (is_zero_prox(inst.prox)) {
                return run_flex_family(inst, config, Method::flex, dir, z0);
            }
            return run_proxflex(inst, config, dir, z0);
    }
    throw std::invalid_argument("run: unknown method");
}

}  // namespace flexkit
