#pragma once

#include <functional>
#include <optional>

#include "flexkit/core.hpp"
#include "flexkit/prox.hpp"

namespace flexkit {

struct EvalCounters {
    long long f_evals = 0;
    long long prox_evals = 0;
    long long total() const { return f_evals + prox_evals; }
};

// A monotone inclusion instance 0 in F(z) + dg(z): an evaluable operator F, a
// prox-evaluable g, and the Lipschitz constant of F. Counters tally the
// algorithmic F/prox evaluations of the run that owns this instance; the
// probe_* entry points are for measurements and diagnostics and do not count.
class ProblemInstance {
public:
    std::size_t dimension = 0;
    std::function<Point(const Point&)> F;
    ProxSpec prox = ZeroProx{};
    double lipschitz = 0.0;
    std::optional<Point> known_solution;
    std::optional<std::function<DenseMatrix(const Point&)>> jacobian;
    // mu with <F(x)-F(y), x-y> >= mu ||x-y||^2 (strong monotonicity).
    std::optional<double> strong_monotonicity;
    // mu_F with ||F(x)-F(y)|| >= mu_F ||x-y|| (lower Lipschitz bound).
    std::optional<double> lower_lipschitz;
    std::optional<std::function<double(const Point&)>> objective;

    EvalCounters counters;

    Point eval_F(const Point& z) {
        ++counters.f_evals;
        return F(z);
    }

    Point eval_prox(const Point& v, double t) {
        ++counters.prox_evals;
        return prox_eval(prox, v, t);
    }

    Point probe_F(const Point& z) const { return F(z); }

    Point probe_prox(const Point& v, double t) const { return prox_eval(prox, v, t); }

    // Checks the constructor-level invariants; throws std::invalid_argument.
    void validate() const;
};

}  // namespace flexkit
