#include "flexkit/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace flexkit {

void ProblemInstance::validate() const {
    if (dimension == 0) throw std::invalid_argument("ProblemInstance: dimension must be >= 1");
    if (!F) throw std::invalid_argument("ProblemInstance: missing F evaluator");
    if (!(lipschitz > 0.0)) throw std::invalid_argument("ProblemInstance: L_F must be positive");
    validate_prox(prox, dimension);
    if (known_solution) {
        if (known_solution->size() != dimension) {
            throw std::invalid_argument("ProblemInstance: known_solution dimension mismatch");
        }
        if (is_zero_prox(prox)) {
            const double r_star = norm(probe_F(*known_solution));
            const double r_zero = norm(probe_F(Point(dimension)));
            if (r_star > 1e-8 * (1.0 + r_zero)) {
                throw std::invalid_argument(
                    "ProblemInstance: known_solution is not a zero of F");
            }
        }
    }
}

}  // namespace flexkit
