#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "flexkit/core.hpp"

namespace flexkit {

struct ZeroProx {};

struct L1Prox {
    double lambda = 0.0;
};

struct BoxProx {
    std::vector<double> lower;
    std::vector<double> upper;
};

// Cartesian product of probability simplices; block sizes must sum to the
// ambient dimension.
struct SimplexProductProx {
    std::vector<std::size_t> blocks;
};

struct CustomProx {
    std::function<Point(const Point&, double)> prox;
};

using ProxSpec = std::variant<ZeroProx, L1Prox, BoxProx, SimplexProductProx, CustomProx>;

bool is_zero_prox(const ProxSpec& spec);

// Throws std::invalid_argument if the spec is inconsistent with dimension n
// (box bounds out of order, block sizes not summing to n, negative weight).
void validate_prox(const ProxSpec& spec, std::size_t n);

// prox_{t g}(v) = argmin_z { g(z) + ||v - z||^2 / (2t) }, t > 0.
Point prox_eval(const ProxSpec& spec, const Point& v, double t);

// Euclidean projection onto the probability simplex, exact sort-based method.
std::vector<double> project_simplex(const std::vector<double>& v);

}  // namespace flexkit
