#include "flexkit/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flexkit {

bool is_zero_prox(const ProxSpec& spec) {
    return std::holds_alternative<ZeroProx>(spec);
}

void validate_prox(const ProxSpec& spec, std::size_t n) {
    if (const auto* l1 = std::get_if<L1Prox>(&spec)) {
        if (!(l1->lambda >= 0.0)) throw std::invalid_argument("L1Prox: lambda must be >= 0");
    } else if (const auto* box = std::get_if<BoxProx>(&spec)) {
        if (box->lower.size() != n || box->upper.size() != n) {
            throw std::invalid_argument("BoxProx: bound dimensions do not match instance");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!(box->lower[i] <= box->upper[i])) {
                throw std::invalid_argument("BoxProx: lower > upper");
            }
        }
    } else if (const auto* sp = std::get_if<SimplexProductProx>(&spec)) {
        std::size_t total = 0;
        for (std::size_t b : sp->blocks) {
            if (b == 0) throw std::invalid_argument("SimplexProductProx: empty block");
            total += b;
        }
        if (total != n) {
            throw std::invalid_argument("SimplexProductProx: block sizes must sum to dimension");
        }
    } else if (const auto* c = std::get_if<CustomProx>(&spec)) {
        if (!c->prox) throw std::invalid_argument("CustomProx: missing evaluator");
    }
}

std::vector<double> project_simplex(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> u(v);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t j = 0; j < n; ++j) {
        cumsum += u[j];
        const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) {
            rho = j + 1;
            theta = t;
        }
    }
    if (rho == 0) {
        // All candidates rejected only when v has repeated extreme entries at
        // the numerical edge; fall back to the uniform point.
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::max(v[i] - theta, 0.0);
    return w;
}

Point prox_eval(const ProxSpec& spec, const Point& v, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("prox_eval: step t must be positive");
    if (std::holds_alternative<ZeroProx>(spec)) {
        return v;
    }
    if (const auto* l1 = std::get_if<L1Prox>(&spec)) {
        const double thr = t * l1->lambda;
        Point out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = v[i];
            out[i] = x > thr ? x - thr : (x < -thr ? x + thr : 0.0);
        }
        return out;
    }
    if (const auto* box = std::get_if<BoxProx>(&spec)) {
        if (box->lower.size() != v.size()) {
            throw std::invalid_argument("prox_eval: box dimension mismatch");
        }
        Point out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            out[i] = std::min(std::max(v[i], box->lower[i]), box->upper[i]);
        }
        return out;
    }
    if (const auto* sp = std::get_if<SimplexProductProx>(&spec)) {
        Point out(v.size());
        std::size_t pos = 0;
        for (std::size_t b : sp->blocks) {
            if (pos + b > v.size()) {
                throw std::invalid_argument("prox_eval: simplex blocks exceed dimension");
            }
            std::vector<double> block(v.data() + pos, v.data() + pos + b);
            std::vector<double> proj = project_simplex(block);
            for (std::size_t i = 0; i < b; ++i) out[pos + i] = proj[i];
            pos += b;
        }
        if (pos != v.size()) throw std::invalid_argument("prox_eval: simplex blocks undersized");
        return out;
    }
    const auto& custom = std::get<CustomProx>(spec);
    return custom.prox(v, t);
}

}  // namespace flexkit
