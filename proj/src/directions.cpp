#include "flexkit/directions.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace flexkit {

namespace {

// LU with partial pivoting for the small m-by-m inner systems.
struct SmallLU {
    std::size_t n = 0;
    std::vector<double> lu;
    std::vector<std::size_t> piv;
    bool singular = false;

    static SmallLU factor(const std::vector<double>& a, std::size_t n) {
        SmallLU f;
        f.n = n;
        f.lu = a;
        f.piv.resize(n);
        double amax = 0.0;
        for (double x : a) amax = std::max(amax, std::abs(x));
        const double tiny = 1e-14 * std::max(1.0, amax);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(f.lu[i * n + k]) > std::abs(f.lu[p * n + k])) p = i;
            f.piv[k] = p;
            if (std::abs(f.lu[p * n + k]) <= tiny) {
                f.singular = true;
                return f;
            }
            if (p != k)
                for (std::size_t j = 0; j < n; ++j) std::swap(f.lu[k * n + j], f.lu[p * n + j]);
            for (std::size_t i = k + 1; i < n; ++i) {
                const double m = f.lu[i * n + k] / f.lu[k * n + k];
                f.lu[i * n + k] = m;
                for (std::size_t j = k + 1; j < n; ++j) f.lu[i * n + j] -= m * f.lu[k * n + j];
            }
        }
        return f;
    }

    std::vector<double> solve(std::vector<double> b) const {
        // Row interchanges first, then unit-L forward and U backward solves;
        // the stored multipliers are in the final (fully pivoted) row order.
        for (std::size_t k = 0; k < n; ++k) std::swap(b[k], b[piv[k]]);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu[i * n + k] * b[k];
        }
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) b[i] -= lu[i * n + j] * b[j];
            b[i] /= lu[i * n + i];
        }
        return b;
    }
};

double norm1_matrix(const std::vector<double>& a, std::size_t n) {
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += std::abs(a[i * n + j]);
        best = std::max(best, col);
    }
    return best;
}

std::vector<double> transpose_square(const std::vector<double>& a, std::size_t n) {
    std::vector<double> t(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[j * n + i] = a[i * n + j];
    return t;
}

// Hager-style 1-norm estimate of ||A^{-1}||, using solves with A and A^T.
double inverse_norm1_estimate(const SmallLU& f, const SmallLU& ft) {
    const std::size_t n = f.n;
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    for (int pass = 0; pass < 5; ++pass) {
        std::vector<double> y = f.solve(x);
        double y1 = 0.0;
        for (double v : y) y1 += std::abs(v);
        est = std::max(est, y1);
        std::vector<double> xi(n);
        for (std::size_t i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0 ? 1.0 : -1.0);
        std::vector<double> z = ft.solve(xi);
        std::size_t jmax = 0;
        double zmax = 0.0, zdotx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            zdotx += z[i] * x[i];
            if (std::abs(z[i]) > zmax) {
                zmax = std::abs(z[i]);
                jmax = i;
            }
        }
        if (zmax <= zdotx) break;
        std::fill(x.begin(), x.end(), 0.0);
        x[jmax] = 1.0;
    }
    return est;
}

}  // namespace

DirectionBuffer::DirectionBuffer(std::size_t memory) : memory_(memory) {
    if (memory_ < 1) throw std::invalid_argument("DirectionBuffer: memory must be >= 1");
}

void DirectionBuffer::seed(const Point& z, const Point& r) {
    last_z_ = z;
    last_r_ = r;
    seeded_ = true;
}

void DirectionBuffer::evict_front() {
    s_.pop_front();
    y_.pop_front();
    st_y_rows_.pop_front();
    yt_y_rows_.pop_front();
    for (auto& row : st_y_rows_) row.erase(row.begin());
    for (auto& row : yt_y_rows_) row.erase(row.begin());
}

bool DirectionBuffer::push(const Point& z_new, const Point& r_new) {
    if (!seeded_) throw std::logic_error("DirectionBuffer: push before seed");
    Point s = z_new - last_z_;
    Point y = r_new - last_r_;
    last_z_ = z_new;
    last_r_ = r_new;
    if (norm(s) < 1e-14 * (1.0 + norm(z_new))) {
        // Degenerate secant: restart rather than admit a rank-deficient pair.
        s_.clear();
        y_.clear();
        st_y_rows_.clear();
        yt_y_rows_.clear();
        return false;
    }
    if (s_.size() == memory_) evict_front();

    const std::size_t m_old = s_.size();
    std::vector<double> st_row(m_old + 1), yt_row(m_old + 1);
    for (std::size_t j = 0; j < m_old; ++j) {
        st_row[j] = dot(s, y_[j]);
        yt_row[j] = dot(y, y_[j]);
        st_y_rows_[j].push_back(dot(s_[j], y));
        yt_y_rows_[j].push_back(dot(y_[j], y));
    }
    st_row[m_old] = dot(s, y);
    yt_row[m_old] = dot(y, y);
    s_.push_back(std::move(s));
    y_.push_back(std::move(y));
    st_y_rows_.push_back(std::move(st_row));
    yt_y_rows_.push_back(std::move(yt_row));
    return true;
}

void DirectionBuffer::reset() {
    s_.clear();
    y_.clear();
    st_y_rows_.clear();
    yt_y_rows_.clear();
    seeded_ = false;
}

std::vector<double> DirectionBuffer::gram_st_y() const {
    const std::size_t m = s_.size();
    std::vector<double> g(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g[i * m + j] = st_y_rows_[i][j];
    return g;
}

std::vector<double> DirectionBuffer::gram_yt_y() const {
    const std::size_t m = y_.size();
    std::vector<double> g(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g[i * m + j] = yt_y_rows_[i][j];
    return g;
}

Point aa_direction(const DirectionBuffer& buffer, const Point& r, AndersonType type,
                   bool* fallback) {
    if (fallback) *fallback = false;
    const std::size_t m = buffer.size();
    if (m == 0) return -r;

    const auto& S = buffer.secants_s();
    const auto& Y = buffer.secants_y();
    std::vector<double> G =
        type == AndersonType::type1 ? buffer.gram_st_y() : buffer.gram_yt_y();
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        rhs[i] = type == AndersonType::type1 ? dot(S[i], r) : dot(Y[i], r);
    }

    // Oldest pairs are pruned until the inner system is solvable with
    // condition estimate at most 1e12; only when even the newest single pair
    // is degenerate does the direction fall back to -r.
    for (std::size_t q = m;; --q) {
        const std::size_t skip = m - q;
        std::vector<double> g(q * q);
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j) g[i * q + j] = G[(skip + i) * m + skip + j];
        SmallLU f = SmallLU::factor(g, q);
        if (!f.singular) {
            SmallLU ft = SmallLU::factor(transpose_square(g, q), q);
            const double cond = norm1_matrix(g, q) * inverse_norm1_estimate(f, ft);
            if (cond <= 1e12) {
                std::vector<double> b(rhs.begin() + skip, rhs.end());
                std::vector<double> u = f.solve(std::move(b));
                Point d = -r;
                for (std::size_t j = 0; j < q; ++j) {
                    const double uj = u[j];
                    const Point& sj = S[skip + j];
                    const Point& yj = Y[skip + j];
                    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= uj * (sj[i] - yj[i]);
                }
                d.check_finite();
                return d;
            }
        }
        if (q == 1) break;
    }
    if (fallback) *fallback = true;
    return -r;
}

Point AndersonDirection::compute(ProblemInstance&, const Point& z, const Point& r) {
    if (!buffer_.seeded()) buffer_.seed(z, r);
    return aa_direction(buffer_, r, type_, &fallback_);
}

void AndersonDirection::accept(const Point& z_new, const Point& r_new) {
    if (!buffer_.seeded()) {
        buffer_.seed(z_new, r_new);
        return;
    }
    buffer_.push(z_new, r_new);
}

Point newton_reg_direction(const ProblemInstance& inst, const Point& z, double c,
                           const Point* F_z) {
    if (!inst.jacobian) {
        throw std::invalid_argument("newton_reg_direction: instance has no Jacobian");
    }
    if (!is_zero_prox(inst.prox)) {
        throw std::invalid_argument("newton_reg_direction: requires g = 0");
    }
    if (!(c > 0.0)) throw std::invalid_argument("newton_reg_direction: c must be positive");
    Point Fz = F_z ? *F_z : inst.probe_F(z);
    const double rk = c * norm(Fz);
    if (rk == 0.0) return Point(z.size());
    DenseMatrix J = (*inst.jacobian)(z);
    for (std::size_t i = 0; i < J.rows(); ++i) J(i, i) += rk;
    return solve_dense(J, -Fz);
}

Point RegularizedNewtonDirection::compute(ProblemInstance& inst, const Point& z,
                                          const Point& r) {
    // With g = 0 the residual handed in is exactly F(z).
    return newton_reg_direction(inst, z, c_, &r);
}

Point safeguard(const Point& d, const Point& r, double D) {
    if (!(D > 0.0)) throw std::invalid_argument("safeguard: D must be positive");
    const double bound = D * norm(r);
    const double dn = norm(d);
    if (dn <= bound) return d;
    if (bound == 0.0) return Point(d.size());
    return (bound / dn) * d;
}

double SuperlinTracker::record(double V_trial, double V_current) {
    const double ratio = V_current > 0.0 ? V_trial / V_current : 0.0;
    ratios_.push_back(ratio);
    return ratio;
}

std::unique_ptr<DirectionProvider> make_direction_provider(DirectionKind kind,
                                                           std::size_t memory,
                                                           double newton_c) {
    switch (kind) {
        case DirectionKind::none:
            return std::make_unique<ZeroDirection>();
        case DirectionKind::aa1:
            return std::make_unique<AndersonDirection>(AndersonType::type1, memory);
        case DirectionKind::aa2:
            return std::make_unique<AndersonDirection>(AndersonType::type2, memory);
        case DirectionKind::newton:
            return std::make_unique<RegularizedNewtonDirection>(newton_c);
    }
    throw std::invalid_argument("make_direction_provider: unknown kind");
}

}  // namespace flexkit
