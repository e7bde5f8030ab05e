#include "flexkit/verify.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace flexkit {

namespace {

// --- Example B.1 fixture: Tseng on F(x,y) = (A y, -A^T x), box constraints ---

Rational4Vec b1_F(const Rational4Vec& z) {
    // A = [[7, 6], [1, 0]]
    const Rational a11(7), a12(6), a21(1), a22(0);
    const Rational x1 = z[0], x2 = z[1], y1 = z[2], y2 = z[3];
    return {a11 * y1 + a12 * y2, a21 * y1 + a22 * y2,
            -(a11 * x1 + a21 * x2), -(a12 * x1 + a22 * x2)};
}

Rational4Vec b1_clamp(const Rational4Vec& v) {
    // x in [-7, 6]^2, y in [1, 8]^2
    const Rational lo_x(-7), hi_x(6), lo_y(1), hi_y(8);
    auto clamp = [](const Rational& x, const Rational& lo, const Rational& hi) {
        if (x < lo) return lo;
        if (x > hi) return hi;
        return x;
    };
    return {clamp(v[0], lo_x, hi_x), clamp(v[1], lo_x, hi_x), clamp(v[2], lo_y, hi_y),
            clamp(v[3], lo_y, hi_y)};
}

template <std::size_t N>
Rational lyapunov_V_exact(const Rational& gamma, const RationalVec<N>& z,
                          const RationalVec<N>& zbar, const RationalVec<N>& zplus,
                          const RationalVec<N>& F_z, const RationalVec<N>& F_zbar) {
    const Rational inv = Rational(1) / gamma;
    const Rational ip = dot(z - zplus, F_z - F_zbar);
    return Rational(2) * inv * ip + inv * inv * (norm_sq(zplus - zbar) + norm_sq(z - zplus));
}

template <std::size_t N>
void check_vec(CounterexampleReport& rep, const std::string& name,
               const RationalVec<N>& expected, const RationalVec<N>& computed) {
    auto join = [](const RationalVec<N>& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < N; ++i) s += v[i].str() + (i + 1 < N ? " " : ")");
        return s;
    };
    rep.assertions.push_back({name, join(expected), join(computed), expected == computed});
}

void check_scalar(CounterexampleReport& rep, const std::string& name,
                  const Rational& expected, const Rational& computed) {
    rep.assertions.push_back({name, expected.str(), computed.str(), expected == computed});
}

// --- Example B.2 fixture: resolvent extragradient on skew F and skew T ---

Rational2Vec b2_F(const Rational2Vec& z) {
    // A = [[0, 9], [-9, 0]]
    return {Rational(9) * z[1], Rational(-9) * z[0]};
}

Rational2Vec b2_resolvent(const Rational2Vec& v, const Rational& gamma) {
    // (I + gamma B)^{-1} with B = [[0, -4], [4, 0]]
    const Rational a(1), b = gamma * Rational(-4), c = gamma * Rational(4), d(1);
    const Rational det = a * d - b * c;
    return {(d * v[0] - b * v[1]) / det, (a * v[1] - c * v[0]) / det};
}

}  // namespace

bool CounterexampleReport::all_pass() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

CounterexampleReport verify_tseng_counterexample() {
    CounterexampleReport rep;
    rep.title = "Tseng two-step Lyapunov increase (boxed bilinear instance)";
    const Rational gamma(1, 10);

    const Rational4Vec z0{Rational(-1), Rational(-7), Rational(-1), Rational(7)};
    auto tseng = [&gamma](const Rational4Vec& z) {
        const Rational4Vec Fz = b1_F(z);
        const Rational4Vec zbar = b1_clamp(z - gamma * Fz);
        const Rational4Vec Fzbar = b1_F(zbar);
        const Rational4Vec znext = zbar + gamma * (Fz - Fzbar);
        return std::tuple<Rational4Vec, Rational4Vec, Rational4Vec, Rational4Vec>(
            zbar, znext, Fz, Fzbar);
    };

    auto [zbar0, z1, Fz0, Fzbar0] = tseng(z0);
    auto [zbar1, z2, Fz1, Fzbar1] = tseng(z1);

    const Rational4Vec zbar0_ref{Rational(-9, 2), Rational(-69, 10), Rational(1),
                                 Rational(32, 5)};
    const Rational4Vec z1_ref{Rational(-277, 50), Rational(-71, 10), Rational(-36, 25),
                              Rational(43, 10)};
    const Rational4Vec zbar1_ref{Rational(-7), Rational(-1739, 250), Rational(1),
                                 Rational(1)};
    check_vec(rep, "zbar0", zbar0_ref, zbar0);
    check_vec(rep, "z1", z1_ref, z1);
    check_vec(rep, "zbar1", zbar1_ref, zbar1);

    const Rational V0 = lyapunov_V_exact(gamma, z0, zbar0, z1, Fz0, Fzbar0);
    const Rational V1 = lyapunov_V_exact(gamma, z1, zbar1, z2, Fz1, Fzbar1);
    check_scalar(rep, "V0", Rational(1662), V0);
    check_scalar(rep, "V1", Rational(1187246, 625), V1);
    rep.assertions.push_back(
        {"V1 > V0", "true", V1 > V0 ? "true" : "false", V1 > V0});
    rep.monotonicity_violated = V1 > V0;
    return rep;
}

CounterexampleReport verify_resolvent_counterexample() {
    CounterexampleReport rep;
    rep.title = "Resolvent extragradient divergence (skew instance)";
    const Rational gamma(1, 10);

    const Rational2Vec z0{Rational(10), Rational(10)};
    auto step = [&gamma](const Rational2Vec& z) {
        const Rational2Vec Fz = b2_F(z);
        const Rational2Vec zbar = b2_resolvent(z - gamma * Fz, gamma);
        const Rational2Vec Fzbar = b2_F(zbar);
        const Rational2Vec znext = b2_resolvent(z - gamma * Fzbar, gamma);
        return std::tuple<Rational2Vec, Rational2Vec, Rational2Vec, Rational2Vec>(
            zbar, znext, Fz, Fzbar);
    };

    auto [zbar0, z1, Fz0, Fzbar0] = step(z0);
    auto [zbar1, z2, Fz1, Fzbar1] = step(z1);

    check_vec(rep, "zbar0", Rational2Vec{Rational(215, 29), Rational(465, 29)}, zbar0);
    check_vec(rep, "z1", Rational2Vec{Rational(3245, 1682), Rational(26745, 1682)}, z1);
    check_vec(rep, "zbar1",
              Rational2Vec{Rational(-447965, 97556), Rational(1899785, 97556)}, zbar1);
    check_vec(rep, "z2",
              Rational2Vec{Rational(-53118995, 5658248), Rational(87834005, 5658248)}, z2);

    const Rational V0 = lyapunov_V_exact(gamma, z0, zbar0, z1, Fz0, Fzbar0);
    const Rational V1 = lyapunov_V_exact(gamma, z1, zbar1, z2, Fz1, Fzbar1);
    check_scalar(rep, "V0", Rational(5875000, 841), V0);
    check_scalar(rep, "V1", Rational("12676046875/1414562"), V1);
    rep.assertions.push_back({"V1 > V0", "true", V1 > V0 ? "true" : "false", V1 > V0});
    rep.monotonicity_violated = V1 > V0;

    // Spectral radius of the combined float iteration matrix
    // C = (I+gB)^{-1} (I - gA (I+gB)^{-1} (I - gA)), from its characteristic
    // polynomial; the pair of eigenvalues is complex so |lambda| = sqrt(det).
    const double g = 0.1;
    const double A[2][2] = {{0.0, 9.0}, {-9.0, 0.0}};
    const double B[2][2] = {{0.0, -4.0}, {4.0, 0.0}};
    double R[2][2];
    {
        const double a = 1.0 + g * B[0][0], b = g * B[0][1];
        const double c = g * B[1][0], d = 1.0 + g * B[1][1];
        const double det = a * d - b * c;
        R[0][0] = d / det;
        R[0][1] = -b / det;
        R[1][0] = -c / det;
        R[1][1] = a / det;
    }
    auto mul = [](const double X[2][2], const double Y[2][2], double Z[2][2]) {
        double t[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t[i][j] = X[i][0] * Y[0][j] + X[i][1] * Y[1][j];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) Z[i][j] = t[i][j];
    };
    double inner[2][2] = {{1.0 - g * A[0][0], -g * A[0][1]},
                          {-g * A[1][0], 1.0 - g * A[1][1]}};
    double t1m[2][2];
    mul(R, inner, t1m);  // (I+gB)^{-1}(I-gA)
    double t2m[2][2];
    mul(A, t1m, t2m);  // A (...)
    double outer[2][2] = {{1.0 - g * t2m[0][0], -g * t2m[0][1]},
                          {-g * t2m[1][0], 1.0 - g * t2m[1][1]}};
    double C[2][2];
    mul(R, outer, C);
    const double tr = C[0][0] + C[1][1];
    const double det = C[0][0] * C[1][1] - C[0][1] * C[1][0];
    const double disc = tr * tr - 4.0 * det;
    const double radius =
        disc >= 0.0 ? std::max(std::abs((tr + std::sqrt(disc)) / 2.0),
                               std::abs((tr - std::sqrt(disc)) / 2.0))
                    : std::sqrt(det);
    const bool radius_ok = std::abs(radius - 1.132596) <= 1e-5;
    rep.assertions.push_back({"spectral_radius(C) ~ 1.132596", "1.132596",
                              std::to_string(radius), radius_ok});
    return rep;
}

std::pair<double, double> rate_quotients(double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw std::domain_error("rate_quotients: x must lie in (0, 1)");
    }
    const double root = std::sqrt(5.0 - 4.0 * x * x) - 1.0;
    const double q1 = (1.0 / 3.0) * std::sqrt(2.0 * (1.0 - x * x) / root);
    const double q2 = std::sqrt(2.0 * (1.0 - x) / (root * (3.0 + 2.0 * x * x)));
    return {q1, q2};
}

void print_report(const CounterexampleReport& report, std::ostream& os) {
    os << report.title << "\n";
    for (const auto& a : report.assertions) {
        os << "  [" << (a.pass ? "PASS" : "FAIL") << "] " << a.name
           << ": expected " << a.expected << ", computed " << a.computed << "\n";
    }
    os << "  => " << (report.all_pass() ? "all assertions hold" : "MISMATCH") << "\n";
}

void write_verdict_file(const std::vector<CounterexampleReport>& reports,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open verdict file: " + path);
    out << "name,expected,computed,pass\n";
    for (const auto& rep : reports) {
        for (const auto& a : rep.assertions) {
            out << a.name << "," << a.expected << "," << a.computed << ","
                << (a.pass ? "true" : "false") << "\n";
        }
    }
}

}  // namespace flexkit
