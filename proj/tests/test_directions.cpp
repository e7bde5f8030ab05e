#include <doctest.h>

#include <chrono>
#include <cmath>

#include "flexkit/directions.hpp"
#include "flexkit/generators.hpp"
#include "flexkit/rng.hpp"
#include "flexkit/solvers.hpp"
#include "flexkit/spectral.hpp"

using namespace flexkit;

namespace {

Point random_point(RngStream& rng, std::size_t n, double scale = 1.0) {
    Point z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = scale * rng.normal();
    return z;
}

// Dense reference: apply H = I + (S - Y) G^{-1} B^T to r by explicitly
// forming the n-by-m blocks and solving the small system with Gaussian
// elimination written independently of the library path.
Point dense_aa_oracle(const std::deque<Point>& S, const std::deque<Point>& Y,
                      const Point& r, AndersonType type) {
    const std::size_t m = S.size();
    const std::size_t n = r.size();
    std::vector<std::vector<double>> G(m, std::vector<double>(m));
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += (type == AndersonType::type1 ? S[i][k] : Y[i][k]) * Y[j][k];
            }
            G[i][j] = s;
        }
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            s += (type == AndersonType::type1 ? S[i][k] : Y[i][k]) * r[k];
        }
        rhs[i] = s;
    }
    for (std::size_t k = 0; k < m; ++k) {  // naive elimination, no pivoting
        for (std::size_t i = k + 1; i < m; ++i) {
            const double f = G[i][k] / G[k][k];
            for (std::size_t j = k; j < m; ++j) G[i][j] -= f * G[k][j];
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<double> u(m);
    for (std::size_t i = m; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t j = i + 1; j < m; ++j) s -= G[i][j] * u[j];
        u[i] = s / G[i][i];
    }
    Point d = -r;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < n; ++k) d[k] -= u[j] * (S[j][k] - Y[j][k]);
    return d;
}

}  // namespace

TEST_CASE("buffer semantics: seed, push, evict, degenerate restart") {
    DirectionBuffer buf(2);
    CHECK_THROWS_AS(buf.push(Point{1.0}, Point{1.0}), std::logic_error);

    buf.seed(Point{0.0}, Point{1.0});
    CHECK(buf.push(Point{1.0}, Point{0.5}));
    CHECK(buf.size() == 1);
    CHECK(buf.push(Point{2.0}, Point{0.25}));
    CHECK(buf.size() == 2);
    CHECK(buf.push(Point{4.0}, Point{0.125}));
    CHECK(buf.size() == 2);  // oldest pair evicted
    CHECK(buf.secants_s()[0][0] == 1.0);
    CHECK(buf.secants_s()[1][0] == 2.0);

    // Identical consecutive iterate: pair rejected, buffer restarted.
    CHECK_FALSE(buf.push(Point{4.0}, Point{0.125}));
    CHECK(buf.size() == 0);
    // New pairs can still accumulate afterwards.
    CHECK(buf.push(Point{5.0}, Point{0.0625}));
    CHECK(buf.size() == 1);
}

TEST_CASE("empty buffer gives the negated residual") {
    DirectionBuffer buf(3);
    Point r{1.0, -2.0, 3.0};
    bool fb = true;
    Point d = aa_direction(buf, r, AndersonType::type1, &fb);
    CHECK_FALSE(fb);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d[i] == -r[i]);
}

TEST_CASE("type-II memory-one update matches its closed form") {
    DirectionBuffer buf(1);
    buf.seed(Point{0.0, 0.0}, Point{1.0, 2.0});
    buf.push(Point{1.0, 0.5}, Point{0.2, 1.0});
    const Point s{1.0, 0.5}, y{-0.8, -1.0};
    Point r{0.3, -0.7};
    Point d = aa_direction(buf, r, AndersonType::type2);
    const double coef = dot(y, r) / dot(y, y);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(d[i] == doctest::Approx(-r[i] - (s[i] - y[i]) * coef).epsilon(1e-13));
    }
}

TEST_CASE("type-I and type-II coincide when the single secant has s = y") {
    DirectionBuffer buf1(1), buf2(1);
    Point z0{0.0, 0.0, 0.0}, r0{1.0, 1.0, 1.0};
    Point z1{0.5, -0.25, 1.0};
    // Choose r1 so that y = r1 - r0 equals s = z1 - z0.
    Point r1 = r0 + (z1 - z0);
    buf1.seed(z0, r0);
    buf1.push(z1, r1);
    buf2.seed(z0, r0);
    buf2.push(z1, r1);
    RngStream rng(5);
    Point r = random_point(rng, 3);
    Point d1 = aa_direction(buf1, r, AndersonType::type1);
    Point d2 = aa_direction(buf2, r, AndersonType::type2);
    CHECK(norm(d1 - d2) <= 1e-12 * (1.0 + norm(d1)));
}

TEST_CASE("Anderson directions match a dense multisecant oracle") {
    RngStream rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 3;
        DenseMatrix M(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) M(i, j) = rng.normal() + (i == j ? 3.0 : 0.0);
        Point b = random_point(rng, n);
        auto R = [&](const Point& z) { return matvec(M, z) - b; };

        DirectionBuffer buf(2);
        Point z = random_point(rng, n);
        buf.seed(z, R(z));
        std::deque<Point> S, Y;
        for (int step = 0; step < 2; ++step) {
            Point zn = random_point(rng, n);
            S.push_back(zn - z);
            Y.push_back(R(zn) - R(z));
            buf.push(zn, R(zn));
            z = zn;
        }
        Point r = R(z);
        for (AndersonType type : {AndersonType::type1, AndersonType::type2}) {
            bool fb = false;
            Point d = aa_direction(buf, r, type, &fb);
            if (fb) continue;
            Point ref = dense_aa_oracle(S, Y, r, type);
            CHECK(norm(d - ref) <= 1e-9 * (1.0 + norm(ref)));
        }
    }
}

TEST_CASE("multisecant identity H y_j = s_j holds for both variants") {
    RngStream rng(13);
    const std::size_t n = 6, m = 3;
    DirectionBuffer buf(m);
    Point z = random_point(rng, n);
    Point r = random_point(rng, n);
    buf.seed(z, r);
    for (std::size_t i = 0; i < m; ++i) {
        z = z + random_point(rng, n);
        r = r + random_point(rng, n);
        buf.push(z, r);
    }
    for (AndersonType type : {AndersonType::type1, AndersonType::type2}) {
        for (std::size_t j = 0; j < m; ++j) {
            // H y = -(direction at residual y); compare with s.
            bool fb = false;
            Point Hy = -1.0 * aa_direction(buf, buf.secants_y()[j], type, &fb);
            REQUIRE_FALSE(fb);
            CHECK(norm(Hy - buf.secants_s()[j]) <=
                  1e-8 * (1.0 + norm(buf.secants_s()[j])));
        }
    }
}

TEST_CASE("singular inner systems fall back to the negated residual") {
    DirectionBuffer buf(2);
    buf.seed(Point{0.0, 0.0}, Point{1.0, 0.0});
    // y orthogonal to s makes S^T Y singular for type-I.
    buf.push(Point{1.0, 0.0}, Point{1.0, 1.0});  // s = e1, y = e2
    Point r{2.0, 3.0};
    bool fb = false;
    Point d = aa_direction(buf, r, AndersonType::type1, &fb);
    CHECK(fb);
    CHECK(d[0] == -2.0);
    CHECK(d[1] == -3.0);
}

TEST_CASE("directions stay cheap in high dimension") {
    const std::size_t n = 200000;
    DirectionBuffer buf(3);
    RngStream rng(17);
    Point z = random_point(rng, n);
    Point r = random_point(rng, n);
    buf.seed(z, r);
    for (int i = 0; i < 3; ++i) {
        z = z + random_point(rng, n);
        r = r + random_point(rng, n);
        buf.push(z, r);
    }
    const auto t0 = std::chrono::steady_clock::now();
    Point d = aa_direction(buf, r, AndersonType::type2);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    CHECK(d.size() == n);
    CHECK(ms < 1000.0);  // O(n m) work, far below anything quadratic in n
}

TEST_CASE("regularized Newton direction") {
    SUBCASE("identity operator closed form") {
        ProblemInstance inst;
        inst.dimension = 3;
        inst.F = [](const Point& z) { return z; };
        inst.lipschitz = 1.0;
        inst.jacobian = [](const Point&) { return DenseMatrix::identity(3); };
        Point z{3.0, 0.0, -4.0};  // ||z|| = 5
        const double c = 0.7;
        Point d = newton_reg_direction(inst, z, c);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(d[i] == doctest::Approx(-z[i] / (c * 5.0 + 1.0)).epsilon(1e-13));
        }
    }

    SUBCASE("zero right-hand side at the solution") {
        ProblemInstance inst = gen_quadratic_minimax(3, 1e-2, 19);
        Point d = newton_reg_direction(inst, *inst.known_solution, 1.0);
        CHECK(norm(d) == 0.0);
    }

    SUBCASE("affine monotone bound ||d|| <= ||F|| / sigma_min") {
        RngStream rng(23);
        ProblemInstance inst = gen_quadratic_minimax(4, 1e-1, 29);
        DenseMatrix M = (*inst.jacobian)(Point(8));
        const double smin = smallest_singular_value(M);
        for (int t = 0; t < 50; ++t) {
            Point z = random_point(rng, 8, 2.0);
            Point Fz = inst.probe_F(z);
            Point d = newton_reg_direction(inst, z, 1.0, &Fz);
            CHECK(norm(d) <= norm(Fz) / smin + 1e-8);
        }
    }

    SUBCASE("requires jacobian and unconstrained g") {
        ProblemInstance game = gen_bilinear_game(2, 2);
        CHECK_THROWS_AS(newton_reg_direction(game, Point(4), 1.0), std::invalid_argument);
        ProblemInstance nojac;
        nojac.dimension = 1;
        nojac.F = [](const Point& z) { return z; };
        nojac.lipschitz = 1.0;
        CHECK_THROWS_AS(newton_reg_direction(nojac, Point{1.0}, 1.0), std::invalid_argument);
    }
}

TEST_CASE("safeguard clipping") {
    Point d{3.0, 4.0};  // norm 5
    Point r{0.0, 10.0};
    CHECK(norm(safeguard(d, r, 1.0) - d) == 0.0);  // bound 10, inside

    Point clipped = safeguard(d, r, 0.25);  // bound 2.5 < 5
    CHECK(norm(clipped) == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(clipped[0] * d[1] == doctest::Approx(clipped[1] * d[0]).epsilon(1e-12));

    Point zero = safeguard(d, Point{0.0, 0.0}, 2.0);
    CHECK(norm(zero) == 0.0);
}

TEST_CASE("superlinearity tracker") {
    SuperlinTracker tracker;
    CHECK(tracker.record(0.0, 2.0) == 0.0);
    CHECK(tracker.record(2.0, 2.0) == 1.0);
    CHECK(tracker.record(1.0, 0.0) == 0.0);  // solution reached convention
    CHECK(tracker.ratios().size() == 3);
}

TEST_CASE("Newton directions drive the ratio toward zero on affine instances") {
    ProblemInstance inst = gen_quadratic_minimax(4, 1e-2, 37);
    RegularizedNewtonDirection dir(1.0);
    Point z = default_start(inst);
    SuperlinTracker tracker;
    for (int k = 0; k < 30; ++k) {
        Point Fz = inst.probe_F(z);
        if (norm(Fz) == 0.0) break;
        Point d = dir.compute(inst, z, Fz);
        tracker.record(norm(inst.probe_F(z + d)), norm(Fz));
        z = z + d;
    }
    REQUIRE(tracker.ratios().size() >= 5);
    CHECK(tracker.ratios().back() < 1e-3);
    CHECK(tracker.ratios().back() < tracker.ratios().front());
}
