#include <doctest.h>

#include <cmath>

#include "flexkit/generators.hpp"
#include "flexkit/libsvm.hpp"
#include "flexkit/lyapunov.hpp"
#include "flexkit/rng.hpp"
#include "flexkit/solvers.hpp"

#include <sstream>

using namespace flexkit;

namespace {

// Example B.1 instance: F(x, y) = (A y, -A^T x) with A = [[7,6],[1,0]],
// g the indicator of [-7,6]^2 x [1,8]^2.
ProblemInstance b1_instance() {
    ProblemInstance inst;
    inst.dimension = 4;
    DenseMatrix A(2, 2, {7.0, 6.0, 1.0, 0.0});
    inst.F = [A](const Point& z) {
        Point y{z[2], z[3]};
        Point x{z[0], z[1]};
        Point Ay = matvec(A, y);
        Point ATx = matvec_transpose(A, x);
        return Point{Ay[0], Ay[1], -ATx[0], -ATx[1]};
    };
    inst.prox = BoxProx{{-7.0, -7.0, 1.0, 1.0}, {6.0, 6.0, 8.0, 8.0}};
    inst.lipschitz = 9.250910078995347;  // || [[0,A],[-A^T,0]] ||
    return inst;
}

Point random_point(RngStream& rng, std::size_t n, double scale = 1.0) {
    Point z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = scale * rng.normal();
    return z;
}

}  // namespace

TEST_CASE("T1 reproduces the first proximal step of the boxed instance") {
    ProblemInstance inst = b1_instance();
    Point z0{-1.0, -7.0, -1.0, 7.0};
    Point zbar = t1(inst, 0.1, z0);
    CHECK(zbar[0] == doctest::Approx(-4.5).epsilon(1e-14));
    CHECK(zbar[1] == doctest::Approx(-6.9).epsilon(1e-14));
    CHECK(zbar[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(zbar[3] == doctest::Approx(6.4).epsilon(1e-14));
    CHECK(inst.counters.f_evals == 1);
    CHECK(inst.counters.prox_evals == 1);

    SUBCASE("residual at z0 from the same step") {
        Point r = residual_R(inst, 0.1, z0);
        CHECK(r[0] == doctest::Approx(35.0).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(r[2] == doctest::Approx(-20.0).epsilon(1e-12));
        CHECK(r[3] == doctest::Approx(6.0).epsilon(1e-12));
    }
}

TEST_CASE("T2 on the boxed instance gives the Tseng-coincident EG midpoint") {
    // With z0 as in the fixture, T2 applies the box prox to z0 - gamma F(zbar).
    ProblemInstance inst = b1_instance();
    Point z0{-1.0, -7.0, -1.0, 7.0};
    Point zbar = t1(inst, 0.1, z0);
    Point zplus = t2(inst, 0.1, z0, &zbar);
    // Hand-evaluated: z0 - 0.1 F(zbar) = (-5.54, -7.1, -4.84, 4.3), clamped.
    CHECK(zplus[0] == doctest::Approx(-5.54).epsilon(1e-14));
    CHECK(zplus[1] == doctest::Approx(-7.0).epsilon(1e-14));
    CHECK(zplus[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(zplus[3] == doctest::Approx(4.3).epsilon(1e-14));
}

TEST_CASE("T1/T2 fix points of g = 0 instances and linear expansion") {
    ProblemInstance inst = gen_quadratic_minimax(3, 0.0, 11);
    const double gamma = 0.9 / inst.lipschitz;

    SUBCASE("solutions are fixed points") {
        Point zstar = *inst.known_solution;
        Point zbar = t1(inst, gamma, zstar);
        Point zplus = t2(inst, gamma, zstar, &zbar);
        CHECK(norm(zbar - zstar) == 0.0);
        CHECK(norm(zplus - zstar) == 0.0);
    }

    SUBCASE("g = 0 reduces T1 to the forward step and T2 to its composition") {
        RngStream rng(5);
        DenseMatrix M = (*inst.jacobian)(Point(6));
        Point zstar = *inst.known_solution;
        for (int t = 0; t < 20; ++t) {
            Point z = random_point(rng, 6, 2.0);
            Point zbar = t1(inst, gamma, z);
            Point expect_bar = z - gamma * matvec(M, z - zstar);
            CHECK(norm(zbar - expect_bar) <= 1e-12 * (1.0 + norm(expect_bar)));
            Point zplus = t2(inst, gamma, z, &zbar);
            Point expect_plus = z - gamma * matvec(M, expect_bar - zstar);
            CHECK(norm(zplus - expect_plus) <= 1e-12 * (1.0 + norm(expect_plus)));
        }
    }

    SUBCASE("residual reduces to F when g = 0") {
        RngStream rng(6);
        Point z = random_point(rng, 6, 2.0);
        Point r = residual_R(inst, gamma, z);
        Point Fz = inst.probe_F(z);
        CHECK(norm(r - Fz) <= 1e-9 * (1.0 + norm(Fz)));
    }
}

TEST_CASE("alpha coefficient") {
    CHECK(alpha_coeff(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(alpha_coeff(0.5, 1.0) == doctest::Approx(0.125).epsilon(1e-14));
    for (double L : {0.3, 1.0, 7.0}) {
        const double g = 0.9 / L;
        const double expect = (0.81 / (2.0 * L * L)) * (std::sqrt(5.0 - 3.24) - 1.0);
        CHECK(alpha_coeff(g, L) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK_THROWS_AS(alpha_coeff(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("xi witness") {
    SUBCASE("g = 0 gives a zero witness") {
        ProblemInstance inst = gen_quadratic_minimax(3, 0.0, 2);
        const double gamma = 0.9 / inst.lipschitz;
        RngStream rng(9);
        Point z = random_point(rng, 6);
        StepResult s = step_eg(inst, gamma, z);
        Point xi = xi_witness(gamma, z, s.znext, s.F_zbar);
        CHECK(norm(xi) <= 1e-9 * (1.0 + norm(s.F_zbar)));
    }
    SUBCASE("fixed point gives -F(z*)") {
        Point z{2.0, -1.0};
        Point Fz{0.5, 0.25};
        Point xi = xi_witness(0.1, z, z, Fz);
        CHECK(xi[0] == -0.5);
        CHECK(xi[1] == -0.25);
    }
    SUBCASE("hand arithmetic on the boxed instance step 0") {
        ProblemInstance inst = b1_instance();
        Point z0{-1.0, -7.0, -1.0, 7.0};
        const double gamma = 0.1;
        StepResult s = step_eg(inst, gamma, z0);
        Point xi = xi_witness(gamma, z0, s.znext, s.F_zbar);
        // 10 (z0 - z1) - F(zbar0) with z1 = (-5.54, -7, 1, 4.3) and
        // F(zbar0) = (45.4, 1, 38.4, 27).
        CHECK(xi[0] == doctest::Approx(10.0 * (-1.0 + 5.54) - 45.4).epsilon(1e-12));
        CHECK(xi[1] == doctest::Approx(10.0 * (-7.0 + 7.0) - 1.0).epsilon(1e-12));
        CHECK(xi[2] == doctest::Approx(10.0 * (-1.0 - 1.0) - 38.4).epsilon(1e-12));
        CHECK(xi[3] == doctest::Approx(10.0 * (7.0 - 4.3) - 27.0).epsilon(1e-12));
    }
}

TEST_CASE("Lyapunov value on the reference counterexample triples") {
    ProblemInstance inst = b1_instance();
    const double gamma = 0.1;
    Point z0{-1.0, -7.0, -1.0, 7.0};
    StepResult s0 = step_tseng(inst, gamma, z0);
    const double V0 = lyapunov_V_with(gamma, z0, s0.zbar, s0.znext, s0.F_z, s0.F_zbar);
    CHECK(V0 == doctest::Approx(1662.0).epsilon(1e-12));

    StepResult s1 = step_tseng(inst, gamma, s0.znext);
    const double V1 =
        lyapunov_V_with(gamma, s0.znext, s1.zbar, s1.znext, s1.F_z, s1.F_zbar);
    CHECK(V1 == doctest::Approx(1187246.0 / 625.0).epsilon(1e-12));
    CHECK(V1 > V0);  // the Tseng monotonicity failure
}

TEST_CASE("Lyapunov collapses to ||F||^2 when g = 0") {
    RngStream rng(31);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ProblemInstance inst = gen_quadratic_minimax(4, seed % 2 ? 0.0 : 1e-3, seed);
        const double gamma = 0.9 / inst.lipschitz;
        Point z = random_point(rng, inst.dimension, 2.0);
        StepResult s = step_eg(inst, gamma, z);
        const double V = lyapunov_V_with(gamma, z, s.zbar, s.znext, s.F_z, s.F_zbar);
        const double F2 = norm_sq(s.F_z);
        CHECK(std::abs(V - F2) <= 1e-10 * (1.0 + F2));
    }
}

TEST_CASE("Lyapunov lower bound and zero characterization") {
    RngStream rng(77);
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 1000; ++seed) {
        ProblemInstance inst = seed % 3 == 0   ? gen_bilinear_game(3, seed)
                               : seed % 3 == 1 ? gen_quadratic_minimax(3, 0.0, seed)
                                               : gen_cournot_nash(4, seed);
        const double gamma = rng.uniform(0.05, 0.95) / inst.lipschitz;
        for (int t = 0; t < 25; ++t, ++checked) {
            Point z = random_point(rng, inst.dimension, 2.0);
            StepResult s = step_eg(inst, gamma, z);
            const double V = lyapunov_V_with(gamma, z, s.zbar, s.znext, s.F_z, s.F_zbar);
            const double bound = (1.0 - gamma * inst.lipschitz) / (gamma * gamma) *
                                 (norm_sq(s.znext - s.zbar) + norm_sq(s.znext - z));
            CHECK(V >= bound - 1e-10 * (1.0 + std::abs(V)));
            CHECK(V >= -1e-12 * (1.0 + std::abs(V)));
        }
    }

    ProblemInstance inst = gen_quadratic_minimax(5, 0.0, 123);
    Point zstar = *inst.known_solution;
    StepResult s = step_eg(inst, 0.9 / inst.lipschitz, zstar);
    const double Vstar =
        lyapunov_V_with(0.9 / inst.lipschitz, zstar, s.zbar, s.znext, s.F_z, s.F_zbar);
    CHECK(std::abs(Vstar) <= 1e-16 * (1.0 + norm_sq(zstar)));
}

TEST_CASE("natural and tangent residuals") {
    SUBCASE("g = 0 both equal ||F||") {
        ProblemInstance inst = gen_quadratic_minimax(3, 0.0, 21);
        RngStream rng(2);
        Point z = random_point(rng, 6);
        Point Fz = inst.probe_F(z);
        CHECK(natural_residual_with(inst, z, Fz) == doctest::Approx(norm(Fz)).epsilon(1e-14));
        auto tan = tangent_residual_with(inst, z, Fz);
        REQUIRE(tan.has_value());
        CHECK(*tan == doctest::Approx(norm(Fz)).epsilon(1e-14));
    }

    SUBCASE("solutions have zero natural residual") {
        ProblemInstance inst = gen_quadratic_minimax(3, 0.0, 22);
        CHECK(natural_residual(inst, *inst.known_solution) == 0.0);
    }

    SUBCASE("l1 coordinate cases") {
        ProblemInstance inst;
        inst.dimension = 1;
        inst.prox = L1Prox{1.0};
        inst.lipschitz = 1.0;

        // Absorbable gradient at z = 0.
        inst.F = [](const Point&) { return Point{0.5}; };
        auto t0 = tangent_residual(inst, Point{0.0});
        REQUIRE(t0.has_value());
        CHECK(*t0 == 0.0);

        // At z = 2 the only subgradient is +1.
        inst.F = [](const Point&) { return Point{3.0}; };
        auto t2v = tangent_residual(inst, Point{2.0});
        REQUIRE(t2v.has_value());
        CHECK(*t2v == doctest::Approx(4.0).epsilon(1e-14));
    }

    SUBCASE("tangent residual absent for box and simplex") {
        ProblemInstance inst = gen_bilinear_game(2, 4);
        CHECK_FALSE(tangent_residual(inst, Point(4, 0.25)).has_value());
        ProblemInstance c = gen_cournot_nash(3, 4);
        CHECK_FALSE(tangent_residual(c, Point(3, 1.0)).has_value());
    }

    SUBCASE("natural <= tangent on l1 instances") {
        std::istringstream in("+1 1:1 2:0.5\n-1 1:0.7 3:2\n+1 2:1\n");
        ProblemInstance inst = make_logistic_instance(parse_libsvm(in), 0.3);
        RngStream rng(8);
        for (int t = 0; t < 200; ++t) {
            Point z = random_point(rng, 3, 2.0);
            if (t % 3 == 0) z[t % 2] = 0.0;  // exercise the zero-coordinate case
            Point Fz = inst.probe_F(z);
            auto tan = tangent_residual_with(inst, z, Fz);
            REQUIRE(tan.has_value());
            CHECK(natural_residual_with(inst, z, Fz) <= *tan + 1e-10);
        }
    }
}

TEST_CASE("measure records obey the ordering chain and the V lower bound") {
    std::istringstream in("+1 1:1 2:0.5\n-1 1:0.7 3:2\n+1 2:1\n");
    ProblemInstance inst = make_logistic_instance(parse_libsvm(in), 0.25);
    const double gamma = 0.9 / inst.lipschitz;
    Point z(3, 0.4);
    std::optional<Point> xi;
    for (int k = 0; k < 100; ++k) {
        StepResult s = step_eg(inst, gamma, z);
        MeasureRecord m = measures_for_step(inst, gamma, z, s.zbar, s.znext, s.F_z,
                                            s.F_zbar, xi ? &*xi : nullptr);
        CHECK(m.V >= -1e-12 * (1.0 + std::abs(m.V)));
        REQUIRE(m.tangent_residual.has_value());
        CHECK(m.natural_residual <= *m.tangent_residual + 1e-10);
        if (k > 0) {
            REQUIRE(m.tseng_residual.has_value());
            CHECK(*m.tangent_residual <= *m.tseng_residual + 1e-10);
        } else {
            CHECK_FALSE(m.tseng_residual.has_value());
        }
        xi = xi_witness(gamma, z, s.znext, s.F_zbar);
        z = s.znext;
    }
}

TEST_CASE("measure chain along extragradient trajectories") {
    // natural <= tangent <= ||F + xi|| and ||F(z^{k+1}) + xi^{k+1}||^2 <= V_k.
    std::istringstream in("+1 1:1 2:0.5\n-1 1:0.7 3:2\n+1 2:1\n0 3:0.4\n");
    ProblemInstance inst = make_logistic_instance(parse_libsvm(in), 0.2);
    const double gamma = 0.9 / inst.lipschitz;
    Point z(3, 0.5);
    std::optional<Point> xi;
    double prev_V = 0.0;
    for (int k = 0; k < 300; ++k) {
        StepResult s = step_eg(inst, gamma, z);
        if (xi) {
            const double tseng_res = norm(s.F_z + *xi);
            const double nat = natural_residual_with(inst, z, s.F_z);
            auto tan = tangent_residual_with(inst, z, s.F_z);
            REQUIRE(tan.has_value());
            CHECK(nat <= *tan + 1e-10);
            CHECK(*tan <= tseng_res + 1e-10);
            CHECK(tseng_res * tseng_res <= prev_V + 1e-8);
        }
        prev_V = lyapunov_V_with(gamma, z, s.zbar, s.znext, s.F_z, s.F_zbar);
        xi = xi_witness(gamma, z, s.znext, s.F_zbar);
        z = s.znext;
    }
}
