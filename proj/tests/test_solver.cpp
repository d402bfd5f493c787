#include "pyro/solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace pyro;

namespace {

PhysicalParams inert_params() {
    PhysicalParams p;
    p.c_e = 0.0;
    p.c_x = 0.0;
    p.r_o = 0.1;
    p.kappa1 = 1.0;
    p.kappa4 = 0.0;
    p.t_ambient = 300.0;
    p.u_loss = 0.0;
    p.d_b = 0.0;
    p.a_d = 0.0;
    p.radiation_enabled = false;
    return p;
}

Field constant_field(int nx, double v) {
    Field f(nx, 1, v);
    return f;
}

Snapshot uniform_state(const Grid& g, double T, double se, double sx) {
    Snapshot s(g, Fidelity::LF);
    for (int i = 0; i < g.size(); ++i) {
        s.T[i] = T;
        s.S_e[i] = se;
        s.S_x[i] = sx;
    }
    return s;
}

}  // namespace

TEST_CASE("endothermic rate matches scalar evaluations") {
    PhysicalParams p = inert_params();
    Field T = constant_field(4, 700.0);

    p.c_e = 1.0;
    p.b_e = 0.0;
    Field r = endothermic_rate(T, p);
    for (int i = 0; i < r.size(); ++i) CHECK(r[i] == doctest::Approx(1.0).epsilon(1e-15));

    p.b_e = 500.0;
    Field T500 = constant_field(3, 500.0);
    r = endothermic_rate(T500, p);
    CHECK(r[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    p.c_e = 0.0;
    r = endothermic_rate(T500, p);
    CHECK(r.max() == 0.0);

    SUBCASE("non-positive temperature rejected") {
        Field bad = constant_field(3, 500.0);
        bad[1] = 0.0;
        CHECK_THROWS_AS(endothermic_rate(bad, p), Error);
    }
}

TEST_CASE("endothermic rate is monotone in temperature") {
    PhysicalParams p = inert_params();
    p.c_e = 2.0;
    p.b_e = 4000.0;
    Field lo = constant_field(16, 400.0), hi = constant_field(16, 400.0);
    for (int i = 0; i < 16; ++i) {
        lo[i] = 300.0 + 40.0 * i;
        hi[i] = lo[i] + 25.0;
    }
    const Field r_lo = endothermic_rate(lo, p);
    const Field r_hi = endothermic_rate(hi, p);
    for (int i = 0; i < 16; ++i) CHECK(r_hi[i] >= r_lo[i]);
}

TEST_CASE("exothermic rate: harmonic form, limits, scalar value") {
    PhysicalParams p = inert_params();

    SUBCASE("k == r_o gives half rate") {
        p.c_x = 0.3;
        p.b_x = 0.0;  // k = c_x everywhere
        p.r_o = 0.3;
        Field T = constant_field(5, 800.0);
        Field r = exothermic_rate(T, p);
        CHECK(r[0] == doctest::Approx(0.15).epsilon(1e-14));
    }

    SUBCASE("mass-transfer limit") {
        p.c_x = 1e12;
        p.b_x = 0.0;
        p.r_o = 0.25;
        Field T = constant_field(2, 600.0);
        Field r = exothermic_rate(T, p);
        CHECK(r[0] == doctest::Approx(0.25).epsilon(1e-9));
    }

    SUBCASE("scalar evaluation") {
        p.c_x = 2.0;
        p.b_x = 600.0;
        p.r_o = 0.5;
        Field T = constant_field(1, 600.0);
        Field r = exothermic_rate(T, p);
        const double k = 2.0 * std::exp(-1.0);
        CHECK(r[0] == doctest::Approx(k * 0.5 / (k + 0.5)).epsilon(1e-14));
    }

    SUBCASE("bounded by min(k, r_o) pointwise") {
        p.c_x = 3.0;
        p.b_x = 2500.0;
        p.r_o = 0.05;
        Field T = constant_field(32, 300.0);
        for (int i = 0; i < 32; ++i) T[i] = 300.0 + 50.0 * i;
        Field r = exothermic_rate(T, p);
        for (int i = 0; i < 32; ++i) {
            const double k = 3.0 * std::exp(-2500.0 / T[i]);
            CHECK(r[i] <= std::min(k, 0.05) + 1e-15);
            CHECK(r[i] >= 0.0);
        }
    }
}

TEST_CASE("diffusion coefficient terms") {
    Grid g = Grid::make_1d(8, 1.0, 0.1, 1.0);
    PhysicalParams p = inert_params();
    p.d_b = 0.07;
    Field T = constant_field(8, 600.0);
    Field Dx(g), Dy(g);

    SUBCASE("only buoyancy survives") {
        diffusion_coefficient(T, {3.0, 0.0}, p, g, Dx, Dy);
        CHECK(Dx[0] == doctest::Approx(0.07));
    }

    SUBCASE("zero velocity removes shear") {
        p.a_d = 0.5;
        p.gamma_d = 0.2;
        diffusion_coefficient(T, {0.0, 0.0}, p, g, Dx, Dy);
        CHECK(Dx[0] == doctest::Approx(0.07));
    }

    SUBCASE("Rosseland term at 1000 K") {
        p.radiation_enabled = true;
        p.sigma_b = 5.67e-8;
        p.k_d = 50.0;
        p.fire_depth = 10.0;  // denominator is 1 to machine precision
        p.rho_g = 1.2;
        p.c_pg = 1005.0;
        Field hot = constant_field(8, 1000.0);
        diffusion_coefficient(hot, {0.0, 0.0}, p, g, Dx, Dy);
        const double expected = 0.07 + 5.33 * 5.67e-8 * 1e9 / (1.2 * 1005.0);
        CHECK(Dx[0] == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("radiation with zero optical depth is a config error") {
        p.radiation_enabled = true;
        p.k_d = 0.0;
        CHECK_THROWS_AS(diffusion_coefficient(T, {0.0, 0.0}, p, g, Dx, Dy), Error);
    }
}

TEST_CASE("step: uniform ambient state is a fixed point") {
    Grid g = Grid::make_1d(20, 1.0, 0.1, 1.0);
    PhysicalParams p = inert_params();
    Snapshot s = uniform_state(g, 300.0, 0.1, 1.0);
    Snapshot next = step(s, p, {0.0, 0.0}, 0.1);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(next.T[i] == 300.0);
        CHECK(next.S_e[i] == 0.1);
        CHECK(next.S_x[i] == 1.0);
    }
}

TEST_CASE("step: pure advection translates a bump (characteristics oracle)") {
    PhysicalParams p = inert_params();
    const double u = 0.8;

    auto run = [&](int nx) {
        Grid g = Grid::make_1d(nx, 100.0 / nx, 0.5 * (100.0 / nx) / u, 25.0);
        Snapshot s = uniform_state(g, 300.0, 0.0, 1.0);
        for (int i = 0; i < nx; ++i) {
            const double x = g.x(i);
            s.T[i] = 300.0 + 50.0 * std::exp(-(x - 30.0) * (x - 30.0) / 50.0);
        }
        const Field initial = s.T;
        const long steps = 40 * nx / 100;  // fixed final time across resolutions
        Snapshot cur = s;
        StepOptions opts;
        opts.boundary = BoundaryMode::Periodic;
        for (long n = 0; n < steps; ++n) cur = step(cur, p, {u, 0.0}, g.dt, opts);
        const Field exact = oracles::advect_exact_periodic(initial, g, u, double(steps) * g.dt);
        return l2_diff(cur.T, exact) / l2_norm(exact);
    };

    const double e1 = run(100);
    const double e2 = run(200);
    const double e4 = run(400);
    CHECK(e1 < 0.05);  // first-order upwind error on a resolved bump
    const double rate12 = std::log2(e1 / e2);
    const double rate24 = std::log2(e2 / e4);
    CHECK(rate12 >= 0.8);
    CHECK(rate24 >= 0.8);
}

TEST_CASE("step: pure relaxation decays monotonically toward ambient") {
    Grid g = Grid::make_1d(10, 1.0, 0.1, 1.0);
    PhysicalParams p = inert_params();
    p.kappa4 = 0.05;
    p.u_loss = 10.0;  // kappa4*U = 0.5 1/s
    Snapshot s = uniform_state(g, 700.0, 0.0, 1.0);
    double prev = 700.0;
    for (int n = 0; n < 120; ++n) {
        s = step(s, p, {0.0, 0.0}, 0.1);
        CHECK(s.T[3] < prev);
        CHECK(s.T[3] >= 300.0);
        prev = s.T[3];
    }
    CHECK(prev == doctest::Approx(300.0).epsilon(0.01));
}

TEST_CASE("step: CFL violation raises a stability error with the ratio") {
    Grid g = Grid::make_1d(10, 1.0, 0.1, 1.0);
    PhysicalParams p = inert_params();
    Snapshot s = uniform_state(g, 400.0, 0.0, 1.0);
    try {
        step(s, p, {25.0, 0.0}, 0.1);  // advection ratio 2.5
        FAIL("expected StabilityError");
    } catch (const StabilityError& e) {
        CHECK(e.ratio() == doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("step: periodic transport conserves the discrete integral of T") {
    Grid g = Grid::make_1d(64, 1.0, 0.05, 1.0);
    PhysicalParams p = inert_params();
    p.d_b = 0.4;
    Snapshot s = uniform_state(g, 300.0, 0.0, 1.0);
    for (int i = 0; i < 64; ++i) s.T[i] = 300.0 + 90.0 * std::sin(2.0 * M_PI * g.x(i) / g.lx) + 40.0 * (i % 3);
    double total0 = 0.0;
    for (double v : s.T.v) total0 += v;
    StepOptions opts;
    opts.boundary = BoundaryMode::Periodic;
    for (int n = 0; n < 200; ++n) s = step(s, p, {1.5, 0.0}, 0.05, opts);
    double total = 0.0;
    for (double v : s.T.v) total += v;
    CHECK(std::abs(total - total0) <= 1e-9 * std::abs(total0));
}

TEST_CASE("step: 2D periodic transport conserves the discrete integral of T") {
    Grid g = Grid::make_2d(16, 12, 1.0, 1.0, 0.05, 1.0);
    PhysicalParams p = inert_params();
    p.d_b = 0.3;
    Snapshot s(g, Fidelity::LF);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            s.T.at(i, j) = 300.0 + 10.0 * i + 7.0 * j;
            s.S_e.at(i, j) = 0.0;
            s.S_x.at(i, j) = 1.0;
        }
    double total0 = 0.0;
    for (double v : s.T.v) total0 += v;
    StepOptions opts;
    opts.boundary = BoundaryMode::Periodic;
    for (int n = 0; n < 100; ++n) s = step(s, p, {1.2, -0.8}, 0.05, opts);
    double total = 0.0;
    for (double v : s.T.v) total += v;
    CHECK(std::abs(total - total0) <= 1e-9 * std::abs(total0));
}

TEST_CASE("step: fuel depletion is monotone and non-negative") {
    Grid g = Grid::make_1d(40, 2.0, 0.2, 1.0);
    PhysicalParams p = inert_params();
    p.c_e = 5.0;
    p.b_e = 2000.0;
    p.c_x = 8.0;
    p.b_x = 3000.0;
    p.r_o = 0.5;
    p.kappa2 = 100.0;
    p.kappa3 = 200.0;
    Snapshot s = uniform_state(g, 300.0, 0.12, 1.0);
    for (int i = 0; i < g.nx; ++i) s.T[i] = 300.0 + 900.0 * std::exp(-(g.x(i) - 40.0) * (g.x(i) - 40.0) / 100.0);
    for (int n = 0; n < 50; ++n) {
        Snapshot next = step(s, p, {0.4, 0.0}, 0.2);
        for (int i = 0; i < g.size(); ++i) {
            CHECK(next.S_e[i] <= s.S_e[i]);
            CHECK(next.S_x[i] <= s.S_x[i]);
            CHECK(next.S_e[i] >= 0.0);
            CHECK(next.S_x[i] >= 0.0);
        }
        s = next;
    }
}

TEST_CASE("simulate: without kinetics the state only relaxes") {
    Grid g = Grid::make_1d(30, 1.0, 0.1, 2.0);
    PhysicalParams p = inert_params();
    p.kappa4 = 1e-3;
    p.u_loss = 10.0;
    IgnitionSpec ig;
    ig.absent = true;
    ig.amplitude = 0.0;
    ParamVector z({"u_w", "S_e0"}, {0.0, 0.08});
    Snapshot s = simulate(g, p, z, ig);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(s.T[i] == doctest::Approx(300.0).epsilon(1e-12));
        CHECK(s.S_e[i] == doctest::Approx(0.08).epsilon(1e-12));
        CHECK(s.S_x[i] == 1.0);
    }
}

TEST_CASE("simulate: deterministic bitwise") {
    Grid g = Grid::make_1d(50, 2.0, 0.1, 10.0);
    PhysicalParams p = inert_params();
    p.c_e = 3.0;
    p.b_e = 3500.0;
    p.c_x = 10.0;
    p.b_x = 5000.0;
    p.r_o = 0.3;
    p.kappa2 = 50.0;
    p.kappa3 = 400.0;
    p.kappa4 = 1e-3;
    p.u_loss = 10.0;
    p.d_b = 0.2;
    p.c_w = 0.05;
    IgnitionSpec ig;
    ig.amplitude = 700.0;
    ig.sigma = 5.0;
    ig.center_x = 20.0;
    ParamVector z({"u_w", "S_e0"}, {4.0, 0.1});
    Snapshot a = simulate(g, p, z, ig);
    Snapshot b = simulate(g, p, z, ig);
    CHECK(a.T.v == b.T.v);
    CHECK(a.S_e.v == b.S_e.v);
    CHECK(a.S_x.v == b.S_x.v);
}

TEST_CASE("simulate: divergence is reported with a step index") {
    Grid g = Grid::make_1d(16, 1.0, 0.45, 10.0);
    PhysicalParams p = inert_params();
    p.c_x = 1e3;
    p.b_x = 0.0;
    p.r_o = 1e9;          // enormous release rate
    p.kappa3 = 1e308;     // forces overflow on the first release
    IgnitionSpec ig;
    ig.amplitude = 900.0;
    ig.sigma = 3.0;
    ig.center_x = 8.0;
    ParamVector z({"u_w", "S_e0"}, {0.0, 0.0});
    try {
        simulate(g, p, z, ig);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.step() >= 1);
    }
}
