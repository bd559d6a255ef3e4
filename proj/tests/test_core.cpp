#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ns1d/core.hpp"
#include "test_util.hpp"

using namespace ns1d;
using test::Lcg;

TEST_CASE("build_grid layout") {
    const MassGrid g = build_grid(1.0, 4);
    CHECK(g.dy == doctest::Approx(0.25).epsilon(1e-15));
    const Field n = g.nodes();
    REQUIRE(n.size() == 5);
    CHECK(n[0] == 0.0);
    CHECK(n[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(n[4] == doctest::Approx(1.0).epsilon(1e-15));

    const MassGrid g2 = build_grid(2.0, 2);
    const Field c = g2.centers();
    REQUIRE(c.size() == 2);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(0.0, 4), ConfigError);
    CHECK_THROWS_AS(build_grid(-1.0, 4), ConfigError);
    CHECK_THROWS_AS(build_grid(1.0, 1), ConfigError);
}

TEST_CASE("initial data validation") {
    const MassGrid g = build_grid(1.0, 8);
    const PhysParams p{1.0, 1.4};
    Field rho(8, 1.0), pi(8, 0.5), v(9, 0.0);

    CHECK_NOTHROW(make_initial_data(g, p, rho, v, pi));

    Field bad_rho = rho;
    bad_rho[3] = -0.1;
    CHECK_THROWS_AS(make_initial_data(g, p, bad_rho, v, pi), ConfigError);

    Field bad_pi = pi;
    bad_pi[0] = -1e-12;
    CHECK_THROWS_AS(make_initial_data(g, p, rho, v, bad_pi), ConfigError);

    Field bad_J(8, 1.0);
    bad_J[7] = 0.0;
    CHECK_THROWS_AS(make_initial_data(g, p, rho, v, pi, bad_J), ConfigError);

    Field bad_v = v;
    bad_v[8] = 1e-14;
    CHECK_THROWS_AS(make_initial_data(g, p, rho, bad_v, pi), ConfigError);

    CHECK_THROWS_AS(make_initial_data(g, PhysParams{0.0, 1.4}, rho, v, pi), ConfigError);
    CHECK_THROWS_AS(make_initial_data(g, PhysParams{1.0, 1.0}, rho, v, pi), ConfigError);

    // default J0 is all ones
    const InitialData d = make_initial_data(g, p, rho, v, pi);
    CHECK(d.j_floor() == 1.0);
}

TEST_CASE("conserved quantities on constant data") {
    const MassGrid g = build_grid(1.0, 16);
    const PhysParams p{1.0, 1.4};
    {
        const InitialData d = make_initial_data(g, p, Field(16, 1.0), Field(17, 0.0),
                                                Field(16, 0.0));
        const Conserved c = conserved_quantities(d);
        CHECK(c.ell0 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.m0 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.E0 == 0.0);
    }
    {
        const InitialData d = make_initial_data(g, p, Field(16, 0.0), Field(17, 0.0),
                                                Field(16, p.gamma - 1.0));
        const Conserved c = conserved_quantities(d);
        CHECK(c.ell0 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.m0 == 0.0);
        CHECK(c.E0 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("conserved quantities on a linear ramp") {
    // rho0 = y sampled at centers, J0 = 2: midpoint quadrature integrates
    // linear profiles exactly, so m0 = 1/2 and ell0 = 2 to roundoff
    const MassGrid g = build_grid(1.0, 32);
    const PhysParams p{1.0, 1.4};
    Field rho(32);
    for (int i = 0; i < 32; ++i) rho[i] = g.center(i);
    const InitialData d = make_initial_data(g, p, rho, Field(33, 0.0), Field(32, 0.0),
                                            Field(32, 2.0));
    const Conserved c = conserved_quantities(d);
    CHECK(c.ell0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.m0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.E0 == 0.0);
}

TEST_CASE("conserved quantities invariant under refinement for piecewise-constant data") {
    Lcg rng(71);
    const PhysParams p{0.7, 1.3};
    // 8 blocks of constant data, sampled on N = 64 and N = 128
    double rho_b[8], pi_b[8], J_b[8];
    for (int b = 0; b < 8; ++b) {
        rho_b[b] = rng.uniform(0.0, 2.0);
        pi_b[b] = rng.uniform(0.0, 3.0);
        J_b[b] = rng.uniform(0.5, 2.0);
    }
    auto build = [&](int N) {
        const MassGrid g = build_grid(1.0, N);
        Field rho(N), pi(N), J(N);
        for (int i = 0; i < N; ++i) {
            const int b = std::min(7, static_cast<int>(g.center(i) * 8.0));
            rho[i] = rho_b[b];
            pi[i] = pi_b[b];
            J[i] = J_b[b];
        }
        return conserved_quantities(
            make_initial_data(g, p, rho, Field(N + 1, 0.0), pi, J));
    };
    const Conserved a = build(64), b = build(128);
    CHECK(a.ell0 == doctest::Approx(b.ell0).epsilon(1e-13));
    CHECK(a.m0 == doctest::Approx(b.m0).epsilon(1e-13));
    CHECK(a.E0 == doctest::Approx(b.E0).epsilon(1e-13));
}

TEST_CASE("discrete norms") {
    const MassGrid g = build_grid(1.0, 512);
    SUBCASE("constants") {
        const Norms nc = discrete_norms(Field(512, 1.0), g);
        CHECK(nc.l2 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(nc.linf == 1.0);
        const Norms nn = discrete_norms(Field(513, 1.0), g);
        CHECK(nn.l2 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(nn.linf == 1.0);
        const Norms z = discrete_norms(Field(512, 0.0), g);
        CHECK(z.l2 == 0.0);
        CHECK(z.linf == 0.0);
    }
    SUBCASE("sine has l2 near sqrt(1/2)") {
        Field fc(512), fn(513);
        for (int i = 0; i < 512; ++i) fc[i] = std::sin(M_PI * g.center(i));
        for (int i = 0; i <= 512; ++i) fn[i] = std::sin(M_PI * g.node(i));
        CHECK(discrete_norms(fc, g).l2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
        CHECK(discrete_norms(fn, g).l2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
    }
    SUBCASE("wrong size rejected") {
        CHECK_THROWS_AS(discrete_norms(Field(17, 0.0), g), ConfigError);
    }
}

TEST_CASE("implied density") {
    const MassGrid g = build_grid(1.0, 8);
    const PhysParams p{1.0, 1.4};
    Field rho(8, 1.0);
    rho[4] = 0.0;  // vacuum cell
    const InitialData d = make_initial_data(g, p, rho, Field(9, 0.0), Field(8, 0.0));

    State s = initial_state(d);
    Field r = implied_density(s, d);
    for (int i = 0; i < 8; ++i) CHECK(r[i] == rho[i]);

    s.J.assign(8, 2.0);
    r = implied_density(s, d);
    CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r[4] == 0.0);

    // J * rho == rho0 to roundoff by construction
    Lcg rng(3);
    for (int i = 0; i < 8; ++i) s.J[i] = rng.uniform(0.1, 5.0);
    r = implied_density(s, d);
    for (int i = 0; i < 8; ++i)
        CHECK(s.J[i] * r[i] == doctest::Approx(rho[i]).epsilon(1e-15));

    s.J[2] = 0.0;
    CHECK_THROWS_AS(implied_density(s, d), DomainError);
}

TEST_CASE("state validation") {
    const MassGrid g = build_grid(1.0, 4);
    State s{0.0, Field(4, 1.0), Field(5, 0.0), Field(4, 0.0)};
    CHECK_NOTHROW(s.validate(g));
    s.J[1] = 0.0;
    CHECK_THROWS_AS(s.validate(g), JCollapseError);
    s.J[1] = 1.0;
    s.pi[0] = -1e-16;
    CHECK_THROWS_AS(s.validate(g), NumericalError);
    s.pi[0] = 0.0;
    s.v[0] = 1e-17;
    CHECK_THROWS_AS(s.validate(g), NumericalError);
}

TEST_CASE("energy of the initial state equals E0") {
    Lcg rng(11);
    const MassGrid g = build_grid(2.0, 24);
    const PhysParams p{0.8, 1.7};
    const InitialData d = make_initial_data(
        g, p, test::random_center_field(rng, g, 0.0, 2.0),
        test::random_node_field_pinned(rng, g, -1.0, 1.0),
        test::random_center_field(rng, g, 0.0, 1.0),
        test::random_center_field(rng, g, 0.5, 2.0));
    const Conserved c = conserved_quantities(d);
    CHECK(current_energy(initial_state(d), d) == doctest::Approx(c.E0).epsilon(1e-15));
    CHECK(current_mass(initial_state(d), g) == doctest::Approx(c.ell0).epsilon(1e-15));
    CHECK(c.E0 >= 0.0);
}
