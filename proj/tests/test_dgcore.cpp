#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dgdiss/dgcore.hpp"
#include "dgdiss/verify.hpp"
#include "support.hpp"

using namespace dgdiss;

namespace {
SpacePtr space2d(int k, int comps = 1) { return make_space(build_mesh(2, {3, 2}, {1.5, 1.0}), k, comps); }
}

TEST_CASE("dof layout") {
    const auto s = space2d(2, 2);
    CHECK(s->modes_per_cell() == 9);
    CHECK(s->num_dofs() == 6 * 2 * 9);
    CHECK(s->scalar_size() == 54);
    CHECK(s->dof(1, 1, 3) == (1 * 2 + 1) * 9 + 3);
    CHECK(s->mode_mass(0) == doctest::Approx(0.5 * 0.5));
    CHECK_THROWS(make_space(build_mesh(2, {2, 2}, {1, 1}), 1, 3));
}

TEST_CASE("projection reproduces polynomials of degree k") {
    const auto s = space2d(3);
    const DgField u = project_initial(s, ScalarFunction([](const Point& x) {
                                          return 1.0 + x[0] * x[0] * x[0] - 2.0 * x[0] * x[1] * x[1] + x[1];
                                      }));
    for (std::size_t c = 0; c < s->num_cells(); ++c) {
        const Point o = s->mesh().cell_origin(c);
        for (Point xi : {Point{0.2, 0.7, 0.0}, Point{0.9, 0.1, 0.0}}) {
            const double x = o[0] + 0.5 * xi[0], y = o[1] + 0.5 * xi[1];
            CHECK(u.value(c, 0, xi) == doctest::Approx(1.0 + x * x * x - 2.0 * x * y * y + y).epsilon(1e-12));
            const Point g = u.gradient(c, 0, xi);
            CHECK(g[0] == doctest::Approx(3 * x * x - 2 * y * y).epsilon(1e-11));
            CHECK(g[1] == doctest::Approx(-4 * x * y + 1).epsilon(1e-11));
        }
    }
}

TEST_CASE("value and gradient agree with the oracle evaluation") {
    const auto s = space2d(3, 2);
    const DgField u = random_field(s, 5);
    const auto f = to_oracle(u);
    for (std::size_t c = 0; c < s->num_cells(); ++c)
        for (int comp = 0; comp < 2; ++comp) {
            const Point xi{0.31, 0.64, 0.0};
            CHECK(u.value(c, comp, xi) == doctest::Approx(f.value(int(c), comp, xi)).epsilon(1e-12));
            CHECK(u.gradient(c, comp, xi)[1] == doctest::Approx(f.deriv(int(c), comp, 1, xi)).epsilon(1e-11));
        }
}

TEST_CASE("broken gradient norm equals the quadrature volume energy") {
    for (int k = 1; k <= 4; ++k) {
        const DgField u = random_field(space2d(k), 11 + k);
        CHECK(rel_err(norm_sq(broken_gradient(u)), oracle::sip_parts(to_oracle(u)).volume) < 1e-12);
    }
}

TEST_CASE("kinetic energy and mass") {
    const auto s = make_space(build_mesh(1, {4}, {1.0}), 2, 1);
    const DgField u = project_initial(s, ScalarFunction([](const Point& x) { return std::sin(2 * std::numbers::pi * x[0]); }), 8);
    CHECK(kinetic_energy(u) == doctest::Approx(0.5 * l2_norm_sq(u)));
    CHECK(l2_norm_sq(u) == doctest::Approx(0.5).epsilon(1e-2));
    const auto md = mass_diagonal_vector(*s);
    CHECK(u.coefficients().dot((md.array() * u.coefficients().array()).matrix()) == doctest::Approx(l2_norm_sq(u)));
    CHECK(scalar_mass_matrix(*s).diagonal().isApprox(md));
}

TEST_CASE("facet traces report jumps plus-minus") {
    const auto s = make_space(build_mesh(1, {2}, {1.0}), 1, 1);
    DgField u(s);
    // Cell 0 is u = 1, cell 1 is u = 3: facet 0 (between 0 and 1) sees [u] = 1 - 3.
    u.coeff(0, 0, 0) = 1.0;
    u.coeff(1, 0, 0) = 3.0;
    const FacetTracePair t = facet_traces(u, 0);
    CHECK(t.jump(0, 0) == doctest::Approx(-2.0));
    CHECK(t.average(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("snapshot round-trip") {
    const DgField u = random_field(space2d(2, 2), 3);
    std::stringstream ss;
    write_snapshot(ss, u, 0.25);
    const std::string text = ss.str();
    CHECK(text.rfind("# {", 0) == 0);
    CHECK(text.find("\ncell,component,mode,coefficient\n") != std::string::npos);
    const DgField v = read_snapshot(ss);
    CHECK(v.space().num_dofs() == u.space().num_dofs());
    CHECK((v.coefficients() - u.coefficients()).norm() == 0.0);
    std::stringstream bad("not a snapshot\n");
    CHECK_THROWS(read_snapshot(bad));
}
