#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dgdiss/simulate.hpp"
#include "dgdiss/verify.hpp"
#include "support.hpp"

using namespace dgdiss;

namespace {

ScenarioConfig heat(int n, int k) {
    ScenarioConfig c;
    c.problem = Problem::Heat;
    c.dim = 1;
    c.cells_per_axis = {n};
    c.box_length = {1.0};
    c.order = k;
    c.nu = 0.5;
    c.t_end = 0.01;
    c.dt = 1e-3;
    c.initial.name = "sine";
    return c;
}

ScenarioConfig burgers() {
    ScenarioConfig c;
    c.problem = Problem::Burgers;
    c.cells_per_axis = {8};
    c.order = 3;
    c.nu = 5e-3;
    c.t_end = 0.2;
    c.dt = 1e-3;
    c.initial.name = "sine";
    return c;
}

}  // namespace

TEST_CASE("heat ledger: discrete energy identity and decay") {
    const ScenarioResult r = run_scenario(heat(6, 2));
    REQUIRE(r.ledger.size() == 10);
    CHECK(r.final_time == 0.01);
    double k_prev = 1e300, t_prev = 0.0;
    for (const auto& row : r.ledger) {
        CHECK(row.t > t_prev);
        CHECK(row.kinetic_energy <= k_prev);
        CHECK(std::abs(row.dKdt + row.a_total) <= 1e-11 * row.a_total);
        CHECK(row.eps_tot == doctest::Approx(-row.dKdt - row.a_phy_sigma));
        CHECK(std::abs(row.eps_tot - row.a_num_sigma) <= 1e-11 * row.scale);
        CHECK(row.convective_rate == 0.0);
        t_prev = row.t;
        k_prev = row.kinetic_energy;
    }
}

TEST_CASE("heat solution tracks the exact decay") {
    ScenarioConfig c = heat(16, 3);
    c.dt = 1e-4;
    c.lambda.value = 2.0;
    const ScenarioResult r = run_scenario(c);
    const auto exact = *heat_exact_solution(c);
    const double err = l2_error(r.final_field, [&](const Point& x) { return exact(x, r.final_time); }, 6);
    CHECK(err < 1e-5);
    const double k_exact = 0.25 * std::exp(-2.0 * 4 * M_PI * M_PI * c.nu * c.t_end);
    CHECK(r.ledger.back().kinetic_energy == doctest::Approx(k_exact).epsilon(1e-4));
}

TEST_CASE("midpoint stepping is second order in dt") {
    auto final_k = [](double dt) {
        ScenarioConfig c = heat(4, 2);
        c.nu = 1.0;
        c.t_end = 0.04;
        c.dt = dt;
        return run_scenario(c).ledger.back().kinetic_energy;
    };
    const double ref = final_k(1e-5);
    const double e1 = std::abs(final_k(4e-3) - ref), e2 = std::abs(final_k(2e-3) - ref);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("final step lands on t_end") {
    ScenarioConfig c = heat(4, 1);
    c.t_end = 0.0105;
    const ScenarioResult r = run_scenario(c);
    CHECK(r.ledger.size() == 11);
    CHECK(r.ledger.back().t == 0.0105);
}

TEST_CASE("RK4 and endpoint evaluation") {
    ScenarioConfig c = heat(4, 2);
    c.dt = 1e-5;
    c.t_end = 1e-3;
    c.integrator = Integrator::Rk4;
    c.evaluate_at = EvaluationPoint::Endpoint;
    const ScenarioResult r = run_scenario(c);
    c.integrator = Integrator::Midpoint;
    const ScenarioResult m = run_scenario(c);
    CHECK((r.final_field.coefficients() - m.final_field.coefficients()).norm() < 1e-8);
}

TEST_CASE("upwind advection dissipates half the jump energy") {
    const auto space = make_space(build_mesh(2, {3, 2}, {1, 1}), 2, 1);
    const SparseMatrix c = assemble_advection(*space, {0.7, -0.4});
    const DgField u = random_field(space, 8);
    const auto f = to_oracle(u);
    // 1/2 sum_F |beta.n| int [u]^2 by quadrature.
    const auto parts_x = [&](int axis) {
        const auto r = oracle::gauss(4);
        double s = 0.0;
        for (int cell = 0; cell < f.cells(); ++cell) {
            auto ni = f.cell_multi(cell);
            ni[axis] += 1;
            const int nb = f.cell_of(ni);
            for (int q = 0; q < 4; ++q) {
                std::array<double, 3> xp{0, 0, 0}, xm{0, 0, 0};
                xp[axis] = 1.0;
                xp[1 - axis] = xm[1 - axis] = r.x[q];
                const double j = f.value(cell, 0, xp) - f.value(nb, 0, xm);
                s += r.w[q] * f.h(1 - axis) * j * j;
            }
        }
        return s;
    };
    const double expected = 0.5 * (0.7 * parts_x(0) + 0.4 * parts_x(1));
    CHECK(rel_err(u.coefficients().dot(c * u.coefficients()), expected) < 1e-12);
    DgField one(space);
    for (std::size_t cell = 0; cell < space->num_cells(); ++cell)
        one.coeff(cell, 0, 0) = 1.0;
    CHECK((c * one.coefficients()).norm() < 1e-13);
    CHECK(std::abs(one.coefficients().dot(c * u.coefficients())) < 1e-13);
}

TEST_CASE("advection-diffusion ledger") {
    ScenarioConfig c = heat(8, 2);
    c.problem = Problem::AdvectionDiffusion;
    c.advection_velocity = {1.0};
    c.nu = 0.01;
    const ScenarioResult r = run_scenario(c);
    for (const auto& row : r.ledger) {
        CHECK(row.convective_rate >= 0.0);
        CHECK(std::abs(row.dKdt + row.a_total + row.convective_rate) <= 1e-11 * row.scale);
    }
}

TEST_CASE("Burgers LLF flux: non-negative energy rate and mean conservation") {
    const auto space = make_space(build_mesh(1, {6}, {1}), 3, 1);
    for (int s = 0; s < 20; ++s) {
        const DgField u = random_field(space, 40 + s);
        const ConvectionResult cr = convection_burgers(u);
        CHECK(cr.energy_rate >= -1e-12 * u.coefficients().squaredNorm());
        double mass = 0.0;
        for (std::size_t cell = 0; cell < space->num_cells(); ++cell)
            mass += cr.residual[static_cast<Eigen::Index>(cell * space->modes_per_cell())];
        CHECK(std::abs(mass) < 1e-12 * cr.residual.norm());
    }
    // Smooth positive constant state is steady.
    DgField c(space);
    for (std::size_t cell = 0; cell < space->num_cells(); ++cell)
        c.coeff(cell, 0, 0) = 0.8;
    CHECK(convection_burgers(c).residual.norm() < 1e-14);
}

TEST_CASE("Burgers ledger keeps eps_tot and a_num_sigma non-negative") {
    const ScenarioResult r = run_scenario(burgers());
    bool negative_broken = false;
    for (const auto& row : r.ledger) {
        CHECK(row.a_num_sigma >= -1e-11 * row.scale);
        CHECK(row.eps_tot >= -1e-11 * row.scale);
        CHECK(std::abs(row.eps_tot - row.convective_rate - row.a_num_sigma) <= 1e-10 * row.scale);
        negative_broken = negative_broken || row.a_num_broken < 0.0;
    }
    CHECK(negative_broken);
}

TEST_CASE("runs are deterministic") {
    ScenarioConfig c = burgers();
    c.t_end = 0.02;
    c.initial = {"random", {{"amplitude", 0.3}, {"modes", 3}}};
    c.seed = 99;
    const auto a = run_scenario(c), b = run_scenario(c);
    CHECK((a.final_field.coefficients() - b.final_field.coefficients()).norm() == 0.0);
    c.seed = 100;
    CHECK((run_scenario(c).final_field.coefficients() - a.final_field.coefficients()).norm() > 0.0);
}

TEST_CASE("nonlinear failure is reported") {
    ScenarioConfig c = burgers();
    c.initial.params["amplitude"] = 50.0;
    c.dt = 0.05;
    c.t_end = 0.1;
    c.max_nonlinear_iterations = 20;
    CHECK_THROWS_AS(run_scenario(c), std::runtime_error);
}

TEST_CASE("penalty resolution") {
    ScenarioConfig c = heat(4, 2);
    c.lambda = {LambdaMode::FactorOfStar, 1.5};
    CHECK(resolve_lambda(c).lambda == 4.5);
    CHECK(resolve_lambda(c).certified);
    c.lambda = {LambdaMode::Absolute, 2.0};
    CHECK_THROWS_AS(resolve_lambda(c), std::invalid_argument);
    c.allow_sub_threshold_lambda = true;
    const ResolvedPenalty r = resolve_lambda(c);
    CHECK(r.lambda == 2.0);
    CHECK_FALSE(r.certified);
}

TEST_CASE("config validation lists every problem") {
    ScenarioConfig c = heat(4, 2);
    c.order = 0;
    c.dt = -1.0;
    c.initial.name = "nope";
    try {
        validate(c);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("order") != std::string::npos);
        CHECK(msg.find("dt") != std::string::npos);
        CHECK(msg.find("nope") != std::string::npos);
    }
}

TEST_CASE("initial conditions") {
    ScenarioConfig c;
    c.dim = 2;
    c.cells_per_axis = {2, 2};
    c.box_length = {1.0, 2.0};
    c.components = 2;
    c.initial = {"taylor_green", {{"amplitude", 2.0}}};
    const auto tg = initial_condition_function(c)({0.25, 0.5, 0.0});
    CHECK(tg[0] == doctest::Approx(2.0 * std::sin(M_PI / 2) * std::cos(M_PI / 2)));
    c.components = 1;
    c.initial = {"steep", {{"width", 0.05}}};
    CHECK(initial_condition_function(c)({0.25, 0.0, 0.0})[0] == doctest::Approx(1.0));
    c.initial = {"constant", {{"value", 3.0}}};
    CHECK(initial_condition_function(c)({0.1, 0.2, 0.0})[0] == 3.0);
}
