#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dgdiss/dissipation.hpp"
#include "dgdiss/trace_constants.hpp"
#include "dgdiss/verify.hpp"
#include "support.hpp"

using namespace dgdiss;

TEST_CASE("single-cell linear field") {
    const SingleCellLinear e = single_cell_linear();
    CHECK(std::abs(e.a_h - 0.5) <= 1e-12);
    CHECK(std::abs(e.grad_norm_sq - 1.0) <= 1e-12);
    CHECK(std::abs(e.a_num_broken + 0.5) <= 1e-12);
    CHECK(std::abs(e.a_phy_sigma) <= 1e-12);
    CHECK(std::abs(e.a_num_sigma - 0.5) <= 1e-12);
}

TEST_CASE("lifting and flux norms match the local-solve oracle") {
    for (int dim = 1; dim <= 3; ++dim)
        for (int k = 1; k <= (dim == 3 ? 2 : 4); ++k)
            for (int n : {1, 3}) {
                const auto space =
                    make_space(build_mesh(dim, std::vector<int>(dim, n), std::vector<double>(dim, 1.3)), k, dim == 2 ? 2 : 1);
                const DgField u = random_field(space, 7 * k + n + dim);
                const LiftedFlux lf = lift_jumps(u);
                const auto ref = oracle::lifting_norms(to_oracle(u));
                CAPTURE(dim);
                CAPTURE(k);
                CAPTURE(n);
                CHECK(rel_err(norm_sq(lf.lifting), ref.lifting) < 1e-11);
                CHECK(std::abs(norm_sq(lf.sigma) - ref.sigma) <= 1e-11 * (ref.sigma + ref.lifting));
            }
}

TEST_CASE("lifting vanishes on continuous fields") {
    const auto space = make_space(build_mesh(2, {3, 3}, {1, 1}), 2, 1);
    DgField u(space);
    for (std::size_t c = 0; c < space->num_cells(); ++c)
        u.coeff(c, 0, 0) = -1.25;
    CHECK(norm_sq(lift_jumps(u).lifting) < 1e-28);
}

TEST_CASE("both splittings sum to the form") {
    for (int k = 1; k <= 4; ++k) {
        const auto space = make_space(build_mesh(2, {2, 2}, {1, 1}), k, 1);
        const ViscousOperator op = assemble_sip(space, SipParams{});
        for (int s = 0; s < 20; ++s) {
            const DgField u = random_field(space, 1000 * k + s);
            const DissipationBreakdown b = decompose(u, op);
            CHECK(std::abs(b.a_phy_sigma + b.a_num_sigma - b.a_total) <= 1e-10 * std::abs(b.a_total));
            CHECK(std::abs(b.a_phy_broken + b.a_num_broken - b.a_total) <= 1e-10 * std::abs(b.a_total));
            CHECK(b.a_num_sigma >= -1e-12 * b.scale());
            CHECK(b.a_phy_sigma >= 0.0);
            CHECK(std::abs(bassi_rebay_value(u) - b.a_phy_sigma) <= 1e-10 * b.scale());
        }
    }
    SipParams nip;
    nip.variant = PenaltyVariant::Nip;
    const auto space = make_space(build_mesh(1, {2}, {1}), 1, 1);
    CHECK_THROWS(decompose(DgField(space), assemble_nip(space, nip)));
}

TEST_CASE("three forms of the consistency term agree") {
    for (int dim = 1; dim <= 2; ++dim)
        for (int k = 1; k <= 3; ++k) {
            const auto space = make_space(build_mesh(dim, std::vector<int>(dim, 3), std::vector<double>(dim, 1.0)), k, 1);
            const DgField u = random_field(space, 50 + k);
            const double skel = consistency_skeleton(u);
            CHECK(rel_err(consistency_element_boundary(u), skel) < 1e-11);
            CHECK(rel_err(lifting_gradient_inner(u), skel) < 1e-11);
            CHECK(rel_err(oracle::sip_parts(to_oracle(u)).consistency, skel) < 1e-11);
        }
}

TEST_CASE("lifting bound") {
    for (int k = 1; k <= 4; ++k) {
        const DgField u = random_field(make_space(build_mesh(2, {2, 2}, {1, 1}), k, 1), 3 * k);
        const double bound = lifting_bound(u);
        CHECK(norm_sq(lift_jumps(u).lifting) <= bound * (1.0 + 1e-12));
        CHECK(bound == doctest::Approx(min_penalty(PenaltyFamily::QDg, k).lambda_star *
                                       jump_energy_modal(u, facet_length_scale)));
    }
}

TEST_CASE("sub-threshold penalty admits negative numerical dissipation") {
    for (int k = 1; k <= 3; ++k) {
        const WitnessProbe w = probe_sub_threshold_witness({1, k, 2}, 0.9);
        CHECK(w.a_num_sigma < 0.0);
        CHECK(w.lambda == doctest::Approx(0.9 * w.lambda_min));
    }
    CHECK(eps_total(-2.0, 3.0, 0.5) == doctest::Approx(0.5));
}
