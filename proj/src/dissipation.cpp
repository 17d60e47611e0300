#include "dgdiss/dissipation.hpp"

#include <stdexcept>

#include "dgdiss/trace_constants.hpp"

namespace dgdiss {

namespace {

ModeSet facet_modes(const DgSpace& space, int axis) {
    const int k = space.order();
    Index3 ext{k + 1, k + 1, k + 1};
    ext[axis] = 1;
    return ModeSet(space.dim(), ext);
}

double tangential_mass(const DgSpace& space, const Index3& m, int axis) {
    double t = 1.0;
    for (int j = 0; j < space.dim(); ++j)
        if (j != axis)
            t *= space.mesh().h(j) / (2.0 * m[j] + 1.0);
    return t;
}

}  // namespace

Eigen::VectorXd facet_jump_modes(const DgField& u, int component, std::size_t facet_index) {
    const DgSpace& space = u.space();
    const Facet& f = space.mesh().facet(facet_index);
    const int a = f.axis;
    const ModeSet fm = facet_modes(space, a);
    const ModeSet& basis = space.basis().modes;
    Eigen::VectorXd j = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fm.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Index3 m = basis.modes()[i];
        const int ma = m[a];
        m[a] = 0;
        const double minus_trace = (ma % 2 == 0) ? 1.0 : -1.0;
        j[static_cast<Eigen::Index>(fm.index(m))] +=
            u.coeff(f.plus_cell, component, i) - minus_trace * u.coeff(f.minus_cell, component, i);
    }
    return j;
}

double jump_energy_modal(const DgField& u, const FacetLengthRule& rule) {
    const DgSpace& space = u.space();
    const PeriodicCartesianMesh& mesh = space.mesh();
    double s = 0.0;
    for (std::size_t fi = 0; fi < mesh.num_facets(); ++fi) {
        const Facet& f = mesh.facet(fi);
        const ModeSet fm = facet_modes(space, f.axis);
        const double inv_hf = 1.0 / rule(mesh, f);
        for (int c = 0; c < space.components(); ++c) {
            const Eigen::VectorXd j = facet_jump_modes(u, c, fi);
            for (std::size_t t = 0; t < fm.size(); ++t)
                s += inv_hf * j[static_cast<Eigen::Index>(t)] * j[static_cast<Eigen::Index>(t)] *
                     tangential_mass(space, fm.modes()[t], f.axis);
        }
    }
    return s;
}

LiftedFlux lift_jumps(const DgField& u) {
    const DgSpace& space = u.space();
    if (space.order() < 1)
        throw std::invalid_argument("lifting needs order k >= 1");
    const PeriodicCartesianMesh& mesh = space.mesh();
    const int dim = space.dim();

    LiftedFlux out;
    out.lifting = zero_gradient_field(u.space_ptr());
    for (int a = 0; a < dim; ++a) {
        const ModeSet& gm = space.grad_modes()[a];
        const ModeSet fm = facet_modes(space, a);
        const double inv_h = 1.0 / mesh.h(a);
        for (int c = 0; c < space.components(); ++c) {
            // Jump coefficients per facet of this axis, computed once.
            std::vector<Eigen::VectorXd> jumps(mesh.num_cells());
            for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell)
                jumps[cell] = facet_jump_modes(u, c, mesh.upper_facet(cell, a));
            Eigen::VectorXd& blk = out.lifting.block(c, a);
            for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
                const Eigen::VectorXd& up = jumps[cell];
                const Eigen::VectorXd& low = jumps[mesh.lower_facet(cell, a) - static_cast<std::size_t>(a) * mesh.num_cells()];
                for (std::size_t j = 0; j < gm.size(); ++j) {
                    Index3 n = gm.modes()[j];
                    const int na = n[a];
                    n[a] = 0;
                    const auto t = static_cast<Eigen::Index>(fm.index(n));
                    const double sign = (na % 2 == 0) ? 1.0 : -1.0;
                    // Tangential masses cancel between the facet moment and the cell mass.
                    blk[static_cast<Eigen::Index>(cell * gm.size() + j)] =
                        0.5 * (2.0 * na + 1.0) * inv_h * (up[t] + sign * low[t]);
                }
            }
        }
    }
    out.sigma = broken_gradient(u) - out.lifting;
    return out;
}

DissipationBreakdown decompose(const DgField& u, const ViscousOperator& op) {
    if (op.variant() != PenaltyVariant::Sip)
        throw std::invalid_argument("lifting decomposition is defined for the SIP form only");
    DissipationBreakdown b;
    const LiftedFlux lf = lift_jumps(u);
    b.a_total = op.bilinear(u, u);
    b.penalty_part = op.lambda() * jump_energy_modal(u, op.params().length_rule);
    b.lifting_norm_sq = norm_sq(lf.lifting);
    b.a_phy_sigma = norm_sq(lf.sigma);
    b.a_num_sigma = b.penalty_part - b.lifting_norm_sq;
    b.a_phy_broken = norm_sq(broken_gradient(u));
    b.a_num_broken = b.a_total - b.a_phy_broken;
    return b;
}

double consistency_skeleton(const DgField& u) {
    const DgSpace& space = u.space();
    double s = 0.0;
    for (std::size_t fi = 0; fi < space.mesh().num_facets(); ++fi) {
        const FacetTracePair tp = facet_traces(u, fi);
        for (int c = 0; c < space.components(); ++c)
            for (std::size_t q = 0; q < tp.weights.size(); ++q)
                s += tp.weights[q] * tp.average_normal_derivative(c, q) * tp.jump(c, q);
    }
    return s;
}

double consistency_element_boundary(const DgField& u) {
    const DgSpace& space = u.space();
    const PeriodicCartesianMesh& mesh = space.mesh();
    double s = 0.0;
    for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
        for (int a = 0; a < space.dim(); ++a) {
            const FacetRule rule = facet_rule(space, a, space.facet_quadrature_points());
            const Facet& up = mesh.facet(mesh.upper_facet(cell, a));
            const Facet& low = mesh.facet(mesh.lower_facet(cell, a));
            for (int c = 0; c < space.components(); ++c) {
                for (std::size_t q = 0; q < rule.weights.size(); ++q) {
                    // Upper face: n_K = +e_a, neighbour seen from its lower face.
                    const double uk_up = u.value(cell, c, rule.plus_xi[q]);
                    const double nb_up = u.value(up.minus_cell, c, rule.minus_xi[q]);
                    const double dn_up = u.gradient(cell, c, rule.plus_xi[q])[a];
                    s += rule.weights[q] * 0.5 * dn_up * (uk_up - nb_up);
                    // Lower face: n_K = -e_a, neighbour seen from its upper face.
                    const double uk_low = u.value(cell, c, rule.minus_xi[q]);
                    const double nb_low = u.value(low.plus_cell, c, rule.plus_xi[q]);
                    const double dn_low = -u.gradient(cell, c, rule.minus_xi[q])[a];
                    s += rule.weights[q] * 0.5 * dn_low * (uk_low - nb_low);
                }
            }
        }
    }
    return s;
}

double lifting_gradient_inner(const DgField& u) { return inner(broken_gradient(u), lift_jumps(u).lifting); }

double bassi_rebay_value(const DgField& u) {
    const LiftedFlux lf = lift_jumps(u);
    return norm_sq(broken_gradient(u)) - 2.0 * consistency_skeleton(u) + norm_sq(lf.lifting);
}

double lifting_bound(const DgField& u) {
    const DgSpace& space = u.space();
    const double c2 = trace_constant_formula(gradient_trace_order(space.order()));
    // Each facet borders two cell boundaries, so sum_K oint_dK = 2 sum_F oint_F.
    const double h = facet_length_scale(space.mesh(), space.mesh().facet(0));
    return c2 / (4.0 * h) * 2.0 * h * jump_energy_modal(u, facet_length_scale);
}

double eps_total(double dK_dt, double a_phy_sigma, double nu) { return -dK_dt - nu * a_phy_sigma; }

}  // namespace dgdiss
