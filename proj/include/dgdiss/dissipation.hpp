#pragma once

#include "dgdiss/dgcore.hpp"
#include "dgdiss/sip.hpp"

namespace dgdiss {

/// Lifting of the facet jumps and the discrete diffusive flux, both stored in
/// the mixed-degree broken gradient space.
///
/// For every cell K and every basis function tau of the gradient space,
///   int_K R([u]) : tau = 1/2 oint_dK [u] . (tau n_K),
/// where on dK the jump is taken from K's side (u_K - u_neighbour), which
/// equals the facet jump times n_F . n_K. sigma = grad_h u - R([u]).
struct LiftedFlux {
    GradientField lifting;
    GradientField sigma;
};

/// Requires k >= 1. The lifting depends only on the jumps, the SIP numerical
/// trace {u} fixes the factor 1/2.
LiftedFlux lift_jumps(const DgField& u);

/// Tangential Legendre coefficients of [u] on one facet for one component,
/// indexed over the facet mode set (extent 1 along the facet axis).
Eigen::VectorXd facet_jump_modes(const DgField& u, int component, std::size_t facet);

/// sum_F 1/h_F oint |[u]|^2 from the modal jump coefficients.
double jump_energy_modal(const DgField& u, const FacetLengthRule& rule);

/// Both splittings of a_h(u, u) plus their building blocks. All values are
/// unscaled by nu.
struct DissipationBreakdown {
    double a_total = 0.0;
    double a_phy_sigma = 0.0;
    double a_num_sigma = 0.0;
    double a_phy_broken = 0.0;
    double a_num_broken = 0.0;
    /// lambda sum_F 1/h_F oint |[u]|^2
    double penalty_part = 0.0;
    /// ||R([u])||^2
    double lifting_norm_sq = 0.0;

    /// Magnitude used for relative tolerances: ||grad_h u||^2 + penalty + ||R||^2.
    double scale() const { return a_phy_broken + penalty_part + lifting_norm_sq; }
};

/// a_total comes from the assembled operator; the sigma split is built from
/// the lifting and the modal jump energy, so the identity
/// a_total = a_phy_sigma + a_num_sigma is a genuine cross-check.
DissipationBreakdown decompose(const DgField& u, const ViscousOperator& op);

/// ||grad_h u||^2 - 2 sum_F oint {grad_h u} n_F . [u] + ||R([u])||^2, with the
/// skeleton term evaluated by facet quadrature.
double bassi_rebay_value(const DgField& u);

/// sum_F oint {grad_h u} n_F . [u] by facet quadrature (skeleton form).
double consistency_skeleton(const DgField& u);
/// sum_K oint_dK 1/2 (grad u|_K n_K) . (u_K - u_neighbour) by quadrature,
/// looping over cell boundaries.
double consistency_element_boundary(const DgField& u);
/// int grad_h u : R([u]) from modal coefficients.
double lifting_gradient_inner(const DgField& u);

/// Right-hand side of the lifting bound ||R||^2 <= sum_K C^2/(4 h_K) oint_dK |[u]|^2,
/// with C^2 the gradient-space trace constant k(k+1). Isotropic meshes only.
double lifting_bound(const DgField& u);

/// eps_tot = -dK/dt - nu a_phy.
double eps_total(double dK_dt, double a_phy_sigma, double nu);

}  // namespace dgdiss
