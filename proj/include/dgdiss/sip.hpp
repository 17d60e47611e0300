#pragma once

#include <optional>

#include "dgdiss/dgcore.hpp"

namespace dgdiss {

enum class PenaltyVariant { Sip, Nip };

/// Viscous form parameters. An unset lambda resolves to the minimal penalty
/// k(k+1)/2 of the Q_k space.
struct SipParams {
    double nu = 1.0;
    std::optional<double> lambda;
    PenaltyVariant variant = PenaltyVariant::Sip;
    FacetLengthRule length_rule = facet_length_scale;
};

/// Assembled interior penalty form on one scalar component.
///
/// The three sub-operators are kept separately (matrices act on scalar
/// component vectors, a(u, v) = v^T A u):
///   volume      V(u, v) = int grad_h u . grad_h v
///   jump        J(u, v) = sum_F 1/h_F oint [u][v]
///   consistency B(u, v) = sum_F oint {grad_h u . n_F} [v]
/// SIP: A = V + lambda J - B - B^T.  NIP: A = V + lambda J - B + B^T.
/// Vector fields are handled component by component.
class ViscousOperator {
public:
    ViscousOperator(SpacePtr space, SipParams params, double lambda, SparseMatrix volume, SparseMatrix jump,
                    SparseMatrix consistency);

    const DgSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const SipParams& params() const { return params_; }
    PenaltyVariant variant() const { return params_.variant; }
    double lambda() const { return lambda_; }
    /// Minimal penalty of the space, k(k+1)/2.
    double lambda_star() const { return lambda_star_; }
    /// True iff lambda >= lambda_star on an isotropic mesh.
    bool certified() const { return certified_; }

    const SparseMatrix& volume() const { return volume_; }
    const SparseMatrix& jump() const { return jump_; }
    const SparseMatrix& consistency() const { return consistency_; }
    const SparseMatrix& matrix() const { return matrix_; }

    Eigen::VectorXd apply_scalar(const Eigen::VectorXd& u) const { return matrix_ * u; }
    DgField apply(const DgField& u) const;

    /// a_h(u, v), summed over components.
    double bilinear(const DgField& u, const DgField& v) const;
    double broken_gradient_energy(const DgField& u) const;
    double jump_energy(const DgField& u) const;
    double consistency_value(const DgField& u) const;

private:
    SpacePtr space_;
    SipParams params_;
    double lambda_;
    double lambda_star_;
    bool certified_;
    SparseMatrix volume_;
    SparseMatrix jump_;
    SparseMatrix consistency_;
    SparseMatrix matrix_;
};

ViscousOperator assemble_sip(const SpacePtr& space, SipParams params);
ViscousOperator assemble_nip(const SpacePtr& space, SipParams params);
/// Dispatches on params.variant.
ViscousOperator assemble_viscous(const SpacePtr& space, const SipParams& params);

/// a_h(u, u).
double symmetric_value(const ViscousOperator& op, const DgField& u);

/// Smallest generalized eigenvalue a_h(v,v)/||v||^2 over the mean-zero subspace,
/// with its eigenvector as a witness (scalar component layout). Dense.
struct SpectrumProbe {
    double min_eigenvalue = 0.0;
    Eigen::VectorXd witness;
};
SpectrumProbe min_mean_zero_eigenvalue(const ViscousOperator& op);

}  // namespace dgdiss
