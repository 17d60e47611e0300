#include "dgdiss/sip.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <stdexcept>

#include "dgdiss/trace_constants.hpp"

namespace dgdiss {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Facet side factors. Plus side evaluates at local coordinate 1, minus at 0.
double value_factor(bool plus, int m) { return plus ? 1.0 : ((m % 2 == 0) ? 1.0 : -1.0); }
double jump_sign(bool plus) { return plus ? 1.0 : -1.0; }
double derivative_factor(bool plus, int m) {
    return plus ? legendre_derivative_at_one(m) : legendre_derivative_at_zero(m);
}

// prod_{j != axis} h_j / (2 m_j + 1)
double tangential_mass(const DgSpace& space, const Index3& m, int axis) {
    double t = 1.0;
    for (int j = 0; j < space.dim(); ++j)
        if (j != axis)
            t *= space.mesh().h(j) / (2.0 * m[j] + 1.0);
    return t;
}

SparseMatrix assemble_volume(const DgSpace& space) {
    const int dim = space.dim();
    const int k = space.order();
    const std::size_t n1 = static_cast<std::size_t>(k) + 1;
    const std::vector<double> d = derivative_matrix(k);
    // S(m, n) = int_0^1 L_m' L_n'
    std::vector<double> s(n1 * n1, 0.0);
    for (std::size_t m = 0; m < n1; ++m)
        for (std::size_t n = 0; n < n1; ++n)
            for (std::size_t p = 0; p < n1; ++p)
                s[m * n1 + n] += d[p * n1 + m] * d[p * n1 + n] / (2.0 * p + 1.0);

    const ModeSet& basis = space.basis().modes;
    const std::size_t nm = basis.size();
    Triplets trip;
    for (std::size_t cell = 0; cell < space.num_cells(); ++cell) {
        const std::size_t base = cell * nm;
        for (std::size_t i = 0; i < nm; ++i) {
            const Index3 m = basis.modes()[i];
            for (int a = 0; a < dim; ++a) {
                const double t = tangential_mass(space, m, a) / space.mesh().h(a);
                for (int na = 0; na <= k; ++na) {
                    const double sv = s[static_cast<std::size_t>(m[a]) * n1 + na];
                    if (sv == 0.0)
                        continue;
                    Index3 n = m;
                    n[a] = na;
                    trip.emplace_back(static_cast<int>(base + basis.index(n)), static_cast<int>(base + i), sv * t);
                }
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(space.scalar_size());
    SparseMatrix v(n, n);
    v.setFromTriplets(trip.begin(), trip.end());
    return v;
}

void assemble_facets(const DgSpace& space, const FacetLengthRule& rule, SparseMatrix& jump, SparseMatrix& cons) {
    const int k = space.order();
    const ModeSet& basis = space.basis().modes;
    const std::size_t nm = basis.size();
    const PeriodicCartesianMesh& mesh = space.mesh();
    Triplets tj, tb;
    for (std::size_t fi = 0; fi < mesh.num_facets(); ++fi) {
        const Facet& f = mesh.facet(fi);
        const int a = f.axis;
        const double inv_hf = 1.0 / rule(mesh, f);
        const double inv_ha = 1.0 / mesh.h(a);
        for (int sx = 0; sx < 2; ++sx) {
            const bool px = (sx == 0);
            const std::size_t cx = px ? f.plus_cell : f.minus_cell;
            for (int sy = 0; sy < 2; ++sy) {
                const bool py = (sy == 0);
                const std::size_t cy = py ? f.plus_cell : f.minus_cell;
                for (std::size_t i = 0; i < nm; ++i) {
                    const Index3 m = basis.modes()[i];
                    const double t = tangential_mass(space, m, a);
                    const double jx = jump_sign(px) * value_factor(px, m[a]);
                    const double gx = 0.5 * derivative_factor(px, m[a]) * inv_ha;
                    for (int na = 0; na <= k; ++na) {
                        Index3 n = m;
                        n[a] = na;
                        const double jy = jump_sign(py) * value_factor(py, na);
                        const int row = static_cast<int>(cy * nm + basis.index(n));
                        const int col = static_cast<int>(cx * nm + i);
                        tj.emplace_back(row, col, inv_hf * jx * jy * t);
                        if (gx != 0.0)
                            tb.emplace_back(row, col, gx * jy * t);
                    }
                }
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(space.scalar_size());
    jump = SparseMatrix(n, n);
    jump.setFromTriplets(tj.begin(), tj.end());
    cons = SparseMatrix(n, n);
    cons.setFromTriplets(tb.begin(), tb.end());
}

}  // namespace

ViscousOperator::ViscousOperator(SpacePtr space, SipParams params, double lambda, SparseMatrix volume,
                                 SparseMatrix jump, SparseMatrix consistency)
    : space_(std::move(space)),
      params_(std::move(params)),
      lambda_(lambda),
      volume_(std::move(volume)),
      jump_(std::move(jump)),
      consistency_(std::move(consistency)) {
    lambda_star_ = min_penalty(PenaltyFamily::QDg, space_->order()).lambda_star;
    certified_ = space_->mesh().isotropic() && lambda_ >= lambda_star_;
    SparseMatrix bt = consistency_.transpose();
    if (params_.variant == PenaltyVariant::Sip)
        matrix_ = volume_ + lambda_ * jump_ - consistency_ - bt;
    else
        matrix_ = volume_ + lambda_ * jump_ - consistency_ + bt;
    matrix_.makeCompressed();
}

DgField ViscousOperator::apply(const DgField& u) const {
    DgField r(u.space_ptr());
    for (int c = 0; c < space_->components(); ++c)
        r.set_component(c, matrix_ * u.component(c));
    return r;
}

namespace {
double form_value(const SparseMatrix& a, const DgField& u, const DgField& v) {
    double s = 0.0;
    for (int c = 0; c < u.space().components(); ++c)
        s += v.component(c).dot(a * u.component(c));
    return s;
}
}  // namespace

double ViscousOperator::bilinear(const DgField& u, const DgField& v) const { return form_value(matrix_, u, v); }
double ViscousOperator::broken_gradient_energy(const DgField& u) const { return form_value(volume_, u, u); }
double ViscousOperator::jump_energy(const DgField& u) const { return form_value(jump_, u, u); }
double ViscousOperator::consistency_value(const DgField& u) const { return form_value(consistency_, u, u); }

namespace {

ViscousOperator assemble_variant(const SpacePtr& space, SipParams params, PenaltyVariant variant) {
    if (space->order() < 1)
        throw std::invalid_argument("interior penalty form needs order k >= 1 (consistency terms vanish for k = 0)");
    params.variant = variant;
    if (!params.length_rule)
        params.length_rule = facet_length_scale;
    const double lambda =
        params.lambda.value_or(min_penalty(PenaltyFamily::QDg, space->order()).lambda_star);
    if (!(lambda > 0.0))
        throw std::invalid_argument("penalty lambda must be positive");
    SparseMatrix jump, cons;
    assemble_facets(*space, params.length_rule, jump, cons);
    return ViscousOperator(space, std::move(params), lambda, assemble_volume(*space), std::move(jump),
                           std::move(cons));
}

}  // namespace

ViscousOperator assemble_sip(const SpacePtr& space, SipParams params) {
    return assemble_variant(space, std::move(params), PenaltyVariant::Sip);
}

ViscousOperator assemble_nip(const SpacePtr& space, SipParams params) {
    return assemble_variant(space, std::move(params), PenaltyVariant::Nip);
}

ViscousOperator assemble_viscous(const SpacePtr& space, const SipParams& params) {
    return assemble_variant(space, params, params.variant);
}

double symmetric_value(const ViscousOperator& op, const DgField& u) { return op.bilinear(u, u); }

SpectrumProbe min_mean_zero_eigenvalue(const ViscousOperator& op) {
    const DgSpace& space = op.space();
    const auto n = static_cast<Eigen::Index>(space.scalar_size());
    const std::size_t nm = space.modes_per_cell();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (std::size_t cell = 0; cell < space.num_cells(); ++cell)
        e[static_cast<Eigen::Index>(cell * nm)] = 1.0;
    e.normalize();
    // Columns 1..n-1 of the Householder reflector span the complement of e.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd basis = q.rightCols(n - 1);

    const Eigen::MatrixXd a = Eigen::MatrixXd(op.matrix());
    const Eigen::MatrixXd m = Eigen::MatrixXd(scalar_mass_matrix(space));
    Eigen::MatrixXd ar = basis.transpose() * a * basis;
    ar = 0.5 * (ar + ar.transpose()).eval();
    const Eigen::MatrixXd mr = basis.transpose() * m * basis;

    SpectrumProbe probe;
    if (n <= 1) {
        probe.witness = Eigen::VectorXd::Zero(n);
        return probe;
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ar, mr);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("mean-zero eigenproblem did not converge");
    probe.min_eigenvalue = es.eigenvalues()[0];
    probe.witness = basis * es.eigenvectors().col(0);
    return probe;
}

}  // namespace dgdiss
