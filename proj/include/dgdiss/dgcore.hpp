#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dgdiss/mesh.hpp"
#include "dgdiss/polybasis.hpp"

namespace dgdiss {

using Point = std::array<double, 3>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Broken Q_k space with 1 or dim components on a periodic Cartesian mesh.
///
/// Degrees of freedom are laid out cell-major, then component, then
/// lexicographic tensor mode (axis 0 fastest):
///   dof = (cell * components + component) * (k+1)^dim + mode.
class DgSpace {
public:
    DgSpace(PeriodicCartesianMesh mesh, int order, int components);

    const PeriodicCartesianMesh& mesh() const { return mesh_; }
    int dim() const { return mesh_.dim(); }
    int order() const { return order_; }
    int components() const { return components_; }
    const TensorBasis& basis() const { return basis_; }
    /// Mixed-degree mode sets of the broken gradient space, one per direction.
    const std::vector<ModeSet>& grad_modes() const { return grad_modes_; }

    std::size_t modes_per_cell() const { return basis_.size(); }
    std::size_t num_cells() const { return mesh_.num_cells(); }
    std::size_t num_dofs() const { return num_cells() * components_ * modes_per_cell(); }
    /// Size of one scalar component vector (cells x modes).
    std::size_t scalar_size() const { return num_cells() * modes_per_cell(); }

    std::size_t dof(std::size_t cell, int component, std::size_t mode) const {
        return (cell * components_ + static_cast<std::size_t>(component)) * modes_per_cell() + mode;
    }
    /// Physical mass of a basis mode on one cell: |K| prod 1/(2 m_i + 1).
    double mode_mass(std::size_t mode) const { return mode_mass_[mode]; }

    /// Facet quadrature points per tangential axis (exact for degree 2k+1).
    int facet_quadrature_points() const { return order_ + 1; }
    /// Default volume quadrature points per axis (exact for degree 2k+2).
    int volume_quadrature_points() const { return order_ + 2; }

private:
    PeriodicCartesianMesh mesh_;
    int order_;
    int components_;
    TensorBasis basis_;
    std::vector<ModeSet> grad_modes_;
    std::vector<double> mode_mass_;
};

using SpacePtr = std::shared_ptr<const DgSpace>;

SpacePtr make_space(PeriodicCartesianMesh mesh, int order, int components = 1);

/// Modal coefficient vector over a DgSpace.
class DgField {
public:
    DgField() = default;
    explicit DgField(SpacePtr space);
    DgField(SpacePtr space, Eigen::VectorXd coefficients);

    const DgSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }

    Eigen::VectorXd& coefficients() { return coeffs_; }
    const Eigen::VectorXd& coefficients() const { return coeffs_; }

    double coeff(std::size_t cell, int component, std::size_t mode) const {
        return coeffs_[static_cast<Eigen::Index>(space_->dof(cell, component, mode))];
    }
    double& coeff(std::size_t cell, int component, std::size_t mode) {
        return coeffs_[static_cast<Eigen::Index>(space_->dof(cell, component, mode))];
    }

    /// Scalar coefficient vector (cells x modes) of one component.
    Eigen::VectorXd component(int c) const;
    void set_component(int c, const Eigen::VectorXd& values);

    /// Point value of one component at reference coordinates xi in a cell.
    double value(std::size_t cell, int component, const Point& xi) const;
    /// Physical gradient of one component at reference coordinates xi.
    Point gradient(std::size_t cell, int component, const Point& xi) const;

private:
    SpacePtr space_;
    Eigen::VectorXd coeffs_;
};

/// Coefficients of a field in the mixed-degree broken gradient space.
/// blocks[c * dim + i] holds d/dx_i of component c, laid out cell-major over
/// grad_modes()[i].
struct GradientField {
    SpacePtr space;
    std::vector<Eigen::VectorXd> blocks;

    Eigen::VectorXd& block(int component, int direction) {
        return blocks[static_cast<std::size_t>(component * space->dim() + direction)];
    }
    const Eigen::VectorXd& block(int component, int direction) const {
        return blocks[static_cast<std::size_t>(component * space->dim() + direction)];
    }
};

GradientField zero_gradient_field(const SpacePtr& space);
/// L2 norm squared using the diagonal mass of the gradient space.
double norm_sq(const GradientField& g);
double inner(const GradientField& a, const GradientField& b);
GradientField operator-(const GradientField& a, const GradientField& b);

using VectorFunction = std::function<std::array<double, 3>(const Point&)>;
using ScalarFunction = std::function<double(const Point&)>;

/// Element-wise L2 projection. `quad_points` per axis; 0 picks k+2.
DgField project_initial(const SpacePtr& space, const VectorFunction& u0, int quad_points = 0);
DgField project_initial(const SpacePtr& space, const ScalarFunction& u0, int quad_points = 0);

/// Exact modal differentiation into the mixed-degree gradient space. Requires k >= 1.
GradientField broken_gradient(const DgField& u);

/// Traces of a field on both sides of a facet at its tangential Gauss points.
struct FacetTracePair {
    std::size_t facet = 0;
    /// Physical surface weights, one per point.
    std::vector<double> weights;
    /// plus[c][q], minus[c][q]: trace values per component and point.
    std::vector<std::vector<double>> plus;
    std::vector<std::vector<double>> minus;
    /// Normal derivative (gradient . n_F) traces.
    std::vector<std::vector<double>> plus_normal_derivative;
    std::vector<std::vector<double>> minus_normal_derivative;

    double jump(int c, std::size_t q) const { return plus[c][q] - minus[c][q]; }
    double average(int c, std::size_t q) const { return 0.5 * (plus[c][q] + minus[c][q]); }
    double average_normal_derivative(int c, std::size_t q) const {
        return 0.5 * (plus_normal_derivative[c][q] + minus_normal_derivative[c][q]);
    }
};

FacetTracePair facet_traces(const DgField& u, std::size_t facet);

/// Tangential reference points and reference weights of a facet rule.
struct FacetRule {
    std::vector<Point> plus_xi;   ///< reference coordinates in the plus cell
    std::vector<Point> minus_xi;  ///< reference coordinates in the minus cell
    std::vector<double> weights;  ///< physical surface weights
};
FacetRule facet_rule(const DgSpace& space, int axis, int points_per_axis);

/// Tensor Gauss rule on the reference cell, with physical weights.
struct VolumeRule {
    std::vector<Point> xi;
    std::vector<double> weights;
};
VolumeRule volume_rule(const DgSpace& space, int points_per_axis);

double l2_norm_sq(const DgField& u);
double kinetic_energy(const DgField& u);

/// Diagonal mass matrix of one scalar component (cells x modes).
SparseMatrix scalar_mass_matrix(const DgSpace& space);
/// Per-dof mass diagonal over the full field layout.
Eigen::VectorXd mass_diagonal_vector(const DgSpace& space);

/// Snapshot: a "#"-prefixed JSON header line, a column header, then one
/// "cell,component,mode,coefficient" row per dof in layout order.
inline constexpr int kSnapshotLayoutVersion = 1;
void write_snapshot(std::ostream& os, const DgField& u, double time);
DgField read_snapshot(std::istream& is);

}  // namespace dgdiss
