#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace dgdiss {

/// Multi-index over up to three axes. Unused trailing axes are zero.
using Index3 = std::array<int, 3>;

/// Facet between two periodic neighbours along one axis.
///
/// The normal is always +e_axis. `plus_cell` lies on the negative side of the
/// normal and supplies the "+" trace (its upper face, local coordinate 1);
/// `minus_cell` lies on the positive side and supplies the "-" trace (its
/// lower face, local coordinate 0). Jumps are plus - minus.
struct Facet {
    int axis = 0;
    std::size_t plus_cell = 0;
    std::size_t minus_cell = 0;
    std::array<double, 3> normal{0.0, 0.0, 0.0};
};

/// Axis-aligned periodic box split into congruent cells.
///
/// Cells are numbered lexicographically with axis 0 running fastest:
///   cell = i0 + N0 * (i1 + N1 * i2).
/// Facets are numbered axis-major: facet = axis * num_cells() + c, where c is
/// the cell whose upper face (along `axis`) the facet is.
/// Immutable after construction.
class PeriodicCartesianMesh {
public:
    PeriodicCartesianMesh(int dim, std::vector<int> cells_per_axis, std::vector<double> box_length);

    int dim() const { return dim_; }
    int cells_along(int axis) const { return cells_per_axis_[axis]; }
    double box_length(int axis) const { return box_length_[axis]; }
    double h(int axis) const { return h_axis_[axis]; }
    const std::vector<int>& cells_per_axis() const { return cells_per_axis_; }
    const std::vector<double>& box_lengths() const { return box_length_; }

    std::size_t num_cells() const { return num_cells_; }
    std::size_t num_facets() const { return facets_.size(); }
    const Facet& facet(std::size_t f) const { return facets_[f]; }
    const std::vector<Facet>& facets() const { return facets_; }

    Index3 cell_multi_index(std::size_t cell) const;
    std::size_t cell_index(const Index3& multi) const;

    /// Lower-left corner of a cell.
    std::array<double, 3> cell_origin(std::size_t cell) const;
    double cell_volume() const;

    /// Facet whose plus side is `cell`, i.e. the cell's upper face along `axis`.
    std::size_t upper_facet(std::size_t cell, int axis) const;
    /// Facet whose minus side is `cell`, i.e. the cell's lower face along `axis`.
    std::size_t lower_facet(std::size_t cell, int axis) const;

    bool isotropic() const;

private:
    int dim_;
    std::vector<int> cells_per_axis_;
    std::vector<double> box_length_;
    std::vector<double> h_axis_;
    std::size_t num_cells_ = 0;
    std::vector<Facet> facets_;
};

PeriodicCartesianMesh build_mesh(int dim, std::vector<int> cells_per_axis, std::vector<double> box_length);

/// Assigns the length scale h_F used in the penalty term.
using FacetLengthRule = std::function<double(const PeriodicCartesianMesh&, const Facet&)>;

/// Default rule: the common cell width. Throws on anisotropic meshes, where the
/// caller has to pick a rule explicitly.
double facet_length_scale(const PeriodicCartesianMesh& mesh, const Facet& facet);

/// Cell width across the facet (h along the facet normal). Valid on any mesh,
/// but minimal-penalty guarantees are only certified on isotropic meshes.
double normal_width_length_scale(const PeriodicCartesianMesh& mesh, const Facet& facet);

}  // namespace dgdiss
