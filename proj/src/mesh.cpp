#include "dgdiss/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dgdiss {

PeriodicCartesianMesh::PeriodicCartesianMesh(int dim, std::vector<int> cells_per_axis,
                                             std::vector<double> box_length)
    : dim_(dim), cells_per_axis_(std::move(cells_per_axis)), box_length_(std::move(box_length)) {
    if (dim_ < 1 || dim_ > 3)
        throw std::invalid_argument("mesh dimension must be 1, 2 or 3, got " + std::to_string(dim_));
    if (static_cast<int>(cells_per_axis_.size()) != dim_ || static_cast<int>(box_length_.size()) != dim_)
        throw std::invalid_argument("mesh needs exactly one cell count and one box length per axis");

    num_cells_ = 1;
    for (int a = 0; a < dim_; ++a) {
        if (cells_per_axis_[a] < 1)
            throw std::invalid_argument("cells per axis must be >= 1");
        if (!(box_length_[a] > 0.0) || !std::isfinite(box_length_[a]))
            throw std::invalid_argument("box lengths must be positive and finite");
        h_axis_.push_back(box_length_[a] / cells_per_axis_[a]);
        num_cells_ *= static_cast<std::size_t>(cells_per_axis_[a]);
    }

    facets_.reserve(static_cast<std::size_t>(dim_) * num_cells_);
    for (int a = 0; a < dim_; ++a) {
        for (std::size_t c = 0; c < num_cells_; ++c) {
            Index3 up = cell_multi_index(c);
            up[a] = (up[a] + 1) % cells_per_axis_[a];
            Facet f;
            f.axis = a;
            f.plus_cell = c;
            f.minus_cell = cell_index(up);
            f.normal[a] = 1.0;
            facets_.push_back(f);
        }
    }
}

Index3 PeriodicCartesianMesh::cell_multi_index(std::size_t cell) const {
    Index3 m{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        m[a] = static_cast<int>(cell % static_cast<std::size_t>(cells_per_axis_[a]));
        cell /= static_cast<std::size_t>(cells_per_axis_[a]);
    }
    return m;
}

std::size_t PeriodicCartesianMesh::cell_index(const Index3& multi) const {
    std::size_t idx = 0;
    for (int a = dim_ - 1; a >= 0; --a)
        idx = idx * static_cast<std::size_t>(cells_per_axis_[a]) + static_cast<std::size_t>(multi[a]);
    return idx;
}

std::array<double, 3> PeriodicCartesianMesh::cell_origin(std::size_t cell) const {
    const Index3 m = cell_multi_index(cell);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a)
        x[a] = m[a] * h_axis_[a];
    return x;
}

double PeriodicCartesianMesh::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a)
        v *= h_axis_[a];
    return v;
}

std::size_t PeriodicCartesianMesh::upper_facet(std::size_t cell, int axis) const {
    return static_cast<std::size_t>(axis) * num_cells_ + cell;
}

std::size_t PeriodicCartesianMesh::lower_facet(std::size_t cell, int axis) const {
    Index3 m = cell_multi_index(cell);
    m[axis] = (m[axis] + cells_per_axis_[axis] - 1) % cells_per_axis_[axis];
    return static_cast<std::size_t>(axis) * num_cells_ + cell_index(m);
}

bool PeriodicCartesianMesh::isotropic() const {
    for (int a = 1; a < dim_; ++a)
        if (std::abs(h_axis_[a] - h_axis_[0]) > 1e-14 * h_axis_[0])
            return false;
    return true;
}

PeriodicCartesianMesh build_mesh(int dim, std::vector<int> cells_per_axis, std::vector<double> box_length) {
    return PeriodicCartesianMesh(dim, std::move(cells_per_axis), std::move(box_length));
}

double facet_length_scale(const PeriodicCartesianMesh& mesh, const Facet&) {
    if (!mesh.isotropic())
        throw std::invalid_argument(
            "facet length scale is only defined on isotropic meshes; pass an explicit FacetLengthRule");
    return mesh.h(0);
}

double normal_width_length_scale(const PeriodicCartesianMesh& mesh, const Facet& facet) {
    return mesh.h(facet.axis);
}

}  // namespace dgdiss
