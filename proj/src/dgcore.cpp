#include "dgdiss/dgcore.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dgdiss {

namespace {

struct AxisTables {
    std::vector<double> values;
    std::vector<double> derivs;
};

// Legendre values/derivatives per axis at one reference point.
std::array<AxisTables, 3> axis_tables(int dim, int k, const Point& xi) {
    std::array<AxisTables, 3> t;
    for (int a = 0; a < dim; ++a) {
        t[a].values = eval_legendre(k, xi[a]);
        t[a].derivs = eval_legendre_derivative(k, xi[a]);
    }
    return t;
}

}  // namespace

DgSpace::DgSpace(PeriodicCartesianMesh mesh, int order, int components)
    : mesh_(std::move(mesh)), order_(order), components_(components), basis_(mesh_.dim(), order) {
    if (order_ < 0)
        throw std::invalid_argument("polynomial order must be >= 0");
    if (components_ != 1 && components_ != mesh_.dim())
        throw std::invalid_argument("a DG space carries either 1 or dim components");
    grad_modes_ = grad_basis_modes(mesh_.dim(), order_);
    const double vol = mesh_.cell_volume();
    mode_mass_.reserve(basis_.size());
    for (const Index3& m : basis_.modes.modes())
        mode_mass_.push_back(vol * reference_mass(m, mesh_.dim()));
}

SpacePtr make_space(PeriodicCartesianMesh mesh, int order, int components) {
    return std::make_shared<const DgSpace>(std::move(mesh), order, components);
}

DgField::DgField(SpacePtr space) : space_(std::move(space)) {
    coeffs_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_->num_dofs()));
}

DgField::DgField(SpacePtr space, Eigen::VectorXd coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
    if (static_cast<std::size_t>(coeffs_.size()) != space_->num_dofs())
        throw std::invalid_argument("coefficient vector does not match the space size");
}

Eigen::VectorXd DgField::component(int c) const {
    const std::size_t nm = space_->modes_per_cell();
    Eigen::VectorXd out(static_cast<Eigen::Index>(space_->scalar_size()));
    for (std::size_t cell = 0; cell < space_->num_cells(); ++cell)
        for (std::size_t m = 0; m < nm; ++m)
            out[static_cast<Eigen::Index>(cell * nm + m)] = coeff(cell, c, m);
    return out;
}

void DgField::set_component(int c, const Eigen::VectorXd& values) {
    const std::size_t nm = space_->modes_per_cell();
    for (std::size_t cell = 0; cell < space_->num_cells(); ++cell)
        for (std::size_t m = 0; m < nm; ++m)
            coeff(cell, c, m) = values[static_cast<Eigen::Index>(cell * nm + m)];
}

double DgField::value(std::size_t cell, int component, const Point& xi) const {
    const int dim = space_->dim();
    const auto t = axis_tables(dim, space_->order(), xi);
    double v = 0.0;
    const auto& modes = space_->basis().modes.modes();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        double phi = 1.0;
        for (int a = 0; a < dim; ++a)
            phi *= t[a].values[modes[i][a]];
        v += coeff(cell, component, i) * phi;
    }
    return v;
}

Point DgField::gradient(std::size_t cell, int component, const Point& xi) const {
    const int dim = space_->dim();
    const auto t = axis_tables(dim, space_->order(), xi);
    Point g{0.0, 0.0, 0.0};
    const auto& modes = space_->basis().modes.modes();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double c = coeff(cell, component, i);
        for (int d = 0; d < dim; ++d) {
            double phi = 1.0;
            for (int a = 0; a < dim; ++a)
                phi *= (a == d) ? t[a].derivs[modes[i][a]] : t[a].values[modes[i][a]];
            g[d] += c * phi;
        }
    }
    for (int d = 0; d < dim; ++d)
        g[d] /= space_->mesh().h(d);
    return g;
}

GradientField zero_gradient_field(const SpacePtr& space) {
    GradientField g;
    g.space = space;
    const int dim = space->dim();
    for (int c = 0; c < space->components(); ++c)
        for (int i = 0; i < dim; ++i)
            g.blocks.push_back(Eigen::VectorXd::Zero(
                static_cast<Eigen::Index>(space->num_cells() * space->grad_modes()[i].size())));
    return g;
}

namespace {

// Physical mass weights of the gradient-space modes for direction i.
std::vector<double> grad_mode_mass(const DgSpace& space, int i) {
    const double vol = space.mesh().cell_volume();
    std::vector<double> w;
    for (const Index3& m : space.grad_modes()[i].modes())
        w.push_back(vol * reference_mass(m, space.dim()));
    return w;
}

}  // namespace

double inner(const GradientField& a, const GradientField& b) {
    const DgSpace& space = *a.space;
    const int dim = space.dim();
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const std::vector<double> w = grad_mode_mass(space, i);
        const std::size_t ng = w.size();
        if (ng == 0)
            continue;
        for (int c = 0; c < space.components(); ++c) {
            const Eigen::VectorXd& x = a.block(c, i);
            const Eigen::VectorXd& y = b.block(c, i);
            for (Eigen::Index j = 0; j < x.size(); ++j)
                s += x[j] * y[j] * w[static_cast<std::size_t>(j) % ng];
        }
    }
    return s;
}

double norm_sq(const GradientField& g) { return inner(g, g); }

GradientField operator-(const GradientField& a, const GradientField& b) {
    GradientField r = a;
    for (std::size_t i = 0; i < r.blocks.size(); ++i)
        r.blocks[i] -= b.blocks[i];
    return r;
}

VolumeRule volume_rule(const DgSpace& space, int points_per_axis) {
    const int dim = space.dim();
    const QuadratureRule1D g = gauss_rule(points_per_axis);
    const ModeSet pts(dim, Index3{points_per_axis, points_per_axis, points_per_axis});
    const double vol = space.mesh().cell_volume();
    VolumeRule rule;
    for (const Index3& p : pts.modes()) {
        Point xi{0.0, 0.0, 0.0};
        double w = vol;
        for (int a = 0; a < dim; ++a) {
            xi[a] = g.nodes[p[a]];
            w *= g.weights[p[a]];
        }
        rule.xi.push_back(xi);
        rule.weights.push_back(w);
    }
    return rule;
}

FacetRule facet_rule(const DgSpace& space, int axis, int points_per_axis) {
    const int dim = space.dim();
    const QuadratureRule1D g = gauss_rule(points_per_axis);
    Index3 ext{points_per_axis, points_per_axis, points_per_axis};
    ext[axis] = 1;
    const ModeSet pts(dim, ext);
    double area = 1.0;
    for (int a = 0; a < dim; ++a)
        if (a != axis)
            area *= space.mesh().h(a);
    FacetRule rule;
    for (const Index3& p : pts.modes()) {
        Point xi{0.0, 0.0, 0.0};
        double w = area;
        for (int a = 0; a < dim; ++a) {
            if (a == axis)
                continue;
            xi[a] = g.nodes[p[a]];
            w *= g.weights[p[a]];
        }
        Point plus = xi, minus = xi;
        plus[axis] = 1.0;
        minus[axis] = 0.0;
        rule.plus_xi.push_back(plus);
        rule.minus_xi.push_back(minus);
        rule.weights.push_back(w);
    }
    return rule;
}

DgField project_initial(const SpacePtr& space, const VectorFunction& u0, int quad_points) {
    DgField u(space);
    const int dim = space->dim();
    const int k = space->order();
    const int nq = quad_points > 0 ? quad_points : space->volume_quadrature_points();
    const VolumeRule rule = volume_rule(*space, nq);
    const auto& modes = space->basis().modes.modes();

    // Basis values at the quadrature points are shared by every cell.
    std::vector<std::vector<double>> phi(rule.xi.size(), std::vector<double>(modes.size()));
    for (std::size_t q = 0; q < rule.xi.size(); ++q) {
        const auto t = axis_tables(dim, k, rule.xi[q]);
        for (std::size_t i = 0; i < modes.size(); ++i) {
            double p = 1.0;
            for (int a = 0; a < dim; ++a)
                p *= t[a].values[modes[i][a]];
            phi[q][i] = p;
        }
    }

    const PeriodicCartesianMesh& mesh = space->mesh();
    for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
        const Point origin = mesh.cell_origin(cell);
        for (std::size_t q = 0; q < rule.xi.size(); ++q) {
            Point x{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a)
                x[a] = origin[a] + mesh.h(a) * rule.xi[q][a];
            const std::array<double, 3> val = u0(x);
            for (int c = 0; c < space->components(); ++c)
                for (std::size_t i = 0; i < modes.size(); ++i)
                    u.coeff(cell, c, i) += rule.weights[q] * val[c] * phi[q][i];
        }
        for (int c = 0; c < space->components(); ++c)
            for (std::size_t i = 0; i < modes.size(); ++i)
                u.coeff(cell, c, i) /= space->mode_mass(i);
    }
    return u;
}

DgField project_initial(const SpacePtr& space, const ScalarFunction& u0, int quad_points) {
    return project_initial(
        space, VectorFunction([&u0](const Point& x) { return std::array<double, 3>{u0(x), 0.0, 0.0}; }),
        quad_points);
}

GradientField broken_gradient(const DgField& u) {
    const DgSpace& space = u.space();
    const int k = space.order();
    if (k < 1)
        throw std::invalid_argument("broken gradient needs order k >= 1");
    const int dim = space.dim();
    const std::vector<double> dmat = derivative_matrix(k);
    const std::size_t n1 = static_cast<std::size_t>(k) + 1;
    GradientField g = zero_gradient_field(u.space_ptr());
    const ModeSet& basis = space.basis().modes;

    for (int i = 0; i < dim; ++i) {
        const ModeSet& gm = space.grad_modes()[i];
        const double inv_h = 1.0 / space.mesh().h(i);
        for (int c = 0; c < space.components(); ++c) {
            Eigen::VectorXd& blk = g.block(c, i);
            for (std::size_t cell = 0; cell < space.num_cells(); ++cell) {
                for (std::size_t j = 0; j < gm.size(); ++j) {
                    const Index3 n = gm.modes()[j];
                    double s = 0.0;
                    for (int ma = n[i] + 1; ma <= k; ma += 2) {
                        Index3 m = n;
                        m[i] = ma;
                        s += dmat[static_cast<std::size_t>(n[i]) * n1 + ma] * u.coeff(cell, c, basis.index(m));
                    }
                    blk[static_cast<Eigen::Index>(cell * gm.size() + j)] = s * inv_h;
                }
            }
        }
    }
    return g;
}

FacetTracePair facet_traces(const DgField& u, std::size_t facet_index) {
    const DgSpace& space = u.space();
    const Facet& f = space.mesh().facet(facet_index);
    const FacetRule rule = facet_rule(space, f.axis, space.facet_quadrature_points());
    const int nc = space.components();
    FacetTracePair tp;
    tp.facet = facet_index;
    tp.weights = rule.weights;
    tp.plus.assign(nc, {});
    tp.minus.assign(nc, {});
    tp.plus_normal_derivative.assign(nc, {});
    tp.minus_normal_derivative.assign(nc, {});
    for (int c = 0; c < nc; ++c) {
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            tp.plus[c].push_back(u.value(f.plus_cell, c, rule.plus_xi[q]));
            tp.minus[c].push_back(u.value(f.minus_cell, c, rule.minus_xi[q]));
            if (space.order() >= 1) {
                tp.plus_normal_derivative[c].push_back(u.gradient(f.plus_cell, c, rule.plus_xi[q])[f.axis]);
                tp.minus_normal_derivative[c].push_back(u.gradient(f.minus_cell, c, rule.minus_xi[q])[f.axis]);
            } else {
                tp.plus_normal_derivative[c].push_back(0.0);
                tp.minus_normal_derivative[c].push_back(0.0);
            }
        }
    }
    return tp;
}

double l2_norm_sq(const DgField& u) {
    const DgSpace& space = u.space();
    const std::size_t nm = space.modes_per_cell();
    double s = 0.0;
    const Eigen::VectorXd& c = u.coefficients();
    for (Eigen::Index i = 0; i < c.size(); ++i)
        s += c[i] * c[i] * space.mode_mass(static_cast<std::size_t>(i) % nm);
    return s;
}

double kinetic_energy(const DgField& u) { return 0.5 * l2_norm_sq(u); }

SparseMatrix scalar_mass_matrix(const DgSpace& space) {
    const std::size_t nm = space.modes_per_cell();
    const auto n = static_cast<Eigen::Index>(space.scalar_size());
    SparseMatrix m(n, n);
    m.reserve(Eigen::VectorXi::Constant(n, 1));
    for (Eigen::Index i = 0; i < n; ++i)
        m.insert(i, i) = space.mode_mass(static_cast<std::size_t>(i) % nm);
    m.makeCompressed();
    return m;
}

Eigen::VectorXd mass_diagonal_vector(const DgSpace& space) {
    const std::size_t nm = space.modes_per_cell();
    Eigen::VectorXd d(static_cast<Eigen::Index>(space.num_dofs()));
    for (Eigen::Index i = 0; i < d.size(); ++i)
        d[i] = space.mode_mass(static_cast<std::size_t>(i) % nm);
    return d;
}

void write_snapshot(std::ostream& os, const DgField& u, double time) {
    const DgSpace& space = u.space();
    nlohmann::json header;
    header["layout_version"] = kSnapshotLayoutVersion;
    header["layout"] = "cell-major, component, lexicographic mode (axis 0 fastest)";
    header["dim"] = space.dim();
    header["cells_per_axis"] = space.mesh().cells_per_axis();
    header["box_length"] = space.mesh().box_lengths();
    header["order"] = space.order();
    header["components"] = space.components();
    header["time"] = time;
    os << "# " << header.dump() << "\n";
    os << "cell,component,mode,coefficient\n";
    char buf[64];
    for (std::size_t cell = 0; cell < space.num_cells(); ++cell)
        for (int c = 0; c < space.components(); ++c)
            for (std::size_t m = 0; m < space.modes_per_cell(); ++m) {
                std::snprintf(buf, sizeof buf, "%.16e", u.coeff(cell, c, m));
                os << cell << ',' << c << ',' << m << ',' << buf << "\n";
            }
}

DgField read_snapshot(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("snapshot: missing '#' JSON header line");
    const nlohmann::json header = nlohmann::json::parse(line.substr(2));
    if (header.at("layout_version").get<int>() != kSnapshotLayoutVersion)
        throw std::runtime_error("snapshot: unsupported layout version");
    const int dim = header.at("dim").get<int>();
    auto mesh = build_mesh(dim, header.at("cells_per_axis").get<std::vector<int>>(),
                           header.at("box_length").get<std::vector<double>>());
    auto space = make_space(std::move(mesh), header.at("order").get<int>(), header.at("components").get<int>());
    DgField u(space);
    if (!std::getline(is, line))
        throw std::runtime_error("snapshot: missing column header");
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::size_t cell = 0, mode = 0;
        int comp = 0;
        double value = 0.0;
        char sep = 0;
        if (!(ls >> cell >> sep >> comp >> sep >> mode >> sep >> value) || cell >= space->num_cells() ||
            comp >= space->components() || mode >= space->modes_per_cell())
            throw std::runtime_error("snapshot: malformed row " + std::to_string(row + 3));
        u.coeff(cell, comp, mode) = value;
        ++row;
    }
    if (row != space->num_dofs())
        throw std::runtime_error("snapshot: expected " + std::to_string(space->num_dofs()) + " rows, got " +
                                 std::to_string(row));
    return u;
}

}  // namespace dgdiss
