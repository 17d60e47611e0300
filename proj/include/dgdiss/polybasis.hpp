#pragma once

#include <cstddef>
#include <vector>

#include "dgdiss/mesh.hpp"

namespace dgdiss {

/// Shifted Legendre polynomials L_0..L_k on [0,1].
///
/// L_m(0) = (-1)^m, L_m(1) = 1 and int_0^1 L_m L_n = delta_mn / (2m+1).
struct LegendreBasis1D {
    int order = 0;

    std::vector<double> values(double x) const;
    std::vector<double> derivatives(double x) const;
};

/// L_0(x)..L_k(x) via the three-term recurrence. x is clamped to [0,1].
std::vector<double> eval_legendre(int k, double x);
/// L_0'(x)..L_k'(x) on [0,1].
std::vector<double> eval_legendre_derivative(int k, double x);

/// Reference mass diagonal [1/(2m+1)]_{m=0..k}.
std::vector<double> mass_diagonal(int k);

/// Modal derivative matrix D with L_m' = sum_n D(n, m) L_n, stored row-major
/// as (k+1)x(k+1). D(n, m) = 2(2n+1) for n < m with m+n odd, zero otherwise.
std::vector<double> derivative_matrix(int k);

/// L_m'(1) = m(m+1) and L_m'(0) = (-1)^(m+1) m(m+1).
double legendre_derivative_at_one(int m);
double legendre_derivative_at_zero(int m);

struct QuadratureRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [0,1]; exact for degree 2n-1.
QuadratureRule1D gauss_rule(int n);

/// Box of tensor multi-indices {0..extent_i-1}, lexicographic with axis 0 fastest.
/// An extent of zero on any active axis makes the set empty.
class ModeSet {
public:
    ModeSet() = default;
    ModeSet(int dim, Index3 extents);

    int dim() const { return dim_; }
    int extent(int axis) const { return extents_[axis]; }
    const Index3& extents() const { return extents_; }
    std::size_t size() const { return size_; }

    std::size_t index(const Index3& m) const;
    Index3 multi(std::size_t idx) const;

    const std::vector<Index3>& modes() const { return modes_; }

private:
    int dim_ = 1;
    Index3 extents_{1, 1, 1};
    std::size_t size_ = 0;
    std::vector<Index3> modes_;
};

/// Q_k modal basis on the reference cell: (k+1)^dim modes, diagonal mass
/// prod_i 1/(2 m_i + 1).
struct TensorBasis {
    int dim = 1;
    int order = 0;
    ModeSet modes;

    TensorBasis() = default;
    TensorBasis(int dim, int order);
    std::size_t size() const { return modes.size(); }
};

/// Reference mass of a tensor mode: prod_i 1/(2 m_i + 1).
double reference_mass(const Index3& m, int dim);

/// Mode sets of the broken gradient space of Q_k, one per derivative direction:
/// component i has degree <= k-1 along axis i and <= k along the others.
/// For k = 0 every set is empty.
std::vector<ModeSet> grad_basis_modes(int dim, int k);

}  // namespace dgdiss
