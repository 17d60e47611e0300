#include "dgdiss/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dgdiss {

std::vector<double> LegendreBasis1D::values(double x) const { return eval_legendre(order, x); }
std::vector<double> LegendreBasis1D::derivatives(double x) const { return eval_legendre_derivative(order, x); }

std::vector<double> eval_legendre(int k, double x) {
    if (k < 0)
        throw std::invalid_argument("Legendre order must be >= 0");
    x = std::clamp(x, 0.0, 1.0);
    const double t = 2.0 * x - 1.0;
    std::vector<double> p(static_cast<std::size_t>(k) + 1);
    p[0] = 1.0;
    if (k >= 1)
        p[1] = t;
    for (int m = 1; m < k; ++m)
        p[m + 1] = ((2.0 * m + 1.0) * t * p[m] - m * p[m - 1]) / (m + 1.0);
    return p;
}

std::vector<double> eval_legendre_derivative(int k, double x) {
    if (k < 0)
        throw std::invalid_argument("Legendre order must be >= 0");
    const std::vector<double> p = eval_legendre(k, x);
    std::vector<double> dp(p.size(), 0.0);
    // (d/dt) P_{m+1} = (d/dt) P_{m-1} + (2m+1) P_m, then chain rule factor 2.
    std::vector<double> dt(p.size(), 0.0);
    if (k >= 1)
        dt[1] = 1.0;
    for (int m = 1; m < k; ++m)
        dt[m + 1] = dt[m - 1] + (2.0 * m + 1.0) * p[m];
    for (std::size_t m = 0; m < p.size(); ++m)
        dp[m] = 2.0 * dt[m];
    return dp;
}

std::vector<double> mass_diagonal(int k) {
    if (k < 0)
        throw std::invalid_argument("order must be >= 0");
    std::vector<double> d(static_cast<std::size_t>(k) + 1);
    for (int m = 0; m <= k; ++m)
        d[m] = 1.0 / (2.0 * m + 1.0);
    return d;
}

std::vector<double> derivative_matrix(int k) {
    const std::size_t n = static_cast<std::size_t>(k) + 1;
    std::vector<double> d(n * n, 0.0);
    for (int m = 0; m <= k; ++m)
        for (int r = m - 1; r >= 0; r -= 2)
            d[static_cast<std::size_t>(r) * n + m] = 2.0 * (2.0 * r + 1.0);
    return d;
}

double legendre_derivative_at_one(int m) { return m * (m + 1.0); }
double legendre_derivative_at_zero(int m) { return (m % 2 == 0 ? -1.0 : 1.0) * m * (m + 1.0); }

QuadratureRule1D gauss_rule(int n) {
    if (n < 1)
        throw std::invalid_argument("Gauss rule needs at least one point");
    QuadratureRule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n over [-1,1], then map to [0,1].
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dpn = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int m = 1; m < n; ++m) {
                const double p2 = ((2.0 * m + 1.0) * t * p1 - m * p0) / (m + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dpn = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dpn;
            t -= dt;
            if (std::abs(dt) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - t * t) * dpn * dpn);
        rule.nodes[n - 1 - i] = 0.5 * (t + 1.0);
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

ModeSet::ModeSet(int dim, Index3 extents) : dim_(dim), extents_{1, 1, 1} {
    size_ = 1;
    for (int a = 0; a < dim_; ++a) {
        extents_[a] = extents[a];
        size_ *= static_cast<std::size_t>(std::max(extents[a], 0));
    }
    modes_.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i)
        modes_.push_back(multi(i));
}

std::size_t ModeSet::index(const Index3& m) const {
    std::size_t idx = 0;
    for (int a = dim_ - 1; a >= 0; --a)
        idx = idx * static_cast<std::size_t>(extents_[a]) + static_cast<std::size_t>(m[a]);
    return idx;
}

Index3 ModeSet::multi(std::size_t idx) const {
    Index3 m{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        m[a] = static_cast<int>(idx % static_cast<std::size_t>(extents_[a]));
        idx /= static_cast<std::size_t>(extents_[a]);
    }
    return m;
}

TensorBasis::TensorBasis(int dim_in, int order_in)
    : dim(dim_in), order(order_in), modes(dim_in, Index3{order_in + 1, order_in + 1, order_in + 1}) {
    if (order < 0)
        throw std::invalid_argument("polynomial order must be >= 0");
}

double reference_mass(const Index3& m, int dim) {
    double w = 1.0;
    for (int a = 0; a < dim; ++a)
        w /= (2.0 * m[a] + 1.0);
    return w;
}

std::vector<ModeSet> grad_basis_modes(int dim, int k) {
    std::vector<ModeSet> sets;
    for (int i = 0; i < dim; ++i) {
        Index3 ext{k + 1, k + 1, k + 1};
        ext[i] = k;
        sets.emplace_back(dim, ext);
    }
    return sets;
}

}  // namespace dgdiss
