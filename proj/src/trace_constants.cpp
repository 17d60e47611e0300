#include "dgdiss/trace_constants.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dgdiss/dissipation.hpp"
#include "dgdiss/sip.hpp"

namespace dgdiss {

PenaltyFamily parse_penalty_family(const std::string& name) {
    if (name == "q-dg" || name == "Q-DG" || name == "qdg")
        return PenaltyFamily::QDg;
    if (name == "rt-hdg" || name == "RT-HDG" || name == "rthdg")
        return PenaltyFamily::RtHdg;
    throw std::invalid_argument("unsupported penalty family '" + name + "' (expected q-dg or rt-hdg)");
}

std::string to_string(PenaltyFamily family) { return family == PenaltyFamily::QDg ? "q-dg" : "rt-hdg"; }

Eigen::MatrixXd build_A_matrix(int k) {
    if (k < 0)
        throw std::invalid_argument("trace constant order must be >= 0");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int m = 0; m <= k; ++m)
        for (int n = 0; n <= k; ++n)
            if ((m + n) % 2 == 0)
                a(m, n) = 4.0 * std::sqrt(m + 0.5) * std::sqrt(n + 0.5);
    return a;
}

double trace_constant_formula(int k) { return (k + 1.0) * (k + 2.0); }

TraceConstant sharp_trace_constant(int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_A_matrix(k));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigen-solver failure for the trace matrix");
    return {k, es.eigenvalues().maxCoeff()};
}

double endpoint_rayleigh_quotient(const std::vector<double>& c) {
    double at0 = 0.0, at1 = 0.0, l2 = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        at0 += (m % 2 == 0 ? 1.0 : -1.0) * c[m];
        at1 += c[m];
        l2 += c[m] * c[m] / (2.0 * m + 1.0);
    }
    return (at0 * at0 + at1 * at1) / l2;
}

double rayleigh_sharpness_probe(int k, int num_samples, std::uint64_t seed, bool include_eigenvector) {
    if (num_samples < 1)
        throw std::invalid_argument("sharpness probe needs at least one sample");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double best = 0.0;
    std::vector<double> c(static_cast<std::size_t>(k) + 1);
    for (int s = 0; s < num_samples; ++s) {
        for (double& x : c)
            x = normal(rng);
        best = std::max(best, endpoint_rayleigh_quotient(c));
    }
    if (include_eigenvector) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_A_matrix(k));
        const Eigen::VectorXd top = es.eigenvectors().col(k);
        // A acts on c~ = D^{1/2} c, so c = diag(sqrt(2m+1)) c~.
        for (int m = 0; m <= k; ++m)
            c[m] = std::sqrt(2.0 * m + 1.0) * top[m];
        best = std::max(best, endpoint_rayleigh_quotient(c));
    }
    return best;
}

std::vector<std::vector<double>> random_qk_samples(int dim, int k_plus_1, int num_samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t modes = 1;
    for (int a = 0; a < dim; ++a)
        modes *= static_cast<std::size_t>(k_plus_1) + 1;
    std::vector<std::vector<double>> samples(static_cast<std::size_t>(num_samples),
                                             std::vector<double>(modes * dim));
    for (auto& s : samples)
        for (double& x : s)
            x = normal(rng);
    return samples;
}

double verify_normal_gradient_trace(int dim, double h, int k_plus_1, const std::vector<std::vector<double>>& v_samples) {
    if (dim < 1 || dim > 3 || k_plus_1 < 1 || !(h > 0.0))
        throw std::invalid_argument("normal-gradient trace check needs dim in 1..3, order >= 1 and h > 0");
    const ModeSet modes(dim, Index3{k_plus_1 + 1, k_plus_1 + 1, k_plus_1 + 1});
    const int nq = k_plus_1 + 1;
    const QuadratureRule1D g = gauss_rule(nq);

    // Legendre values/derivatives at Gauss nodes and at both endpoints.
    std::vector<std::vector<double>> val(nq), der(nq);
    for (int q = 0; q < nq; ++q) {
        val[q] = eval_legendre(k_plus_1, g.nodes[q]);
        der[q] = eval_legendre_derivative(k_plus_1, g.nodes[q]);
    }
    const std::array<std::vector<double>, 2> end_der{eval_legendre_derivative(k_plus_1, 0.0),
                                                     eval_legendre_derivative(k_plus_1, 1.0)};

    double worst = 0.0;
    for (const auto& v : v_samples) {
        if (v.size() != modes.size() * dim)
            throw std::invalid_argument("sample size does not match [Q_{k+1}]^d");
        double vol_sq = 0.0, bnd_sq = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double* coef = v.data() + static_cast<std::size_t>(c) * modes.size();
            for (int i = 0; i < dim; ++i) {
                // Volume: tensor Gauss points. Boundary: faces x_i = 0 and x_i = 1.
                const ModeSet pts(dim, Index3{nq, nq, nq});
                for (const Index3& p : pts.modes()) {
                    double w = 1.0;
                    for (int a = 0; a < dim; ++a)
                        w *= g.weights[p[a]];
                    double d = 0.0, d0 = 0.0, d1 = 0.0;
                    for (std::size_t j = 0; j < modes.size(); ++j) {
                        const Index3& m = modes.modes()[j];
                        double tv = 1.0, tt = 1.0;
                        for (int a = 0; a < dim; ++a) {
                            if (a == i) {
                                tv *= der[p[a]][m[a]];
                            } else {
                                tv *= val[p[a]][m[a]];
                                tt *= val[p[a]][m[a]];
                            }
                        }
                        d += coef[j] * tv;
                        if (p[i] == 0) {
                            d0 += coef[j] * tt * end_der[0][m[i]];
                            d1 += coef[j] * tt * end_der[1][m[i]];
                        }
                    }
                    vol_sq += w * d * d;
                    if (p[i] == 0) {
                        const double wt = w / g.weights[p[i]];
                        bnd_sq += wt * (d0 * d0 + d1 * d1);
                    }
                }
            }
        }
        if (vol_sq <= 1e-300)
            continue;
        // On a cube of width h the boundary term scales as h^(d-3) and the volume term as
        // h^(d-2), so h * boundary / volume equals the reference-cell ratio.
        worst = std::max(worst, bnd_sq / vol_sq);
    }
    return worst;
}

int gradient_trace_order(int velocity_order) { return velocity_order - 1; }

PenaltyRecommendation min_penalty(PenaltyFamily family, int k) {
    PenaltyRecommendation r;
    r.family = family;
    r.velocity_order = k;
    if (family == PenaltyFamily::QDg) {
        if (k < 1)
            throw std::invalid_argument("Q-DG minimal penalty needs k >= 1");
        r.lambda_star = 0.5 * trace_constant_formula(gradient_trace_order(k));
    } else {
        if (k < 0)
            throw std::invalid_argument("RT-HDG minimal penalty needs k >= 0");
        r.lambda_star = trace_constant_formula(k);
    }
    return r;
}

EmpiricalPenalty empirical_min_penalty(const PeriodicCartesianMesh& mesh, int order, double rank_tol) {
    auto space = make_space(mesh, order, 1);
    SipParams params;
    params.lambda = 1.0;
    const ViscousOperator op = assemble_sip(space, params);
    const auto n = static_cast<Eigen::Index>(space->scalar_size());

    // Gram matrix of the lifting, column by column.
    std::vector<Eigen::VectorXd> cols;
    cols.reserve(static_cast<std::size_t>(n));
    DgField e(space);
    for (Eigen::Index i = 0; i < n; ++i) {
        e.coefficients().setZero();
        e.coefficients()[i] = 1.0;
        const GradientField r = lift_jumps(e).lifting;
        Eigen::Index len = 0;
        for (const auto& b : r.blocks)
            len += b.size();
        Eigen::VectorXd flat(len);
        Eigen::Index off = 0;
        for (int a = 0; a < space->dim(); ++a) {
            const ModeSet& gm = space->grad_modes()[a];
            const double vol = mesh.cell_volume();
            const Eigen::VectorXd& b = r.blocks[static_cast<std::size_t>(a)];
            for (Eigen::Index j = 0; j < b.size(); ++j)
                flat[off + j] = b[j] * std::sqrt(vol * reference_mass(gm.modes()[static_cast<std::size_t>(j) % gm.size()], space->dim()));
            off += b.size();
        }
        cols.push_back(std::move(flat));
    }
    Eigen::MatrixXd g(cols.empty() ? 0 : cols.front().size(), n);
    for (Eigen::Index i = 0; i < n; ++i)
        g.col(i) = cols[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd lform = g.transpose() * g;

    Eigen::MatrixXd jform = Eigen::MatrixXd(op.jump());
    jform = 0.5 * (jform + jform.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ej(jform);
    if (ej.info() != Eigen::Success)
        throw std::runtime_error("jump-form eigen-solver failure");
    const double mu_max = ej.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < n; ++i)
        if (ej.eigenvalues()[i] > rank_tol * mu_max)
            keep.push_back(i);

    EmpiricalPenalty out;
    out.jump_rank = static_cast<Eigen::Index>(keep.size());
    out.witness = Eigen::VectorXd::Zero(n);
    if (keep.empty())
        return out;
    Eigen::MatrixXd s(n, out.jump_rank);
    for (Eigen::Index j = 0; j < out.jump_rank; ++j) {
        const Eigen::Index i = keep[static_cast<std::size_t>(j)];
        s.col(j) = ej.eigenvectors().col(i) / std::sqrt(ej.eigenvalues()[i]);
    }
    Eigen::MatrixXd reduced = s.transpose() * lform * s;
    reduced = 0.5 * (reduced + reduced.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(reduced);
    if (er.info() != Eigen::Success)
        throw std::runtime_error("lifting/jump eigen-solver failure");
    out.lambda_min = er.eigenvalues()[out.jump_rank - 1];
    out.witness = s * er.eigenvectors().col(out.jump_rank - 1);
    return out;
}

}  // namespace dgdiss
