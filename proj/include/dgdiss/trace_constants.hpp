#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgdiss/dgcore.hpp"

namespace dgdiss {

/// Sharp constant C^2 in |q(a)|^2 + |q(b)|^2 <= C^2/h int_a^b |q|^2 for q in P_k.
struct TraceConstant {
    int order = 0;
    double value = 0.0;
};

enum class PenaltyFamily { QDg, RtHdg };

struct PenaltyRecommendation {
    PenaltyFamily family = PenaltyFamily::QDg;
    int velocity_order = 1;
    double lambda_star = 0.0;
};

PenaltyFamily parse_penalty_family(const std::string& name);
std::string to_string(PenaltyFamily family);

/// A_mn = 4 sqrt(m+1/2) sqrt(n+1/2) for m+n even, zero otherwise.
Eigen::MatrixXd build_A_matrix(int k);

/// (k+1)(k+2) in closed form.
double trace_constant_formula(int k);

/// Largest eigenvalue of A(k) from a dense symmetric solve.
TraceConstant sharp_trace_constant(int k);

/// Largest (q(0)^2 + q(1)^2) / int_0^1 q^2 over random q in P_k with
/// standard-normal Legendre coefficients; the top eigenvector of A(k) is
/// included when `include_eigenvector` is set.
double rayleigh_sharpness_probe(int k, int num_samples, std::uint64_t seed, bool include_eigenvector = true);

/// Ratio (q(0)^2 + q(1)^2) / int_0^1 q^2 for Legendre coefficients c.
double endpoint_rayleigh_quotient(const std::vector<double>& legendre_coeffs);

/// Worst ||(grad v) n_K||^2_{dK} h_K / ||grad v||^2_K over samples v in [Q_{k+1}]^d on one
/// isotropic cell of width h. Samples are vectors of modal coefficients, laid out
/// component-major over the (k+2)^dim tensor modes. Zero-gradient samples are skipped;
/// returns 0 if every sample was skipped.
double verify_normal_gradient_trace(int dim, double h, int k_plus_1,
                                    const std::vector<std::vector<double>>& v_samples);

/// Standard-normal random samples of [Q_{k+1}]^d coefficients for the check above.
std::vector<std::vector<double>> random_qk_samples(int dim, int k_plus_1, int num_samples, std::uint64_t seed);

/// Trace-constant order that governs the SIP form on Q_k: the gradient space
/// has degree k-1 along the normal, so lambda* = C^2_{k-1} / 2 = k(k+1)/2.
int gradient_trace_order(int velocity_order);

/// Q-DG: k(k+1)/2 (k >= 1). RT-HDG: (k+1)(k+2) (k >= 0), reported as a formula only.
PenaltyRecommendation min_penalty(PenaltyFamily family, int k);

/// max_{v : J(v) > 0} ||R([v])||^2 / J(v) for the scalar Q_k space on `mesh`, from
/// a dense symmetric eigenproblem on the range of J. Directions with J-eigenvalue
/// below `rank_tol` times the largest one are treated as the kernel (continuous
/// fields) and excluded.
struct EmpiricalPenalty {
    double lambda_min = 0.0;
    /// Extremal direction (scalar component layout).
    Eigen::VectorXd witness;
    /// Numerical rank of J.
    Eigen::Index jump_rank = 0;
};
EmpiricalPenalty empirical_min_penalty(const PeriodicCartesianMesh& mesh, int order, double rank_tol = 1e-10);

}  // namespace dgdiss
