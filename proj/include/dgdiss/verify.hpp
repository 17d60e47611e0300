#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgdiss/dgcore.hpp"
#include "dgdiss/dissipation.hpp"

namespace dgdiss {

struct VerifyOptions {
    /// Penalty = lambda_factor * lambda* in the penalty-dependent suites.
    double lambda_factor = 1.0;
    /// Random fields per (dim, k, N) configuration.
    int samples = 200;
    std::uint64_t seed = 12345;
};

struct SuiteReport {
    std::string name;
    bool passed = false;
    /// Worst observed value of the suite's test statistic, compared against `tolerance`.
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct FieldConfig {
    int dim = 1;
    int order = 1;
    int cells = 1;
};
/// dim {1, 2} x k {1..4} x N {1, 2, 4}.
std::vector<FieldConfig> standard_configs();

/// Standard-normal modal coefficients.
DgField random_field(const SpacePtr& space, std::uint64_t seed);

/// max |a_phy_sigma + a_num_sigma - a_h| / |a_h|  <= 1e-10.
SuiteReport suite_decomposition_identity(const VerifyOptions& opt);
/// min a_num_sigma / scale >= -1e-12 over random fields plus the extremal
/// direction of every configuration.
SuiteReport suite_nonnegativity(const VerifyOptions& opt);
/// max |BR(u) - a_phy_sigma| / scale  <= 1e-10. a_phy_sigma vanishes identically
/// for k = 1 on a single cell, so it cannot serve as the reference magnitude.
SuiteReport suite_bassi_rebay(const VerifyOptions& opt);
/// Smallest mean-zero eigenvalue of the SIP operator >= 0 at 1.01 lambda_factor lambda*,
/// 1D and 2D, k <= 3.
SuiteReport suite_coercivity(const VerifyOptions& opt);
/// Skeleton, element-boundary and lifting forms of the consistency term agree to 1e-11.
SuiteReport suite_consistency_identity(const VerifyOptions& opt);
/// ||R||^2 <= lifting_bound(u).
SuiteReport suite_lifting_bound(const VerifyOptions& opt);
/// lambda_max(A(k)) = (k+1)(k+2), k = 0..8, to 1e-9; probe within 1e-6.
SuiteReport suite_trace_constants(const VerifyOptions& opt);
/// min_penalty formulas for k = 1..8, exact.
SuiteReport suite_penalty_formulas(const VerifyOptions& opt);

std::vector<SuiteReport> run_all_suites(const VerifyOptions& opt);

/// Evaluates a_num_sigma along the extremal direction with lambda = factor * lambda_min.
struct WitnessProbe {
    double lambda_min = 0.0;
    double lambda = 0.0;
    double a_num_sigma = 0.0;
    double scale = 0.0;
};
WitnessProbe probe_sub_threshold_witness(const FieldConfig& config, double factor);

/// u = x on one periodic cell of [0, 1], k = 1, lambda = 3/2.
struct SingleCellLinear {
    double a_h = 0.0;
    double grad_norm_sq = 0.0;
    double a_num_broken = 0.0;
    double a_phy_sigma = 0.0;
    double a_num_sigma = 0.0;
};
SingleCellLinear single_cell_linear();

}  // namespace dgdiss
