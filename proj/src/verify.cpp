#include "dgdiss/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>

#include "dgdiss/parallel.hpp"
#include "dgdiss/sip.hpp"
#include "dgdiss/trace_constants.hpp"

namespace dgdiss {

namespace {

std::string describe(const FieldConfig& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "dim=%d k=%d N=%d", c.dim, c.order, c.cells);
    return buf;
}

SpacePtr space_for(const FieldConfig& c) {
    return make_space(build_mesh(c.dim, std::vector<int>(c.dim, c.cells), std::vector<double>(c.dim, 1.0)), c.order,
                      1);
}

ViscousOperator op_for(const SpacePtr& space, double factor) {
    SipParams p;
    p.lambda = factor * min_penalty(PenaltyFamily::QDg, space->order()).lambda_star;
    return assemble_sip(space, p);
}

/// Largest statistic over every (config, sample); `stat` returns the value to
/// maximise for one random field.
template <class Stat>
std::pair<double, std::string> sweep(const VerifyOptions& opt, const std::vector<FieldConfig>& configs, double factor,
                                     Stat stat) {
    double worst = -std::numeric_limits<double>::infinity();
    std::string where;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        const SpacePtr space = space_for(configs[ci]);
        const ViscousOperator op = op_for(space, factor);
        std::vector<double> vals(static_cast<std::size_t>(opt.samples));
        parallel_for(vals.size(), [&](std::size_t s) {
            const DgField u = random_field(space, sample_seed(opt.seed, ci * 1000003ULL + s));
            vals[s] = stat(u, op);
        });
        for (std::size_t s = 0; s < vals.size(); ++s)
            if (!(vals[s] <= worst)) {
                worst = vals[s];
                where = describe(configs[ci]) + " sample " + std::to_string(s);
            }
    }
    return {worst, where};
}

SuiteReport report(std::string name, double worst, double tol, std::string detail) {
    SuiteReport r;
    r.name = std::move(name);
    r.worst = worst;
    r.tolerance = tol;
    r.passed = worst <= tol;
    r.detail = std::move(detail);
    return r;
}

}  // namespace

std::vector<FieldConfig> standard_configs() {
    std::vector<FieldConfig> out;
    for (int dim : {1, 2})
        for (int k = 1; k <= 4; ++k)
            for (int n : {1, 2, 4})
                out.push_back({dim, k, n});
    return out;
}

DgField random_field(const SpacePtr& space, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    DgField u(space);
    for (Eigen::Index i = 0; i < u.coefficients().size(); ++i)
        u.coefficients()[i] = normal(rng);
    return u;
}

SuiteReport suite_decomposition_identity(const VerifyOptions& opt) {
    const auto [worst, where] = sweep(opt, standard_configs(), opt.lambda_factor, [](const DgField& u, const ViscousOperator& op) {
        const DissipationBreakdown b = decompose(u, op);
        return std::abs(b.a_phy_sigma + b.a_num_sigma - b.a_total) / std::abs(b.a_total);
    });
    return report("decomposition_identity", worst, 1e-10, "worst at " + where);
}

SuiteReport suite_nonnegativity(const VerifyOptions& opt) {
    auto [worst, where] = sweep(opt, standard_configs(), opt.lambda_factor, [](const DgField& u, const ViscousOperator& op) {
        const DissipationBreakdown b = decompose(u, op);
        return -b.a_num_sigma / b.scale();
    });
    std::string witness;
    for (const FieldConfig& c : standard_configs()) {
        const SpacePtr space = space_for(c);
        const ViscousOperator op = op_for(space, opt.lambda_factor);
        const EmpiricalPenalty e = empirical_min_penalty(space->mesh(), c.order);
        if (e.jump_rank == 0)
            continue;
        const DissipationBreakdown b = decompose(DgField(space, e.witness), op);
        const double v = -b.a_num_sigma / b.scale();
        if (v > worst) {
            worst = v;
            where = describe(c) + " extremal direction";
        }
        if (b.a_num_sigma < -1e-12 * b.scale() && witness.empty()) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "; witness %s: a_num_sigma = %.6e (lambda = %.6g, lambda_min = %.6g)",
                          describe(c).c_str(), b.a_num_sigma, op.lambda(), e.lambda_min);
            witness = buf;
        }
    }
    return report("nonnegativity", worst, 1e-12, "worst -a_num_sigma/scale at " + where + witness);
}

SuiteReport suite_bassi_rebay(const VerifyOptions& opt) {
    const auto [worst, where] = sweep(opt, standard_configs(), opt.lambda_factor, [](const DgField& u, const ViscousOperator& op) {
        const DissipationBreakdown b = decompose(u, op);
        return std::abs(bassi_rebay_value(u) - b.a_phy_sigma) / b.scale();
    });
    return report("bassi_rebay_equivalence", worst, 1e-10, "worst at " + where);
}

SuiteReport suite_coercivity(const VerifyOptions& opt) {
    double worst = -std::numeric_limits<double>::infinity();
    std::string where;
    std::vector<FieldConfig> configs;
    for (int k = 1; k <= 3; ++k) {
        for (int n : {1, 2, 4, 8})
            configs.push_back({1, k, n});
        for (int n : {1, 2, 4})
            configs.push_back({2, k, n});
    }
    for (const FieldConfig& c : configs) {
        const SpacePtr space = space_for(c);
        const ViscousOperator op = op_for(space, 1.01 * opt.lambda_factor);
        const double mu = min_mean_zero_eigenvalue(op).min_eigenvalue;
        if (-mu > worst) {
            worst = -mu;
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s: min eigenvalue %.6e", describe(c).c_str(), mu);
            where = buf;
        }
    }
    return report("coercivity", worst, 0.0, "smallest at " + where);
}

SuiteReport suite_consistency_identity(const VerifyOptions& opt) {
    const auto [worst, where] = sweep(opt, standard_configs(), 1.0, [](const DgField& u, const ViscousOperator&) {
        const double skel = consistency_skeleton(u);
        const double elem = consistency_element_boundary(u);
        const double lift = lifting_gradient_inner(u);
        const double ref = std::max({std::abs(skel), std::abs(elem), std::abs(lift)});
        return std::max(std::abs(skel - elem), std::abs(skel - lift)) / ref;
    });
    return report("skeleton_identity", worst, 1e-11, "worst at " + where);
}

SuiteReport suite_lifting_bound(const VerifyOptions& opt) {
    const auto [worst, where] = sweep(opt, standard_configs(), 1.0, [](const DgField& u, const ViscousOperator&) {
        return norm_sq(lift_jumps(u).lifting) / lifting_bound(u) - 1.0;
    });
    return report("lifting_bound", worst, 1e-12, "max ||R||^2/bound - 1 at " + where);
}

SuiteReport suite_trace_constants(const VerifyOptions& opt) {
    double eig = 0.0, probe = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double f = trace_constant_formula(k);
        eig = std::max(eig, std::abs(sharp_trace_constant(k).value - f) / f);
        probe = std::max(probe, 1.0 - rayleigh_sharpness_probe(k, 1000, opt.seed + k) / f);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "eigenvalue rel. error %.3e (tol 1e-9), probe shortfall %.3e (tol 1e-6)", eig, probe);
    SuiteReport r = report("trace_constants", eig, 1e-9, buf);
    r.passed = eig <= 1e-9 && probe <= 1e-6;
    return r;
}

SuiteReport suite_penalty_formulas(const VerifyOptions&) {
    double worst = 0.0;
    for (int k = 1; k <= 8; ++k) {
        worst = std::max(worst, std::abs(min_penalty(PenaltyFamily::QDg, k).lambda_star - k * (k + 1) / 2.0));
        worst = std::max(worst, std::abs(min_penalty(PenaltyFamily::RtHdg, k).lambda_star - (k + 1.0) * (k + 2.0)));
    }
    return report("penalty_formulas", worst, 0.0, "k = 1..8");
}

std::vector<SuiteReport> run_all_suites(const VerifyOptions& opt) {
    return {suite_decomposition_identity(opt), suite_nonnegativity(opt),       suite_bassi_rebay(opt),
            suite_coercivity(opt),             suite_consistency_identity(opt), suite_lifting_bound(opt),
            suite_trace_constants(opt),        suite_penalty_formulas(opt)};
}

WitnessProbe probe_sub_threshold_witness(const FieldConfig& config, double factor) {
    const SpacePtr space = space_for(config);
    const EmpiricalPenalty e = empirical_min_penalty(space->mesh(), config.order);
    WitnessProbe p;
    p.lambda_min = e.lambda_min;
    p.lambda = factor * e.lambda_min;
    SipParams params;
    params.lambda = p.lambda;
    const DissipationBreakdown b = decompose(DgField(space, e.witness), assemble_sip(space, params));
    p.a_num_sigma = b.a_num_sigma;
    p.scale = b.scale();
    return p;
}

SingleCellLinear single_cell_linear() {
    const SpacePtr space = make_space(build_mesh(1, {1}, {1.0}), 1, 1);
    // x = 1/2 + 1/2 L_1(x) on [0, 1].
    DgField u(space);
    u.coeff(0, 0, 0) = 0.5;
    u.coeff(0, 0, 1) = 0.5;
    SipParams p;
    p.lambda = 1.5;
    const DissipationBreakdown b = decompose(u, assemble_sip(space, p));
    return {b.a_total, b.a_phy_broken, b.a_num_broken, b.a_phy_sigma, b.a_num_sigma};
}

}  // namespace dgdiss
