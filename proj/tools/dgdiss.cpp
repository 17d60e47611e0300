#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dgdiss/scenario_io.hpp"
#include "dgdiss/simulate.hpp"
#include "dgdiss/trace_constants.hpp"
#include "dgdiss/verify.hpp"

using namespace dgdiss;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string fmt(double v, const char* f = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// One decimal place for integral values ("1.0", "30.0"), %.10g otherwise.
std::string fmt_penalty(double v) {
    if (std::abs(v - std::round(v)) < 1e-12 * std::max(1.0, std::abs(v)))
        return fmt(std::round(v), "%.1f");
    return fmt(v);
}

int cmd_trace_constant(int k) {
    if (k < 0 || k > 12) {
        std::cerr << "error: --order must be in 0..12\n";
        return kUsage;
    }
    const double formula = trace_constant_formula(k);
    const double eig = sharp_trace_constant(k).value;
    const double probe = rayleigh_sharpness_probe(k, 1000, 1);
    const double rel = std::abs(eig - formula) / formula;
    std::cout << "C2 = " << fmt(formula) << "\n"
              << "lambda_max(A) = " << fmt(eig, "%.15g") << "  (relative error " << fmt(rel, "%.3e") << ")\n"
              << "sharpness probe = " << fmt(probe, "%.15g") << "  (" << fmt(probe / formula, "%.12f")
              << " of C2)\n";
    if (rel > 1e-9) {
        std::cerr << "error: eigenvalue disagrees with (k+1)(k+2)\n";
        return kFail;
    }
    return kOk;
}

int cmd_min_penalty(const std::string& family_name, int k, bool empirical, int dim, int cells, double length) {
    PenaltyFamily family;
    try {
        family = parse_penalty_family(family_name);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    PenaltyRecommendation r;
    try {
        r = min_penalty(family, k);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    std::cout << "lambda_star = " << fmt_penalty(r.lambda_star) << "\n";
    if (empirical) {
        if (family != PenaltyFamily::QDg) {
            std::cerr << "error: --empirical is available for q-dg only\n";
            return kUsage;
        }
        if (dim < 1 || dim > 3 || cells < 1 || !(length > 0.0)) {
            std::cerr << "error: --empirical needs dim in 1..3, cells >= 1 and length > 0\n";
            return kUsage;
        }
        const EmpiricalPenalty e = empirical_min_penalty(
            build_mesh(dim, std::vector<int>(dim, cells), std::vector<double>(dim, length)), k);
        std::cout << "lambda_empirical = " << fmt_penalty(e.lambda_min) << "  (jump rank " << e.jump_rank << ")\n";
    }
    return kOk;
}

int cmd_verify(const VerifyOptions& opt, bool single_cell) {
    if (single_cell) {
        const SingleCellLinear e = single_cell_linear();
        std::cout << "a_h           = " << fmt(e.a_h, "%.15g") << "\n"
                  << "grad_norm_sq  = " << fmt(e.grad_norm_sq, "%.15g") << "\n"
                  << "a_num_broken  = " << fmt(e.a_num_broken, "%.15g") << "\n"
                  << "a_num_sigma   = " << fmt(e.a_num_sigma, "%.15g") << "\n"
                  << "a_phy_sigma   = " << fmt(e.a_phy_sigma, "%.15g") << "\n";
        const bool ok = std::abs(e.a_h - 0.5) <= 1e-12 && std::abs(e.grad_norm_sq - 1.0) <= 1e-12 &&
                        std::abs(e.a_num_broken + 0.5) <= 1e-12 && std::abs(e.a_num_sigma - 0.5) <= 1e-12 &&
                        std::abs(e.a_phy_sigma) <= 1e-12;
        return ok ? kOk : kFail;
    }
    const std::vector<SuiteReport> reports = run_all_suites(opt);
    std::vector<std::string> failed;
    std::printf("%-26s %-6s %-12s %-10s %s\n", "suite", "result", "worst", "tolerance", "detail");
    for (const auto& r : reports) {
        std::printf("%-26s %-6s %-12.4e %-10.1e %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.worst,
                    r.tolerance, r.detail.c_str());
        if (!r.passed)
            failed.push_back(r.name);
    }
    if (!failed.empty()) {
        std::cerr << "failing suites:";
        for (const auto& f : failed)
            std::cerr << " " << f;
        std::cerr << "\n";
        return kFail;
    }
    return kOk;
}

int cmd_run(const std::string& path, const std::string& output_override, const std::string& snapshot_override) {
    ScenarioConfig config;
    try {
        config = load_config(path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    if (!output_override.empty())
        config.output = output_override;
    if (!snapshot_override.empty())
        config.snapshot = snapshot_override;
    if (config.output.empty()) {
        std::cerr << "error: no ledger output path (set \"output\" or pass --output)\n";
        return kUsage;
    }
    ResolvedPenalty penalty;
    try {
        penalty = resolve_lambda(config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    std::ofstream ledger(config.output, std::ios::binary);
    if (!ledger) {
        std::cerr << "error: cannot write " << config.output << "\n";
        return kUsage;
    }
    write_ledger_header(ledger, ledger_metadata(config, penalty));
    ScenarioResult result;
    try {
        result = run_scenario(config, [&](const DissipationSample& row) {
            write_ledger_row(ledger, row);
            ledger.flush();
        });
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << " (partial ledger in " << config.output << ")\n";
        return kFail;
    }
    if (!config.snapshot.empty()) {
        std::ofstream snap(config.snapshot, std::ios::binary);
        write_snapshot(snap, result.final_field, result.final_time);
    }
    std::cout << "wrote " << result.ledger.size() << " rows to " << config.output << "\n";
    return kOk;
}

struct ConvergenceArgs {
    std::string problem = "heat";
    std::vector<int> orders{1, 2, 3};
    std::vector<int> meshes{4, 8, 16, 32};
    bool projection_only = false;
    std::string initial = "sine";
    int dim = 1;
    double nu = 1.0;
    double t_end = 0.01;
    double dt = 1e-5;
    double lambda_factor = 2.0;
};

int cmd_convergence(const ConvergenceArgs& a) {
    if (a.problem != "heat") {
        std::cerr << "error: convergence sweeps need an analytic solution; only --problem heat is supported\n";
        return kUsage;
    }
    if (a.initial != "sine" && a.initial != "constant") {
        std::cerr << "error: --initial must be sine or constant\n";
        return kUsage;
    }
    bool ok = true;
    std::printf("%-3s %-5s %-22s %-8s %-22s\n", "k", "N", "L2 error", "rate", "a_num_sigma");
    for (int k : a.orders) {
        double prev_err = -1.0, prev_num = -1.0, last_rate = 0.0;
        bool exact = true, decreasing = true;
        for (std::size_t i = 0; i < a.meshes.size(); ++i) {
            ScenarioConfig c;
            c.problem = Problem::Heat;
            c.dim = a.dim;
            c.cells_per_axis.assign(a.dim, a.meshes[i]);
            c.box_length.assign(a.dim, 1.0);
            c.order = k;
            c.nu = a.nu;
            c.lambda = {LambdaMode::FactorOfStar, a.lambda_factor};
            c.t_end = a.t_end;
            c.dt = a.dt;
            c.initial.name = a.initial;
            double err, num;
            try {
                validate(c);
                const auto exact_fn = *heat_exact_solution(c);
                if (a.projection_only) {
                    auto mesh = build_mesh(c.dim, c.cells_per_axis, c.box_length);
                    const DgField u = project_initial(make_space(std::move(mesh), k, 1),
                                                      initial_condition_function(c), k + 3);
                    err = l2_error(u, [&](const Point& x) { return exact_fn(x, 0.0); }, k + 3);
                    SipParams p;
                    p.lambda = a.lambda_factor * min_penalty(PenaltyFamily::QDg, k).lambda_star;
                    num = decompose(u, assemble_sip(u.space_ptr(), p)).a_num_sigma;
                } else {
                    const ScenarioResult r = run_scenario(c);
                    err = l2_error(r.final_field, [&](const Point& x) { return exact_fn(x, r.final_time); }, k + 3);
                    num = r.ledger.back().a_num_sigma / c.nu;
                }
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kUsage;
            }
            std::string rate = "-";
            if (prev_err >= 0.0) {
                if (err < 1e-13 && prev_err < 1e-13) {
                    rate = "exact";
                } else {
                    last_rate = std::log(prev_err / err) / std::log(static_cast<double>(a.meshes[i]) / a.meshes[i - 1]);
                    rate = fmt(last_rate, "%.3f");
                    exact = false;
                }
                if (!(num < prev_num) && !(std::abs(num) < 1e-13 && std::abs(prev_num) < 1e-13))
                    decreasing = false;
            }
            std::printf("%-3d %-5d %-22.15e %-8s %-22.15e\n", k, a.meshes[i], err, rate.c_str(), num);
            prev_err = err;
            prev_num = num;
        }
        if (a.meshes.size() >= 2 && !exact) {
            const bool rate_ok = std::abs(last_rate - (k + 1)) <= 0.2;
            std::printf("k=%d: last-pair rate %.3f (%s), a_num_sigma %s\n", k, last_rate,
                        rate_ok ? "within 0.2 of k+1" : "NOT within 0.2 of k+1",
                        decreasing ? "strictly decreasing" : "NOT strictly decreasing");
            ok = ok && rate_ok && decreasing;
        } else if (exact) {
            std::printf("k=%d: exact\n", k);
        }
    }
    return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DG viscous dissipation decomposition toolkit"};
    app.require_subcommand(1);

    int tc_order = 0;
    auto* tc = app.add_subcommand("trace-constant", "Sharp endpoint trace constant (k+1)(k+2) and its checks");
    tc->add_option("--order,-k", tc_order, "Polynomial order k (0..12)")->required();

    std::string family = "q-dg";
    int mp_order = 1, mp_dim = 1, mp_cells = 1;
    double mp_length = 1.0;
    bool mp_empirical = false;
    auto* mp = app.add_subcommand("min-penalty", "Minimal penalty lambda* for a method family");
    mp->add_option("--family", family, "q-dg or rt-hdg")->required();
    mp->add_option("--order,-k", mp_order, "Velocity polynomial order")->required();
    mp->add_flag("--empirical", mp_empirical, "Also compute the smallest admissible lambda on a mesh (q-dg)");
    mp->add_option("--dim", mp_dim, "Mesh dimension for --empirical");
    mp->add_option("--cells", mp_cells, "Cells per axis for --empirical");
    mp->add_option("--length", mp_length, "Box length for --empirical");

    VerifyOptions vopt;
    bool ex3 = false;
    auto* vf = app.add_subcommand("verify", "Run the property suites and print a pass/fail table");
    vf->add_option("--lambda-factor", vopt.lambda_factor, "Penalty as a multiple of lambda*");
    vf->add_option("--samples", vopt.samples, "Random fields per configuration")->check(CLI::PositiveNumber);
    vf->add_option("--seed", vopt.seed, "Base seed");
    vf->add_flag("--example3", ex3, "Print the single-cell u = x numbers instead");

    std::string cfg, out_override, snap_override;
    auto* run = app.add_subcommand("run", "Run a scenario and write its dissipation ledger");
    run->add_option("--config", cfg, "Scenario JSON file")->required();
    run->add_option("--output", out_override, "Ledger path (overrides the config)");
    run->add_option("--snapshot", snap_override, "Final-field snapshot path (overrides the config)");

    ConvergenceArgs ca;
    auto* cv = app.add_subcommand("convergence", "L2 convergence sweep for problems with a known solution");
    cv->add_option("--problem", ca.problem, "heat");
    cv->add_option("--orders", ca.orders, "Polynomial orders")->delimiter(',');
    cv->add_option("--meshes", ca.meshes, "Cells per axis, coarse to fine")->delimiter(',');
    cv->add_flag("--projection-only", ca.projection_only, "Measure the initial projection only");
    cv->add_option("--initial", ca.initial, "sine or constant");
    cv->add_option("--dim", ca.dim, "Dimension");
    cv->add_option("--nu", ca.nu, "Viscosity");
    cv->add_option("--t-end", ca.t_end, "Final time");
    cv->add_option("--dt", ca.dt, "Time step");
    cv->add_option("--lambda-factor", ca.lambda_factor, "Penalty as a multiple of lambda*");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*tc)
            return cmd_trace_constant(tc_order);
        if (*mp)
            return cmd_min_penalty(family, mp_order, mp_empirical, mp_dim, mp_cells, mp_length);
        if (*vf)
            return cmd_verify(vopt, ex3);
        if (*run)
            return cmd_run(cfg, out_override, snap_override);
        if (*cv)
            return cmd_convergence(ca);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
