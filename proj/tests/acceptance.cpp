// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "dgdiss/scenario_io.hpp"
#include "dgdiss/simulate.hpp"
#include "dgdiss/trace_constants.hpp"
#include "dgdiss/verify.hpp"
#include "support.hpp"

using namespace dgdiss;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void line(int id, bool ok, double seconds, double budget, const std::string& what) {
    const bool in_time = seconds <= budget;
    if (!(ok && in_time))
        ++failures;
    std::printf("criterion %d: %s  %s  [%.2f s, budget %.0f s%s]\n", id, ok && in_time ? "PASS" : "FAIL", what.c_str(),
                seconds, budget, in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

void criterion1() {
    Timer t;
    const SingleCellLinear e = single_cell_linear();
    const double err = std::max({std::abs(e.a_h - 0.5), std::abs(e.grad_norm_sq - 1.0), std::abs(e.a_num_broken + 0.5),
                                 std::abs(e.a_phy_sigma), std::abs(e.a_num_sigma - 0.5)});
    line(1, err <= 1e-12, t.seconds(), 1, fmt("single-cell u = x: max abs error %.2e (tol 1e-12)", err));
}

void criterion2() {
    Timer t;
    double eig = 0.0, probe = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double f = (k + 1.0) * (k + 2.0);
        eig = std::max(eig, std::abs(sharp_trace_constant(k).value - f) / f);
        probe = std::max(probe, 1.0 - rayleigh_sharpness_probe(k, 1000, 2024 + k) / f);
    }
    line(2, eig <= 1e-9 && probe <= 1e-6, t.seconds(), 1,
         fmt("lambda_max(A(k)) rel. error %.2e (tol 1e-9), probe shortfall %.2e (tol 1e-6), k = 0..8", eig, probe));
}

void criterion3() {
    Timer t;
    VerifyOptions opt;
    opt.samples = 1000;
    opt.seed = 31;
    const SuiteReport d = suite_decomposition_identity(opt);
    const SuiteReport br = suite_bassi_rebay(opt);
    // Independent check of a_h itself against the quadrature oracle on a subset.
    double oracle_err = 0.0;
    for (const FieldConfig& c : standard_configs()) {
        const auto space =
            make_space(build_mesh(c.dim, std::vector<int>(c.dim, c.cells), std::vector<double>(c.dim, 1.0)), c.order, 1);
        const ViscousOperator op = assemble_sip(space, SipParams{});
        for (int s = 0; s < 5; ++s) {
            const DgField u = random_field(space, 7000 + s);
            const DissipationBreakdown b = decompose(u, op);
            const double ref = oracle::sip_parts(to_oracle(u)).value(op.lambda());
            // a_h vanishes identically for k = 1 on one 1D cell at lambda*, so compare on the form's scale.
            oracle_err = std::max(oracle_err, std::abs(b.a_phy_sigma + b.a_num_sigma - ref) / b.scale());
        }
    }
    line(3, d.passed && br.passed && oracle_err <= 1e-10, t.seconds(), 30,
         fmt("1000 fields x 24 configs: identity %.2e, BR %.2e (tol 1e-10); oracle a_h %.2e (tol 1e-10)", d.worst, br.worst,
             oracle_err));
}

void criterion4() {
    Timer t;
    VerifyOptions opt;
    opt.samples = 1000;
    opt.seed = 41;
    const SuiteReport nn = suite_nonnegativity(opt);
    int found = 0, total = 0;
    double worst_witness = -1e300;
    for (const FieldConfig& c : standard_configs()) {
        const WitnessProbe w = probe_sub_threshold_witness(c, 0.9);
        ++total;
        if (w.a_num_sigma < 0.0)
            ++found;
        worst_witness = std::max(worst_witness, w.a_num_sigma / w.scale);
    }
    line(4, nn.passed && found == total, t.seconds(), 30,
         fmt("min a_num_sigma/scale at lambda* = %.2e (tol -1e-12); at 0.9 lambda_min negative witness in %.0f/%.0f configs",
             -nn.worst, found, total));
}

void criterion5() {
    Timer t;
    const SuiteReport r = suite_coercivity(VerifyOptions{});
    line(5, r.passed, t.seconds(), 60, "1.01 lambda*, 1D/2D, k <= 3: " + r.detail);
}

void criterion6() {
    Timer t;
    VerifyOptions opt;
    opt.samples = 1000;
    opt.seed = 61;
    const SuiteReport r = suite_consistency_identity(opt);
    line(6, r.passed, t.seconds(), 60, fmt("skeleton vs element-boundary vs lifting form: %.2e (tol 1e-11)", r.worst));
}

void criterion7() {
    Timer t;
    // Ledger identity over the shipped 200-step heat demo, with a_h recomputed by quadrature.
    ScenarioConfig cfg = load_config(std::string(DGDISS_CONFIG_DIR) + "/heat_demo.json");
    const ResolvedPenalty pen = resolve_lambda(cfg);
    auto space = make_space(build_mesh(cfg.dim, cfg.cells_per_axis, cfg.box_length), cfg.order, cfg.components);
    SipParams params;
    params.lambda = pen.lambda;
    SemiDiscreteSystem system(cfg, space, assemble_sip(space, params));
    TimeStepper stepper(system, Integrator::Midpoint);
    DgField u = project_initial(space, initial_condition_function(cfg));
    int steps = 0;
    double identity = 0.0;
    bool monotone = true;
    for (double time = 0.0; time < cfg.t_end - 1e-12 * cfg.dt; time += cfg.dt, ++steps) {
        DgField next = stepper.step(u, cfg.dt);
        const double k0 = kinetic_energy(u), k1 = kinetic_energy(next);
        DgField mid(space, 0.5 * (u.coefficients() + next.coefficients()));
        const double a = cfg.nu * oracle::sip_parts(to_oracle(mid)).value(pen.lambda);
        identity = std::max(identity, std::abs((k1 - k0) / cfg.dt + a) / a);
        monotone = monotone && k1 <= k0;
        u = std::move(next);
    }
    const ScenarioResult ledger = run_scenario(cfg);
    for (std::size_t i = 1; i < ledger.ledger.size(); ++i)
        monotone = monotone && ledger.ledger[i].kinetic_energy <= ledger.ledger[i - 1].kinetic_energy;

    // Convergence: k = 1..3, N = 4, 8, 16, 32, penalty 2 lambda*.
    bool rates_ok = true, decreasing = true;
    std::string rates;
    for (int k = 1; k <= 3; ++k) {
        double prev_err = 0.0, prev_num = 0.0, rate = 0.0;
        int ni = 0;
        for (int n : {4, 8, 16, 32}) {
            ScenarioConfig c;
            c.problem = Problem::Heat;
            c.cells_per_axis = {n};
            c.order = k;
            c.nu = 1.0;
            c.lambda = {LambdaMode::FactorOfStar, 2.0};
            c.t_end = 0.01;
            c.dt = 1e-5;
            c.initial.name = "sine";
            const ScenarioResult r = run_scenario(c);
            const auto exact = *heat_exact_solution(c);
            const double err = l2_error(r.final_field, [&](const Point& x) { return exact(x, r.final_time); }, k + 3);
            const double num = r.ledger.back().a_num_sigma;
            if (ni > 0) {
                rate = std::log2(prev_err / err);
                decreasing = decreasing && num < prev_num;
            }
            prev_err = err;
            prev_num = num;
            ++ni;
        }
        rates_ok = rates_ok && std::abs(rate - (k + 1)) <= 0.2;
        rates += fmt(" k=%.0f:%.3f", k, rate);
    }
    line(7, steps == 200 && identity <= 1e-11 && monotone && rates_ok && decreasing, t.seconds(), 300,
         fmt("%.0f-step identity %.2e (tol 1e-11), K non-increasing ", steps, identity) +
             (monotone ? "yes" : "no") + ", L2 rates (last pair, 2 lambda*)" + rates + ", a_num_sigma decreasing " +
             (decreasing ? "yes" : "no"));
}

void criterion8() {
    Timer t;
    const ScenarioConfig cfg = load_config(std::string(DGDISS_CONFIG_DIR) + "/burgers_underresolved.json");
    const bool at_star = cfg.lambda.mode == LambdaMode::FactorOfStar && cfg.lambda.value == 1.0;
    const ScenarioResult r = run_scenario(cfg);
    int negative = 0;
    double worst_num = 1e300, worst_eps = 1e300;
    for (const auto& row : r.ledger) {
        if (row.a_num_broken < 0.0)
            ++negative;
        worst_num = std::min(worst_num, row.a_num_sigma / row.scale);
        worst_eps = std::min(worst_eps, row.eps_tot / row.scale);
    }
    line(8, at_star && negative > 0 && worst_num >= -1e-11 && worst_eps >= -1e-11, t.seconds(), 600,
         fmt("burgers_underresolved (lambda = lambda*): %.0f rows with a_num_broken < 0; min a_num_sigma/scale %.2e, "
             "min eps_tot/scale %.2e (tol -1e-11)",
             negative, worst_num, worst_eps));
}

void criterion9() {
    Timer t;
    bool ok = true;
    for (int k = 1; k <= 8; ++k) {
        ok = ok && min_penalty(PenaltyFamily::QDg, k).lambda_star == k * (k + 1) / 2.0;
        ok = ok && min_penalty(PenaltyFamily::RtHdg, k).lambda_star == (k + 1.0) * (k + 2.0);
    }
    line(9, ok, t.seconds(), 1, "q-dg k(k+1)/2 and rt-hdg (k+1)(k+2), k = 1..8, exact");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
