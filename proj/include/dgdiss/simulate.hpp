#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "dgdiss/dgcore.hpp"
#include "dgdiss/dissipation.hpp"
#include "dgdiss/sip.hpp"

namespace dgdiss {

enum class Problem { Heat, AdvectionDiffusion, Burgers };
enum class Integrator { Midpoint, Rk4 };
enum class EvaluationPoint { Midpoint, Endpoint };
enum class LambdaMode { FactorOfStar, Absolute };

std::string to_string(Problem p);
std::string to_string(Integrator i);
std::string to_string(EvaluationPoint e);
std::string to_string(LambdaMode m);

struct LambdaSpec {
    LambdaMode mode = LambdaMode::FactorOfStar;
    double value = 1.0;
};

/// Named initial condition. Recognised names and parameters (defaults):
///   constant     value (1)
///   sine         amplitude (1), wavenumber (1), offset (0):  offset + A prod_i sin(2 pi n x_i / L_i)
///   steep        amplitude (1), width (0.1), offset (0):     offset + A tanh(sin(2 pi x_0/L_0)/width)/tanh(1/width)
///   taylor_green amplitude (1); dim 2 or 3 vector field
///   random       amplitude (1), modes (4); seeded random Fourier series along every axis
struct InitialCondition {
    std::string name = "sine";
    std::map<std::string, double> params;

    double param(const std::string& key, double fallback) const;
};

struct ScenarioConfig {
    Problem problem = Problem::Heat;
    int dim = 1;
    std::vector<int> cells_per_axis{8};
    std::vector<double> box_length{1.0};
    int order = 1;
    int components = 1;
    double nu = 1.0;
    LambdaSpec lambda;
    bool allow_sub_threshold_lambda = false;
    double t_end = 0.1;
    double dt = 1e-3;
    InitialCondition initial;
    std::string output;
    std::string snapshot;
    std::uint64_t seed = 0;
    Integrator integrator = Integrator::Midpoint;
    EvaluationPoint evaluate_at = EvaluationPoint::Midpoint;
    std::vector<double> advection_velocity;
    /// Per-axis volume quadrature points for projection and convection; 0 = default.
    int volume_quadrature_points = 0;
    double nonlinear_tolerance = 1e-13;
    int max_nonlinear_iterations = 500;
};

/// Checks the invariants that do not need a mesh; throws std::invalid_argument
/// listing every violation.
void validate(const ScenarioConfig& config);

/// One ledger row. Dissipation columns are rates, i.e. already multiplied by nu
/// (convective_rate is c_h(u; u, u) itself). Hence
///   eps_tot = -dKdt - a_phy_sigma,  a_total = a_phy_sigma + a_num_sigma = a_phy_broken + a_num_broken.
struct DissipationSample {
    double t = 0.0;
    double kinetic_energy = 0.0;
    double dKdt = 0.0;
    double a_total = 0.0;
    double a_phy_sigma = 0.0;
    double a_num_sigma = 0.0;
    double a_phy_broken = 0.0;
    double a_num_broken = 0.0;
    double convective_rate = 0.0;
    double eps_tot = 0.0;
    /// Not written to the ledger: magnitude for relative tolerances.
    double scale = 0.0;
};

/// Discontinuous Galerkin divergence form of sum_i d(u^2/2)/dx_i with a local
/// Lax-Friedrichs facet flux, tested against every basis function. `energy_rate`
/// is c_h(u; u, u) = residual . u; it is not zero in general.
struct ConvectionResult {
    Eigen::VectorXd residual;
    double energy_rate = 0.0;
};

class BurgersConvection {
public:
    /// quad_points = 0 picks ceil((3k+2)/2), exact for degree 3k+1 integrands.
    BurgersConvection(SpacePtr space, int quad_points = 0);
    ConvectionResult evaluate(const DgField& u) const;

private:
    SpacePtr space_;
    VolumeRule volume_;
    std::vector<std::vector<double>> phi_;                  // [q][mode]
    std::vector<std::vector<Point>> grad_phi_;              // [q][mode]
    std::vector<FacetRule> facet_rules_;                    // per axis
    std::vector<std::vector<std::vector<double>>> plus_phi_, minus_phi_;  // [axis][q][mode]
};

ConvectionResult convection_burgers(const DgField& u);

/// Upwind-discretised constant-velocity advection on one scalar component,
/// a(u, v) = v^T C u with u^T C u = 1/2 sum_F |beta . n_F| oint [u]^2.
SparseMatrix assemble_advection(const DgSpace& space, const std::vector<double>& velocity);

/// Replicates a scalar-component operator onto every component of the field layout.
SparseMatrix expand_components(const SparseMatrix& scalar, const DgSpace& space);

/// Spatial operators for one scenario, M du/dt = -(nu A + C) u - N(u).
class SemiDiscreteSystem {
public:
    SemiDiscreteSystem(const ScenarioConfig& config, SpacePtr space, ViscousOperator viscous);

    const DgSpace& space() const { return *space_; }
    const ViscousOperator& viscous() const { return viscous_; }
    const Eigen::VectorXd& mass() const { return mass_; }
    double nu() const { return nu_; }
    Problem problem() const { return problem_; }

    /// nu A + C on the full layout.
    const SparseMatrix& linear() const { return linear_; }
    /// Nonlinear residual (zero unless Burgers).
    ConvectionResult nonlinear(const DgField& u) const;
    /// c_h(u; u, u): upwind energy rate for advection, Burgers residual . u, zero for heat.
    double convective_rate(const DgField& u) const;
    /// du/dt.
    Eigen::VectorXd rhs(const DgField& u) const;

private:
    SpacePtr space_;
    ViscousOperator viscous_;
    Problem problem_;
    double nu_;
    Eigen::VectorXd mass_;
    SparseMatrix linear_;
    SparseMatrix advection_;
    std::optional<BurgersConvection> burgers_;
};

/// Implicit midpoint (or classical RK4) stepper over a SemiDiscreteSystem.
class TimeStepper {
public:
    TimeStepper(const SemiDiscreteSystem& system, Integrator integrator, double nonlinear_tolerance = 1e-13,
                int max_iterations = 500);

    /// Advances u by dt. Throws std::runtime_error when the nonlinear solve fails.
    DgField step(const DgField& u, double dt);
    /// Fixed-point iterations used in the last nonlinear step.
    int last_iterations() const { return last_iterations_; }

private:
    DgField step_midpoint(const DgField& u, double dt);
    DgField step_rk4(const DgField& u, double dt);
    void factor(double dt);

    const SemiDiscreteSystem& system_;
    Integrator integrator_;
    double tol_;
    int max_iter_;
    double factored_dt_ = -1.0;
    SparseMatrix lhs_;
    Eigen::SparseLU<SparseMatrix> solver_;
    int last_iterations_ = 0;
};

DgField step_midpoint(const SemiDiscreteSystem& system, const DgField& u, double dt);

/// Ledger row for the step u0 -> u1 at time t1.
DissipationSample make_sample(const SemiDiscreteSystem& system, const DgField& u0, const DgField& u1, double t1,
                              double dt, EvaluationPoint where);

struct ResolvedPenalty {
    double lambda = 0.0;
    double lambda_star = 0.0;
    bool certified = false;
};
/// lambda = factor * lambda* or absolute. Sub-threshold values need
/// allow_sub_threshold_lambda and print a warning.
ResolvedPenalty resolve_lambda(const ScenarioConfig& config);

/// Initial field and exact heat solution (where known).
VectorFunction initial_condition_function(const ScenarioConfig& config);
/// Exact solution of the heat equation for constant/sine data; nullopt otherwise.
std::optional<std::function<std::array<double, 3>(const Point&, double)>> heat_exact_solution(
    const ScenarioConfig& config);

/// L2 error against a reference function, by Gauss quadrature with `points` per axis.
double l2_error(const DgField& u, const VectorFunction& exact, int points);

struct ScenarioResult {
    std::vector<DissipationSample> ledger;
    DgField final_field;
    double final_time = 0.0;
    ResolvedPenalty penalty;
};

using SampleSink = std::function<void(const DissipationSample&)>;

/// Builds mesh, space and operators from the config, projects the initial
/// condition and steps to t_end, emitting one sample per step to `sink` as it
/// is produced.
ScenarioResult run_scenario(const ScenarioConfig& config, const SampleSink& sink = {});

}  // namespace dgdiss
