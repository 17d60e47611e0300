#include "dgdiss/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dgdiss/trace_constants.hpp"

namespace dgdiss {

std::string to_string(Problem p) {
    switch (p) {
    case Problem::Heat: return "heat";
    case Problem::AdvectionDiffusion: return "advection_diffusion";
    case Problem::Burgers: return "burgers";
    }
    return "?";
}
std::string to_string(Integrator i) { return i == Integrator::Midpoint ? "midpoint" : "rk4"; }
std::string to_string(EvaluationPoint e) { return e == EvaluationPoint::Midpoint ? "midpoint" : "endpoint"; }
std::string to_string(LambdaMode m) { return m == LambdaMode::FactorOfStar ? "factor" : "absolute"; }

double InitialCondition::param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void validate(const ScenarioConfig& c) {
    std::vector<std::string> errors;
    if (c.dim < 1 || c.dim > 3)
        errors.push_back("dim must be 1, 2 or 3");
    if (static_cast<int>(c.cells_per_axis.size()) != c.dim)
        errors.push_back("cells_per_axis needs one entry per axis");
    for (int n : c.cells_per_axis)
        if (n < 1)
            errors.push_back("cells_per_axis entries must be >= 1");
    if (static_cast<int>(c.box_length.size()) != c.dim)
        errors.push_back("box_length needs one entry per axis");
    for (double l : c.box_length)
        if (!(l > 0.0))
            errors.push_back("box_length entries must be positive");
    if (c.order < 1)
        errors.push_back("order must be >= 1");
    if (c.components != 1 && c.components != c.dim)
        errors.push_back("components must be 1 or dim");
    if (!(c.nu >= 0.0))
        errors.push_back("nu must be non-negative");
    if (!(c.lambda.value > 0.0))
        errors.push_back("lambda value must be positive");
    if (!(c.dt > 0.0))
        errors.push_back("dt must be positive");
    if (!(c.t_end >= c.dt))
        errors.push_back("t_end must be >= dt");
    if (c.problem == Problem::Burgers && c.components != 1)
        errors.push_back("burgers is a scalar problem (components = 1)");
    if (c.problem == Problem::AdvectionDiffusion) {
        if (c.components != 1)
            errors.push_back("advection_diffusion is a scalar problem (components = 1)");
        if (static_cast<int>(c.advection_velocity.size()) != c.dim)
            errors.push_back("advection_velocity needs one entry per axis");
    }
    static const char* known[] = {"constant", "sine", "steep", "taylor_green", "random"};
    if (std::find(std::begin(known), std::end(known), c.initial.name) == std::end(known))
        errors.push_back("unknown initial condition '" + c.initial.name + "'");
    if (c.initial.name == "taylor_green" && (c.dim < 2 || c.components != c.dim))
        errors.push_back("taylor_green needs dim >= 2 and components = dim");
    if (c.volume_quadrature_points < 0)
        errors.push_back("volume_quadrature_points must be >= 0");
    if (!errors.empty()) {
        std::ostringstream os;
        os << "invalid scenario:";
        for (const auto& e : errors)
            os << "\n  - " << e;
        throw std::invalid_argument(os.str());
    }
}

// ---------------------------------------------------------------------------
// Convection
// ---------------------------------------------------------------------------

BurgersConvection::BurgersConvection(SpacePtr space, int quad_points) : space_(std::move(space)) {
    if (space_->components() != 1)
        throw std::invalid_argument("Burgers convection acts on scalar fields");
    const int k = space_->order();
    const int dim = space_->dim();
    const int nq = quad_points > 0 ? quad_points : (3 * k + 3) / 2;
    volume_ = volume_rule(*space_, nq);
    const auto& modes = space_->basis().modes.modes();

    auto basis_at = [&](const Point& xi, std::vector<double>& val, std::vector<Point>* grad) {
        std::array<std::vector<double>, 3> v, d;
        for (int a = 0; a < dim; ++a) {
            v[a] = eval_legendre(k, xi[a]);
            d[a] = eval_legendre_derivative(k, xi[a]);
        }
        val.assign(modes.size(), 1.0);
        if (grad)
            grad->assign(modes.size(), Point{0.0, 0.0, 0.0});
        for (std::size_t i = 0; i < modes.size(); ++i) {
            for (int a = 0; a < dim; ++a)
                val[i] *= v[a][modes[i][a]];
            if (grad)
                for (int g = 0; g < dim; ++g) {
                    double p = 1.0 / space_->mesh().h(g);
                    for (int a = 0; a < dim; ++a)
                        p *= (a == g) ? d[a][modes[i][a]] : v[a][modes[i][a]];
                    (*grad)[i][g] = p;
                }
        }
    };

    phi_.resize(volume_.xi.size());
    grad_phi_.resize(volume_.xi.size());
    for (std::size_t q = 0; q < volume_.xi.size(); ++q)
        basis_at(volume_.xi[q], phi_[q], &grad_phi_[q]);

    for (int a = 0; a < dim; ++a) {
        facet_rules_.push_back(facet_rule(*space_, a, nq));
        const FacetRule& fr = facet_rules_.back();
        plus_phi_.emplace_back(fr.weights.size());
        minus_phi_.emplace_back(fr.weights.size());
        for (std::size_t q = 0; q < fr.weights.size(); ++q) {
            basis_at(fr.plus_xi[q], plus_phi_[a][q], nullptr);
            basis_at(fr.minus_xi[q], minus_phi_[a][q], nullptr);
        }
    }
}

ConvectionResult BurgersConvection::evaluate(const DgField& u) const {
    const DgSpace& space = *space_;
    const std::size_t nm = space.modes_per_cell();
    const int dim = space.dim();
    const Eigen::VectorXd& c = u.coefficients();
    ConvectionResult out;
    out.residual = Eigen::VectorXd::Zero(c.size());

    for (std::size_t cell = 0; cell < space.num_cells(); ++cell) {
        const std::size_t base = cell * nm;
        for (std::size_t q = 0; q < volume_.xi.size(); ++q) {
            double uq = 0.0;
            for (std::size_t i = 0; i < nm; ++i)
                uq += c[static_cast<Eigen::Index>(base + i)] * phi_[q][i];
            const double flux = 0.5 * uq * uq * volume_.weights[q];
            for (std::size_t i = 0; i < nm; ++i) {
                double div = 0.0;
                for (int a = 0; a < dim; ++a)
                    div += grad_phi_[q][i][a];
                out.residual[static_cast<Eigen::Index>(base + i)] -= flux * div;
            }
        }
    }

    const PeriodicCartesianMesh& mesh = space.mesh();
    for (std::size_t fi = 0; fi < mesh.num_facets(); ++fi) {
        const Facet& f = mesh.facet(fi);
        const FacetRule& fr = facet_rules_[static_cast<std::size_t>(f.axis)];
        const std::size_t pb = f.plus_cell * nm, mb = f.minus_cell * nm;
        for (std::size_t q = 0; q < fr.weights.size(); ++q) {
            const auto& pp = plus_phi_[f.axis][q];
            const auto& mp = minus_phi_[f.axis][q];
            double up = 0.0, um = 0.0;
            for (std::size_t i = 0; i < nm; ++i) {
                up += c[static_cast<Eigen::Index>(pb + i)] * pp[i];
                um += c[static_cast<Eigen::Index>(mb + i)] * mp[i];
            }
            const double alpha = std::max(std::abs(up), std::abs(um));
            const double fhat = 0.25 * (up * up + um * um) + 0.5 * alpha * (up - um);
            const double wf = fr.weights[q] * fhat;
            for (std::size_t i = 0; i < nm; ++i) {
                out.residual[static_cast<Eigen::Index>(pb + i)] += wf * pp[i];
                out.residual[static_cast<Eigen::Index>(mb + i)] -= wf * mp[i];
            }
        }
    }
    out.energy_rate = out.residual.dot(c);
    return out;
}

ConvectionResult convection_burgers(const DgField& u) { return BurgersConvection(u.space_ptr()).evaluate(u); }

SparseMatrix assemble_advection(const DgSpace& space, const std::vector<double>& beta) {
    if (static_cast<int>(beta.size()) != space.dim())
        throw std::invalid_argument("advection velocity needs one entry per axis");
    const int k = space.order();
    const int dim = space.dim();
    const std::size_t n1 = static_cast<std::size_t>(k) + 1;
    const std::vector<double> d = derivative_matrix(k);
    const ModeSet& basis = space.basis().modes;
    const std::size_t nm = basis.size();
    const PeriodicCartesianMesh& mesh = space.mesh();
    auto tangential = [&](const Index3& m, int axis) {
        double t = 1.0;
        for (int j = 0; j < dim; ++j)
            if (j != axis)
                t *= mesh.h(j) / (2.0 * m[j] + 1.0);
        return t;
    };
    std::vector<Eigen::Triplet<double>> trip;
    // Volume: -beta_a int u d_a v, with int_0^1 L_m L_n' = D(m, n) / (2m + 1).
    for (std::size_t cell = 0; cell < space.num_cells(); ++cell)
        for (std::size_t i = 0; i < nm; ++i) {
            const Index3 m = basis.modes()[i];
            for (int a = 0; a < dim; ++a) {
                if (beta[a] == 0.0)
                    continue;
                const double t = tangential(m, a);
                for (int na = 0; na <= k; ++na) {
                    const double q1 = d[static_cast<std::size_t>(m[a]) * n1 + na] / (2.0 * m[a] + 1.0);
                    if (q1 == 0.0)
                        continue;
                    Index3 n = m;
                    n[a] = na;
                    trip.emplace_back(static_cast<int>(cell * nm + basis.index(n)), static_cast<int>(cell * nm + i),
                                      -beta[a] * q1 * t);
                }
            }
        }
    // Facets: upwind trace times [v].
    for (std::size_t fi = 0; fi < mesh.num_facets(); ++fi) {
        const Facet& f = mesh.facet(fi);
        const int a = f.axis;
        if (beta[a] == 0.0)
            continue;
        const bool from_plus = beta[a] > 0.0;
        const std::size_t cu = from_plus ? f.plus_cell : f.minus_cell;
        for (std::size_t i = 0; i < nm; ++i) {
            const Index3 m = basis.modes()[i];
            const double tr = from_plus ? 1.0 : ((m[a] % 2 == 0) ? 1.0 : -1.0);
            const double t = tangential(m, a);
            for (int na = 0; na <= k; ++na) {
                Index3 n = m;
                n[a] = na;
                const double vm = (na % 2 == 0) ? 1.0 : -1.0;
                trip.emplace_back(static_cast<int>(f.plus_cell * nm + basis.index(n)), static_cast<int>(cu * nm + i),
                                  beta[a] * tr * t);
                trip.emplace_back(static_cast<int>(f.minus_cell * nm + basis.index(n)), static_cast<int>(cu * nm + i),
                                  -beta[a] * tr * vm * t);
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(space.scalar_size());
    SparseMatrix c(n, n);
    c.setFromTriplets(trip.begin(), trip.end());
    return c;
}

SparseMatrix expand_components(const SparseMatrix& scalar, const DgSpace& space) {
    const int nc = space.components();
    const auto nm = static_cast<int>(space.modes_per_cell());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(scalar.nonZeros()) * nc);
    auto full = [&](int scalar_index, int comp) {
        const int cell = scalar_index / nm;
        const int mode = scalar_index % nm;
        return (cell * nc + comp) * nm + mode;
    };
    for (int outer = 0; outer < scalar.outerSize(); ++outer)
        for (SparseMatrix::InnerIterator it(scalar, outer); it; ++it)
            for (int c = 0; c < nc; ++c)
                trip.emplace_back(full(static_cast<int>(it.row()), c), full(static_cast<int>(it.col()), c), it.value());
    const auto n = static_cast<Eigen::Index>(space.num_dofs());
    SparseMatrix m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

// ---------------------------------------------------------------------------
// Semi-discrete system and time stepping
// ---------------------------------------------------------------------------

SemiDiscreteSystem::SemiDiscreteSystem(const ScenarioConfig& config, SpacePtr space, ViscousOperator viscous)
    : space_(std::move(space)), viscous_(std::move(viscous)), problem_(config.problem), nu_(config.nu) {
    mass_ = mass_diagonal_vector(*space_);
    linear_ = nu_ * expand_components(viscous_.matrix(), *space_);
    if (problem_ == Problem::AdvectionDiffusion) {
        advection_ = assemble_advection(*space_, config.advection_velocity);
        linear_ += advection_;
    }
    if (problem_ == Problem::Burgers)
        burgers_.emplace(space_, config.volume_quadrature_points);
    linear_.makeCompressed();
}

ConvectionResult SemiDiscreteSystem::nonlinear(const DgField& u) const {
    if (burgers_)
        return burgers_->evaluate(u);
    return {Eigen::VectorXd::Zero(u.coefficients().size()), 0.0};
}

double SemiDiscreteSystem::convective_rate(const DgField& u) const {
    if (problem_ == Problem::AdvectionDiffusion)
        return u.coefficients().dot(advection_ * u.coefficients());
    if (burgers_)
        return burgers_->evaluate(u).energy_rate;
    return 0.0;
}

Eigen::VectorXd SemiDiscreteSystem::rhs(const DgField& u) const {
    Eigen::VectorXd r = linear_ * u.coefficients();
    if (burgers_)
        r += burgers_->evaluate(u).residual;
    return -(r.array() / mass_.array()).matrix();
}

TimeStepper::TimeStepper(const SemiDiscreteSystem& system, Integrator integrator, double nonlinear_tolerance,
                         int max_iterations)
    : system_(system), integrator_(integrator), tol_(nonlinear_tolerance), max_iter_(max_iterations) {}

void TimeStepper::factor(double dt) {
    if (dt == factored_dt_)
        return;
    // Midpoint state w solves (2M/dt + L) w = 2M u0/dt - N(w).
    SparseMatrix m(system_.linear().rows(), system_.linear().cols());
    std::vector<Eigen::Triplet<double>> diag;
    for (Eigen::Index i = 0; i < system_.mass().size(); ++i)
        diag.emplace_back(static_cast<int>(i), static_cast<int>(i), 2.0 * system_.mass()[i] / dt);
    m.setFromTriplets(diag.begin(), diag.end());
    lhs_ = m + system_.linear();
    lhs_.makeCompressed();
    solver_.compute(lhs_);
    if (solver_.info() != Eigen::Success)
        throw std::runtime_error("midpoint system factorisation failed");
    factored_dt_ = dt;
}

DgField TimeStepper::step(const DgField& u, double dt) {
    return integrator_ == Integrator::Midpoint ? step_midpoint(u, dt) : step_rk4(u, dt);
}

DgField TimeStepper::step_midpoint(const DgField& u, double dt) {
    factor(dt);
    const Eigen::VectorXd& u0 = u.coefficients();
    const Eigen::VectorXd base = (2.0 / dt) * (system_.mass().array() * u0.array()).matrix();
    Eigen::VectorXd w = u0;
    last_iterations_ = 0;
    if (system_.problem() != Problem::Burgers) {
        w = solver_.solve(base);
        const double res = (lhs_ * w - base).norm() / std::max(base.norm(), 1e-300);
        if (!(res <= 1e-12))
            throw std::runtime_error("midpoint linear solve residual " + std::to_string(res) + " exceeds 1e-12");
    } else {
        DgField wf(u.space_ptr(), w);
        double prev = std::numeric_limits<double>::infinity();
        int growth = 0;
        bool converged = false;
        for (int it = 1; it <= max_iter_; ++it) {
            const ConvectionResult nl = system_.nonlinear(wf);
            const Eigen::VectorXd next = solver_.solve(base - nl.residual);
            const double delta = (next - wf.coefficients()).lpNorm<Eigen::Infinity>();
            wf.coefficients() = next;
            last_iterations_ = it;
            if (delta <= tol_ * std::max(1.0, next.lpNorm<Eigen::Infinity>())) {
                converged = true;
                break;
            }
            growth = (delta > prev) ? growth + 1 : 0;
            if (growth > 20 || !std::isfinite(delta))
                break;
            prev = delta;
        }
        const Eigen::VectorXd resid = lhs_ * wf.coefficients() - base + system_.nonlinear(wf).residual;
        const double rel = resid.norm() / std::max(base.norm(), 1e-300);
        if (!converged || !(rel <= 1e-10))
            throw std::runtime_error("midpoint nonlinear solve did not converge after " +
                                     std::to_string(last_iterations_) + " iterations (relative residual " +
                                     std::to_string(rel) + "); reduce dt");
        w = wf.coefficients();
    }
    return DgField(u.space_ptr(), 2.0 * w - u0);
}

DgField TimeStepper::step_rk4(const DgField& u, double dt) {
    const SpacePtr& sp = u.space_ptr();
    const Eigen::VectorXd& u0 = u.coefficients();
    const Eigen::VectorXd k1 = system_.rhs(u);
    const Eigen::VectorXd k2 = system_.rhs(DgField(sp, u0 + 0.5 * dt * k1));
    const Eigen::VectorXd k3 = system_.rhs(DgField(sp, u0 + 0.5 * dt * k2));
    const Eigen::VectorXd k4 = system_.rhs(DgField(sp, u0 + dt * k3));
    return DgField(sp, u0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

DgField step_midpoint(const SemiDiscreteSystem& system, const DgField& u, double dt) {
    TimeStepper stepper(system, Integrator::Midpoint);
    return stepper.step(u, dt);
}

DissipationSample make_sample(const SemiDiscreteSystem& system, const DgField& u0, const DgField& u1, double t1,
                              double dt, EvaluationPoint where) {
    const DgField s = where == EvaluationPoint::Midpoint
                          ? DgField(u0.space_ptr(), 0.5 * (u0.coefficients() + u1.coefficients()))
                          : u1;
    const DissipationBreakdown b = decompose(s, system.viscous());
    const double nu = system.nu();
    DissipationSample row;
    row.t = t1;
    row.kinetic_energy = kinetic_energy(u1);
    // (K1 - K0)/dt written as (u1 - u0)^T M (u1 + u0) / (2 dt) to avoid cancellation.
    row.dKdt = (system.mass().array() * (u1.coefficients() - u0.coefficients()).array() *
                (u1.coefficients() + u0.coefficients()).array())
                   .sum() /
               (2.0 * dt);
    row.a_total = nu * b.a_total;
    row.a_phy_sigma = nu * b.a_phy_sigma;
    row.a_num_sigma = nu * b.a_num_sigma;
    row.a_phy_broken = nu * b.a_phy_broken;
    row.a_num_broken = nu * b.a_num_broken;
    row.convective_rate = system.convective_rate(s);
    row.eps_tot = eps_total(row.dKdt, b.a_phy_sigma, nu);
    row.scale = nu * b.scale() + std::abs(row.convective_rate) + std::abs(row.dKdt);
    return row;
}

ResolvedPenalty resolve_lambda(const ScenarioConfig& config) {
    ResolvedPenalty r;
    r.lambda_star = min_penalty(PenaltyFamily::QDg, config.order).lambda_star;
    r.lambda = config.lambda.mode == LambdaMode::FactorOfStar ? config.lambda.value * r.lambda_star
                                                             : config.lambda.value;
    bool isotropic = true;
    for (int a = 1; a < config.dim; ++a)
        if (std::abs(config.box_length[a] / config.cells_per_axis[a] - config.box_length[0] / config.cells_per_axis[0]) >
            1e-14 * config.box_length[0] / config.cells_per_axis[0])
            isotropic = false;
    r.certified = isotropic && r.lambda >= r.lambda_star;
    if (r.lambda < r.lambda_star) {
        if (!config.allow_sub_threshold_lambda)
            throw std::invalid_argument("lambda = " + std::to_string(r.lambda) + " is below lambda* = " +
                                        std::to_string(r.lambda_star) +
                                        "; set allow_sub_threshold_lambda to run uncertified");
        std::cerr << "warning: lambda = " << r.lambda << " < lambda* = " << r.lambda_star
                  << ": stability and non-negative numerical dissipation are not certified\n";
    }
    if (!isotropic)
        std::cerr << "warning: anisotropic mesh, using h_F = cell width across the facet (uncertified)\n";
    return r;
}

// ---------------------------------------------------------------------------
// Initial conditions
// ---------------------------------------------------------------------------

VectorFunction initial_condition_function(const ScenarioConfig& config) {
    const InitialCondition& ic = config.initial;
    const int dim = config.dim;
    const int nc = config.components;
    const std::vector<double> len = config.box_length;
    const double two_pi = 2.0 * std::numbers::pi;
    const double amp = ic.param("amplitude", 1.0);

    if (ic.name == "constant") {
        const double v = ic.param("value", 1.0);
        return [v, nc](const Point&) {
            std::array<double, 3> r{0.0, 0.0, 0.0};
            for (int c = 0; c < nc; ++c)
                r[c] = v;
            return r;
        };
    }
    if (ic.name == "sine") {
        const double n = ic.param("wavenumber", 1.0);
        const double off = ic.param("offset", 0.0);
        return [=](const Point& x) {
            double s = amp;
            for (int a = 0; a < dim; ++a)
                s *= std::sin(two_pi * n * x[a] / len[a]);
            std::array<double, 3> r{0.0, 0.0, 0.0};
            for (int c = 0; c < nc; ++c)
                r[c] = off + s;
            return r;
        };
    }
    if (ic.name == "steep") {
        const double width = ic.param("width", 0.1);
        const double off = ic.param("offset", 0.0);
        const double norm = std::tanh(1.0 / width);
        return [=](const Point& x) {
            const double s = off + amp * std::tanh(std::sin(two_pi * x[0] / len[0]) / width) / norm;
            std::array<double, 3> r{0.0, 0.0, 0.0};
            for (int c = 0; c < nc; ++c)
                r[c] = s;
            return r;
        };
    }
    if (ic.name == "taylor_green") {
        return [=](const Point& x) {
            std::array<double, 3> y{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a)
                y[a] = two_pi * x[a] / len[a];
            if (dim == 2)
                return std::array<double, 3>{amp * std::sin(y[0]) * std::cos(y[1]),
                                             -amp * std::cos(y[0]) * std::sin(y[1]), 0.0};
            return std::array<double, 3>{amp * std::cos(y[0]) * std::sin(y[1]) * std::sin(y[2]),
                                         -amp * std::sin(y[0]) * std::cos(y[1]) * std::sin(y[2]), 0.0};
        };
    }
    if (ic.name == "random") {
        const int modes = static_cast<int>(ic.param("modes", 4.0));
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        // coef[c][a][n] = (sin, cos) amplitudes, decaying like 1/n.
        std::vector<std::vector<std::vector<std::array<double, 2>>>> coef(
            nc, std::vector<std::vector<std::array<double, 2>>>(dim, std::vector<std::array<double, 2>>(modes)));
        for (auto& cc : coef)
            for (auto& ca : cc)
                for (int n = 0; n < modes; ++n)
                    ca[n] = {normal(rng) / (n + 1.0), normal(rng) / (n + 1.0)};
        return [=](const Point& x) {
            std::array<double, 3> r{0.0, 0.0, 0.0};
            for (int c = 0; c < nc; ++c)
                for (int a = 0; a < dim; ++a)
                    for (int n = 0; n < modes; ++n) {
                        const double arg = two_pi * (n + 1.0) * x[a] / len[a];
                        r[c] += amp * (coef[c][a][n][0] * std::sin(arg) + coef[c][a][n][1] * std::cos(arg));
                    }
            return r;
        };
    }
    throw std::invalid_argument("unknown initial condition '" + ic.name + "'");
}

std::optional<std::function<std::array<double, 3>(const Point&, double)>> heat_exact_solution(
    const ScenarioConfig& config) {
    if (config.problem != Problem::Heat)
        return std::nullopt;
    const InitialCondition& ic = config.initial;
    const int nc = config.components;
    if (ic.name == "constant") {
        const double v = ic.param("value", 1.0);
        return [v, nc](const Point&, double) {
            std::array<double, 3> r{0.0, 0.0, 0.0};
            for (int c = 0; c < nc; ++c)
                r[c] = v;
            return r;
        };
    }
    if (ic.name == "sine") {
        const VectorFunction u0 = initial_condition_function(config);
        const double n = ic.param("wavenumber", 1.0);
        const double off = ic.param("offset", 0.0);
        double rate = 0.0;
        for (int a = 0; a < config.dim; ++a) {
            const double kappa = 2.0 * std::numbers::pi * n / config.box_length[a];
            rate += kappa * kappa;
        }
        rate *= config.nu;
        return [=](const Point& x, double t) {
            std::array<double, 3> r = u0(x);
            for (int c = 0; c < nc; ++c)
                r[c] = off + (r[c] - off) * std::exp(-rate * t);
            return r;
        };
    }
    return std::nullopt;
}

double l2_error(const DgField& u, const VectorFunction& exact, int points) {
    const DgSpace& space = u.space();
    const VolumeRule rule = volume_rule(space, points);
    const PeriodicCartesianMesh& mesh = space.mesh();
    double err = 0.0;
    for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
        const Point o = mesh.cell_origin(cell);
        for (std::size_t q = 0; q < rule.xi.size(); ++q) {
            Point x{0.0, 0.0, 0.0};
            for (int a = 0; a < space.dim(); ++a)
                x[a] = o[a] + mesh.h(a) * rule.xi[q][a];
            const auto ex = exact(x);
            for (int c = 0; c < space.components(); ++c) {
                const double d = u.value(cell, c, rule.xi[q]) - ex[c];
                err += rule.weights[q] * d * d;
            }
        }
    }
    return std::sqrt(err);
}

// ---------------------------------------------------------------------------
// Scenario driver
// ---------------------------------------------------------------------------

ScenarioResult run_scenario(const ScenarioConfig& config, const SampleSink& sink) {
    validate(config);
    ScenarioResult result;
    result.penalty = resolve_lambda(config);

    auto mesh = build_mesh(config.dim, config.cells_per_axis, config.box_length);
    SipParams params;
    params.nu = config.nu;
    params.lambda = result.penalty.lambda;
    params.length_rule = mesh.isotropic() ? FacetLengthRule(facet_length_scale) : FacetLengthRule(normal_width_length_scale);
    auto space = make_space(std::move(mesh), config.order, config.components);
    SemiDiscreteSystem system(config, space, assemble_sip(space, params));
    TimeStepper stepper(system, config.integrator, config.nonlinear_tolerance, config.max_nonlinear_iterations);

    DgField u = project_initial(space, initial_condition_function(config), config.volume_quadrature_points);
    double t = 0.0;
    const double eps = 1e-12 * config.dt;
    int n = 0;
    while (t < config.t_end - eps) {
        const double dt = std::min(config.dt, config.t_end - t);
        DgField next = stepper.step(u, dt);
        ++n;
        const double t1 = (config.t_end - (t + dt) <= eps) ? config.t_end : config.dt * n;
        DissipationSample row = make_sample(system, u, next, t1, dt, config.evaluate_at);
        if (sink)
            sink(row);
        result.ledger.push_back(row);
        u = std::move(next);
        t = t1;
    }
    result.final_field = std::move(u);
    result.final_time = t;
    return result;
}

}  // namespace dgdiss
