#ifndef MOPROX_SOLVER_HPP
#define MOPROX_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "moprox/certify.hpp"
#include "moprox/problem.hpp"

namespace moprox {

struct SolverConfig {
    // the sqrt(gamma) perturbation dominates curvature-scale improvements
    // down to ~sqrt(gamma_min), so the floor sits below the accuracy target
    std::vector<double> gamma_levels = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    double tau_growth = 2.0;       // applied on penalty violations
    int multistarts = 4;           // random starts besides incumbent/centre/lattice seeds
    double start_radius = 1.5;     // multistart sampling radius around the centre
    int pattern_min_exp = 1;       // pattern steps 2^-min .. 2^-max
    int pattern_max_exp = 20;
    long max_evals = 20000;        // per inner minimization
    double step_tol = 1e-6;        // outer stopping on ||x_{k+1} - x_k||
    int max_outer = 50;
    std::uint64_t seed = 0x50a5;
    kernels::ExecPolicy exec;
    bool certify_final = true;
};

struct InnerRecord {
    double gamma = 0.0;
    Vec incumbent;
    double scalarization = 0.0;  // chi at the accepted incumbent
    double penalty = 0.0;        // tau * d_Omega at the incumbent
    long evals = 0;
};

struct StepResult {
    Vec x_next;
    bool null_step = false;
    double tau = 0.0;
    std::vector<InnerRecord> inner;
};

struct SolverTrace {
    std::vector<Vec> iterates;          // x^0 .. x^K
    std::vector<Vec> objective_values;  // F(x^k)
    std::vector<StepResult> steps;
    std::string termination;            // step-tolerance | null-step | max-iterations
    std::optional<MultiplierCertificate> certificate;
    std::string certificate_note;
};

/// Ekeland-perturbed penalized scalarization
///   chi_gamma(x) = phi_gamma(x; xbar_ref) + sqrt(gamma)*||x - z|| + tau*d_Omega(x).
double scalarized_value(const RegularizedProblem& RP, const Vec& xbar_ref, double gamma,
                        const Vec& z, double tau, const Vec& x);

/// One proximal step: regularize at the centre, run the gamma-continuation of
/// scalarized minimizations (multistart pattern search), accept the incumbent
/// only if it stays in D and improves every Psi component.
StepResult proximal_step(const MOProblem& P, const Vec& x_center, double lambda,
                         const Vec& upsilon, const SolverConfig& cfg = {});

/// Outer proximal-point loop; the trace keeps componentwise-monotone
/// objective values and ends with a certificate attempt at the final point.
SolverTrace solve_ppa(const MOProblem& P, const Vec& x0, double lambda, const Vec& upsilon,
                      const SolverConfig& cfg = {});

}  // namespace moprox

#endif
