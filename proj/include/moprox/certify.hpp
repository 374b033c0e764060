#ifndef MOPROX_CERTIFY_HPP
#define MOPROX_CERTIFY_HPP

#include <optional>
#include <string>

#include "moprox/dirlip.hpp"
#include "moprox/problem.hpp"
#include "moprox/realset.hpp"

namespace moprox {

/// Raised when an operation's standing assumptions fail (e.g. a non-Lipschitz
/// objective component at the candidate point). Maps to CLI exit code 3.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LipschitzVerdict {
    std::vector<bool> component;
    bool all = false;
    bool approx = false;  // some component needed the numeric fallback
};

/// Local Lipschitz test per component: exact through the singular
/// subdifferential ({0} iff locally Lipschitzian) for 1-D and separable
/// components, numeric slope sampling otherwise.
LipschitzVerdict lipschitz_at(const VectorFunction& F, const Vec& xbar);

struct CertifyOptions {
    double tol = 1e-6;              // stationarity feasibility tolerance
    double active_tol = 1e-9;       // level-constraint activity threshold
    bool paper_convention = false;  // prox gradient written without the factor 2
    double tau_cap = 1e6;
    kernels::ExecPolicy exec;
};

/// Multiplier certificate for the first-order Pareto conditions of the
/// regularized problem:
///   0 in sum_i (alpha_i+beta_i) dM f_i(xbar)
///        + 2*lambda * sum_i alpha_i upsilon_i (xbar - center)
///        + N_Omega(xbar) cap tau*B,
///   sum_i (alpha_i+beta_i) = 1,  beta_i (f_i(xbar) - f_i(center)) = 0.
/// The --paper-literal convention drops the analytic factor 2.
struct MultiplierCertificate {
    bool feasible = false;
    Vec alpha, beta;
    Vec w;                       // normal-cone element
    double tau = 0.0;            // ||w||
    double stationarity = kInf;  // Euclidean inclusion defect, recomputed
    double normalization = kInf;
    double complementarity = kInf;
    std::vector<int> selected_pieces;  // convex piece index per objective
    Vec subgradients;                  // chosen g_i per objective (flattened n-D)
    std::string note;
    std::optional<double> other_convention_residual;  // cross-check between conventions
};

MultiplierCertificate certify_pareto(const RegularizedProblem& RP, const Vec& xbar,
                                     const CertifyOptions& opt = {});

struct PenaltyReport {
    double tau = 0.0;
    double radius = 0.0;
    double step = 0.0;
    bool pass = false;
    std::optional<Vec> violator;
    double violation = 0.0;  // f(xbar) - [f(x*) + tau d(x*)] at the violator
};

/// Scans a ball around xbar (lattice plus logarithmic ladders toward xbar)
/// for a point with f(x) + tau*d_Omega(x) < f(xbar) - 1e-12.
PenaltyReport exact_penalty_check(const PiecewiseFunction& f, const ConstraintSet& omega,
                                  const Vec& xbar, double tau, double radius, double step);

/// Penalty threshold candidate derived from the directional-Lipschitz
/// constant: max(L, 0) + 1e-3. Requires a DL certificate at xbar.
double penalty_tau_from_dl(const PiecewiseFunction& f, const Vec& xbar,
                           const DLSchedule& sched = DLSchedule::defaults());

}  // namespace moprox

#endif
