#ifndef MOPROX_PROBLEM_HPP
#define MOPROX_PROBLEM_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "moprox/constraint.hpp"
#include "moprox/function.hpp"
#include "moprox/kernels.hpp"

namespace moprox {

struct MOProblem {
    VectorFunction F;
    ConstraintSet omega;
    std::string name;
};

/// Proximally regularized problem: minimize Psi over D with
///   Psi_i = f_i + lambda*||x - center||^2 * upsilon_i,
///   D = omega intersect { F <= F(center) componentwise }.
struct RegularizedProblem {
    MOProblem base;
    Vec center;            // xtilde, must lie in omega
    double lambda = 1.0;
    Vec upsilon;           // positive unit vector
    VectorFunction psi;    // derived regularized objective
    Vec f_center;          // F(center)

    static constexpr double kLevelTol = 1e-12;

    static RegularizedProblem make(MOProblem base, Vec center, double lambda, Vec upsilon);

    /// Phi(x) = F(x) - F(center)
    Vec phi(const Vec& x) const;

    /// x in D: omega membership and Phi <= 0 componentwise within kLevelTol.
    bool in_level_set(const Vec& x) const;
};

/// Rectangular evaluation lattice with a configurable point cap.
struct Grid {
    Vec lo, hi;
    double step = 1e-3;
    std::size_t cap = 10'000'000;

    static Grid uniform_1d(double lo, double hi, double step);

    std::vector<std::size_t> shape() const;
    std::size_t size() const;
    Vec point(std::size_t index) const;  // row-major decode
};

struct ParetoResult {
    std::vector<std::size_t> indices;  // lattice indices of Pareto points
    std::vector<Vec> points;
    std::vector<Vec> values;
};

/// Brute-force Pareto oracle on the lattice: every feasible lattice point not
/// dominated by another feasible lattice point. Dominance uses exact <= with
/// value ties at 1e-15 treated as equal.
ParetoResult pareto_bruteforce(const MOProblem& P, const Grid& g,
                               const kernels::ExecPolicy& pol = {});

/// Pareto oracle for the regularized problem: objective Psi, feasible set D.
ParetoResult pareto_bruteforce(const RegularizedProblem& RP, const Grid& g,
                               const kernels::ExecPolicy& pol = {});

/// phi_gamma(x) = max_i { psi_i(x) - psi_i(xbar) + gamma, phi_i(x) }.
double phi_gamma(const RegularizedProblem& RP, const Vec& xbar, double gamma, const Vec& x);

struct ScanResult {
    double min_value = kInf;
    Vec argmin;
    bool positive = false;  // min over the feasible lattice is strictly > 0
};

/// Lattice minimum of phi_gamma over omega (positivity probe / refuter).
ScanResult phi_gamma_scan(const RegularizedProblem& RP, const Vec& xbar, double gamma,
                          const Grid& g, const kernels::ExecPolicy& pol = {});

}  // namespace moprox

#endif
