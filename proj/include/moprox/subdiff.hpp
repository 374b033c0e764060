#ifndef MOPROX_SUBDIFF_HPP
#define MOPROX_SUBDIFF_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moprox/function.hpp"
#include "moprox/realset.hpp"

namespace moprox {

/// Accumulation behaviour of a one-sided quantity (difference quotients or
/// derivative values) as the point is approached from one side.
///  - a Limit has lo == hi (possibly +-inf),
///  - a Dense range records an interval every value of which is attained
///    arbitrarily close to the point (oscillatory atoms).
struct SideLimit {
    bool dense = false;
    bool approx = false;
    double lo = 0.0;
    double hi = 0.0;

    static SideLimit limit(double v) { return {false, false, v, v}; }
    static SideLimit dense_range(double lo, double hi, bool approx = false) {
        return {true, approx, lo, hi};
    }
    double liminf() const { return lo; }
    double limsup() const { return hi; }
};

struct SideData {
    bool exists = false;        // a domain piece adjoins the point on this side
    bool attentive = true;      // side values converge to f(x) (f-attentive side)
    double value_limit = 0.0;   // limit of f along the side
    SideLimit quotient;         // slope-oriented difference quotient range
    SideLimit deriv;            // derivative accumulation range
    bool approx = false;
};

/// One-point side analysis of a 1-D piecewise function.
struct PointAnalysis {
    double fx = 0.0;
    SideData left, right;
    bool approx = false;
};

PointAnalysis analyze_point(const PiecewiseFunction& f, double x);

/// Thrown by clarke() at points where f is not locally Lipschitzian.
struct NotLipschitzError : std::runtime_error {
    RealSet1D singular;
    explicit NotLipschitzError(RealSet1D s)
        : std::runtime_error("function is not locally Lipschitzian at the point (singular subdifferential " +
                             s.to_string() + ")"),
          singular(std::move(s)) {}
};

RealSet1D frechet_subdiff(const PiecewiseFunction& f, double x);
RealSet1D limiting_subdiff(const PiecewiseFunction& f, double x);
RealSet1D singular_subdiff(const PiecewiseFunction& f, double x);
RealSet1D clarke(const PiecewiseFunction& f, double x);

/// Shared numeric probe schedule: step levels t_j = 10^-j, neighbourhood
/// radii sqrt(t_j), value-attentiveness filter t_j^(1/3).
struct ProbeSchedule {
    std::vector<double> t_levels;
    int samples_per_level = 64;
    double candidate_lo = -3.0;
    double candidate_hi = 3.0;
    double candidate_step = 0.01;
    std::uint64_t seed = 0x5eed;

    static ProbeSchedule defaults();
    double radius(std::size_t level) const { return std::sqrt(t_levels[level]); }
    double value_filter(std::size_t level) const { return std::cbrt(t_levels[level]); }
};

/// Numeric limsup of (f(y+td)-f(y))/t over y->x, t->0+. Requires local
/// Lipschitz continuity (checked through the singular subdifferential);
/// throws NotLipschitzError otherwise and on detected blow-up.
double clarke_dirderiv(const PiecewiseFunction& f, double x, double d,
                       const ProbeSchedule& sched = ProbeSchedule::defaults());

struct SumRuleResult {
    bool qualified = false;     // only the trivial combination of singular
                                // subgradients sums to zero
    RealSet1D sum;              // Minkowski sum of the limiting subdifferentials
};

SumRuleResult sum_rule(const std::vector<PiecewiseFunction>& fs, double x);

/// Closure of the limiting subgradient graph along value-attentive sequences:
/// samples x^k -> x, picks converging subgradients, asserts the limit lands in
/// the limiting subdifferential at x. Deterministic under the seed.
bool robustness_check(const PiecewiseFunction& f, double x, int trials, std::uint64_t seed);

/// Brute-force lower estimate of the Frechet subdifferential on a candidate
/// grid. Test-side oracle; uses function evaluation only.
RealSet1D numeric_frechet_probe(const PiecewiseFunction& f, double x,
                                const ProbeSchedule& sched = ProbeSchedule::defaults());

struct SubdiffReport {
    std::string function_name;
    double point = 0.0;
    RealSet1D frechet, limiting, singular;
    std::optional<RealSet1D> clarke;  // absent when not locally Lipschitzian
    SideData left, right;
    bool lipschitz = false;
    bool approx = false;
};

SubdiffReport subdiff_report(const PiecewiseFunction& f, double x);

// Separable n-D support: per-coordinate restrictions g_d(t) = f(xbar + t e_d)
// for functions that split as sums of single-coordinate terms.
std::optional<std::vector<PiecewiseFunction>> separate_coordinates(const PiecewiseFunction& f);

}  // namespace moprox

#endif
