#ifndef MOPROX_DIRLIP_HPP
#define MOPROX_DIRLIP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "moprox/function.hpp"

namespace moprox {

/// Sampling schedule for the triple limit x -> xbar (value-attentive),
/// v -> u, t -> 0+ of the directional difference quotient.
struct DLSchedule {
    std::vector<double> t_levels;      // strictly decreasing to 0
    std::vector<double> point_radii;   // neighbourhood radii, decreasing
    std::vector<double> dir_radii;     // direction cap radii, decreasing
    int samples_per_level = 160;
    std::uint64_t seed = 0x5eed;

    static DLSchedule defaults();
    static DLSchedule fast();  // reduced sampling for inner solver loops
    std::size_t levels() const { return t_levels.size(); }
};

enum class DLVerdict { DirectionallyLipschitz, NotDirectionallyLipschitz, Inconclusive };

std::string to_string(DLVerdict v);

/// Per-level maximal difference quotients for one candidate direction.
std::vector<double> quotient_limsup(const PiecewiseFunction& f, const Vec& xbar, const Vec& u,
                                    const DLSchedule& sched, std::uint64_t substream = 0);

struct DirectionResult {
    Vec u;
    std::vector<double> q_levels;
    DLVerdict verdict = DLVerdict::Inconclusive;
    double L = 0.0;        // certified constant when verdict == DL
    double slope = 0.0;    // log-log growth slope of positive quotients
    double r2 = 0.0;       // fit quality of the slope regression
};

DirectionResult classify_direction(const PiecewiseFunction& f, const Vec& xbar, const Vec& u,
                                   const DLSchedule& sched, std::uint64_t substream = 0);

struct DirLipReport {
    Vec point;
    DLVerdict verdict = DLVerdict::Inconclusive;
    Vec u;                 // best certified direction when verdict == DL
    double L = 0.0;
    double delta = 0.0;    // finest point radius backing the constant
    double slope = 0.0;    // blow-up exponent when verdict == not-DL
    double r2 = 0.0;
    std::vector<DirectionResult> directions;   // one entry per candidate
    std::vector<Vec> certified_directions;     // all directions with a DL verdict
};

/// Searches candidate directions on a unit-sphere grid (64*n spread
/// directions plus coordinate axes and diagonals for n <= 3) and applies the
/// verdict rule per direction. Inconclusive is a valid outcome.
DirLipReport certify_dl(const PiecewiseFunction& f, const Vec& xbar,
                        const DLSchedule& sched = DLSchedule::defaults());

struct DLCalcOutcome {
    enum class Status { Pass, Fail, PreconditionViolation };
    Status status = Status::PreconditionViolation;
    std::string detail;
    double L_f = 0.0, L_g = 0.0, L_combined = 0.0;
};

/// Checks preservation of the directional Lipschitz property under sum/max:
/// requires both inputs certified at xbar with the common direction u, then
/// certifies the combination and compares constants
/// (sum: L <= L_f + L_g + 1e-3; max: L <= max(L_f, L_g) + 1e-3).
DLCalcOutcome dl_calculus_check(CombineKind kind, const PiecewiseFunction& f,
                                const PiecewiseFunction& g, const Vec& xbar, const Vec& u,
                                const DLSchedule& sched = DLSchedule::defaults());

/// Candidate unit directions for certify_dl (spread grid + axes + diagonals).
std::vector<Vec> direction_grid(int n);

}  // namespace moprox

#endif
