#include "moprox/solver.hpp"

#include <algorithm>
#include <cmath>

#include "moprox/rng.hpp"

namespace moprox {

double scalarized_value(const RegularizedProblem& RP, const Vec& xbar_ref, double gamma,
                        const Vec& z, double tau, const Vec& x) {
    if (gamma <= 0.0) throw std::invalid_argument("scalarized_value: gamma must be positive");
    if (tau < 0.0) throw std::invalid_argument("scalarized_value: tau must be nonnegative");
    double phi = phi_gamma(RP, xbar_ref, gamma, x);
    if (!std::isfinite(phi)) return kInf;
    double ek = std::sqrt(gamma) * norm2(x - z);
    double pen = tau > 0.0 ? tau * distance_to_set(RP.base.omega, x) : 0.0;
    return phi + ek + pen;
}

namespace {

struct SearchOutcome {
    Vec x;
    double value = kInf;
    long evals = 0;
};

// compass pattern search with shrinking steps; deterministic
SearchOutcome pattern_search(const Vec& start, const SolverConfig& cfg,
                             const std::function<double(const Vec&)>& obj) {
    SearchOutcome out;
    out.x = start;
    out.value = obj(start);
    out.evals = 1;
    if (!std::isfinite(out.value)) return out;
    const int n = static_cast<int>(start.size());
    for (int e = cfg.pattern_min_exp; e <= cfg.pattern_max_exp;) {
        double h = std::ldexp(1.0, -e);
        // best improving neighbour at this scale
        Vec best = out.x;
        double best_v = out.value;
        for (int d = 0; d < n; ++d) {
            for (double s : {1.0, -1.0}) {
                Vec y = out.x;
                y[d] += s * h;
                double v = obj(y);
                ++out.evals;
                if (v < best_v - 1e-15) {
                    best_v = v;
                    best = y;
                }
            }
        }
        if (best_v < out.value - 1e-15) {
            out.x = best;
            out.value = best_v;
        } else {
            ++e;  // shrink
        }
        if (out.evals >= cfg.max_evals) break;
    }
    return out;
}

// candidate kink locations of a 1-D piecewise objective: piece boundaries
// and roots of the nonsmooth atoms' affine bases. Nonsmooth minimizers sit
// there, and pattern search cannot hit them exactly from generic starts.
void collect_breakpoints(const Expr& e, std::vector<double>& out) {
    auto base_root = [&](const Vec& a, double b) {
        if (a.size() == 1 && a[0] != 0.0) out.push_back(-b / a[0]);
    };
    switch (e.op) {
        case Expr::Op::Abs:
            if (e.args[0]->op == Expr::Op::Affine || e.args[0]->op == Expr::Op::Power)
                base_root(e.args[0]->coeffs, e.args[0]->offset);
            collect_breakpoints(*e.args[0], out);
            break;
        case Expr::Op::Power:
            if (!e.exponent.is_integer() || e.exponent.num < 0) base_root(e.coeffs, e.offset);
            break;
        case Expr::Op::Oscillation:
            base_root(e.coeffs, e.offset);
            break;
        case Expr::Op::Sum:
        case Expr::Op::Max:
        case Expr::Op::Min:
            for (const auto& a : e.args) collect_breakpoints(*a, out);
            break;
        case Expr::Op::Scale:
        case Expr::Op::Square:
        case Expr::Op::Sin:
            collect_breakpoints(*e.args[0], out);
            break;
        default:
            break;
    }
}

std::vector<double> objective_breakpoints_1d(const VectorFunction& F) {
    std::vector<double> pts;
    for (const auto& comp : F.components) {
        if (comp.dim != 1) return {};
        for (const auto& piece : comp.pieces) {
            Interval1D iv = piece_interval_1d(piece);
            if (std::isfinite(iv.lo)) pts.push_back(iv.lo);
            if (std::isfinite(iv.hi)) pts.push_back(iv.hi);
            collect_breakpoints(*piece.body, pts);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<Vec> multistart_seeds(const Vec& center, const Vec& incumbent,
                                  const SolverConfig& cfg) {
    std::vector<Vec> seeds{incumbent, center};
    const int n = static_cast<int>(center.size());
    // lattice seeds around the centre
    for (double off : {-1.0, -0.5, 0.5, 1.0}) {
        for (int d = 0; d < n; ++d) {
            Vec s = center;
            s[d] += off;
            seeds.push_back(s);
        }
    }
    Rng rng(mix_seed(cfg.seed, 33));
    for (int k = 0; k < cfg.multistarts; ++k) {
        Vec s = center;
        Vec dir = rng.unit_vector(n);
        double r = rng.uniform(0.0, cfg.start_radius);
        for (int d = 0; d < n; ++d) s[d] += r * dir[d];
        seeds.push_back(s);
    }
    return seeds;
}

}  // namespace

StepResult proximal_step(const MOProblem& P, const Vec& x_center, double lambda,
                         const Vec& upsilon, const SolverConfig& cfg) {
    if (!P.omega.contains(x_center, 1e-12))
        throw std::invalid_argument("proximal_step: centre must be feasible");
    RegularizedProblem RP = RegularizedProblem::make(P, x_center, lambda, upsilon);
    Vec f_center = RP.f_center;
    const int m = static_cast<int>(f_center.size());

    // penalty weight from the directional-Lipschitz constant when available
    double tau = 1.0;
    if (P.F.dim() <= 3) {
        try {
            double t = 0.0;
            for (const auto& comp : P.F.components)
                t = std::max(t, penalty_tau_from_dl(comp, x_center, DLSchedule::fast()));
            tau = t;
        } catch (const PreconditionError&) {
            tau = 1.0;
        }
    }

    StepResult result;
    for (int attempt = 0; attempt < 3; ++attempt) {
        result.inner.clear();
        result.tau = tau;
        std::vector<double> gammas = cfg.gamma_levels;
        Vec incumbent = x_center;
        bool extended_floor = false;

        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            double gamma = gammas[gi];
            Vec ref = incumbent;
            Vec z = incumbent;
            auto obj = [&](const Vec& x) {
                return scalarized_value(RP, ref, gamma, z, tau, x);
            };
            auto seeds = multistart_seeds(x_center, incumbent, cfg);
            std::vector<SearchOutcome> outcomes(seeds.size());
            kernels::for_each_index(seeds.size(), cfg.exec, [&](std::size_t s) {
                outcomes[s] = pattern_search(seeds[s], cfg, obj);
            });
            // deterministic best by (value, start index)
            std::size_t best = 0;
            for (std::size_t s = 1; s < outcomes.size(); ++s)
                if (outcomes[s].value < outcomes[best].value - 1e-15) best = s;

            // snap to a nearby objective breakpoint when it is at least as
            // good: kinks are exact minimizer candidates the dyadic pattern
            // cannot reach from generic starts
            if (P.F.dim() == 1) {
                for (double b : objective_breakpoints_1d(RP.psi)) {
                    if (std::abs(b - outcomes[best].x[0]) > 0.125) continue;
                    double v = obj(Vec{b});
                    if (v <= outcomes[best].value + 1e-15) {
                        outcomes[best].x = Vec{b};
                        outcomes[best].value = v;
                    }
                }
            }

            InnerRecord rec;
            rec.gamma = gamma;
            rec.incumbent = outcomes[best].x;
            rec.scalarization = outcomes[best].value;
            rec.penalty = tau * distance_to_set(P.omega, outcomes[best].x);
            for (const auto& o : outcomes) rec.evals += o.evals;
            result.inner.push_back(rec);
            incumbent = outcomes[best].x;

            // null progress at the floor: halve gamma once before giving up
            if (gi + 1 == gammas.size() && !extended_floor) {
                bool moved = norm2(incumbent - x_center) > cfg.step_tol;
                if (!moved) {
                    gammas.push_back(gammas.back() * 0.5);
                    extended_floor = true;
                }
            }
        }

        // acceptance: inside D and componentwise non-increasing Psi
        bool ok = RP.in_level_set(incumbent);
        if (ok) {
            Vec psi_val = evaluate(RP.psi, incumbent);
            for (int i = 0; i < m; ++i)
                if (!(psi_val[i] <= f_center[i] + 1e-12)) ok = false;
        }
        if (ok) {
            result.x_next = incumbent;
            result.null_step = norm2(incumbent - x_center) <= cfg.step_tol;
            return result;
        }
        if (!P.omega.contains(incumbent, 1e-9)) {
            tau *= cfg.tau_growth;  // penalty violation: escalate and retry
            continue;
        }
        break;  // candidate rejected for level-set/monotonicity reasons
    }
    result.x_next = x_center;
    result.null_step = true;
    return result;
}

SolverTrace solve_ppa(const MOProblem& P, const Vec& x0, double lambda, const Vec& upsilon,
                      const SolverConfig& cfg) {
    if (!P.omega.contains(x0, 1e-12))
        throw std::invalid_argument("solve_ppa: infeasible starting point");
    SolverTrace trace;
    Vec x = x0;
    trace.iterates.push_back(x);
    trace.objective_values.push_back(evaluate(P.F, x));
    for (int k = 0; k < cfg.max_outer; ++k) {
        StepResult step = proximal_step(P, x, lambda, upsilon, cfg);
        double move = norm2(step.x_next - x);
        x = step.x_next;
        trace.steps.push_back(std::move(step));
        trace.iterates.push_back(x);
        trace.objective_values.push_back(evaluate(P.F, x));
        if (trace.steps.back().null_step) {
            trace.termination = "null-step";
            break;
        }
        if (move <= cfg.step_tol) {
            trace.termination = "step-tolerance";
            break;
        }
    }
    if (trace.termination.empty()) trace.termination = "max-iterations";

    if (cfg.certify_final) {
        try {
            RegularizedProblem RP = RegularizedProblem::make(P, x, lambda, upsilon);
            trace.certificate = certify_pareto(RP, x);
            trace.certificate_note =
                trace.certificate->feasible
                    ? "feasible"
                    : "residual " + std::to_string(trace.certificate->stationarity);
        } catch (const PreconditionError& e) {
            trace.certificate_note = std::string("precondition failure: ") + e.what();
        } catch (const std::exception& e) {
            trace.certificate_note = std::string("certificate error: ") + e.what();
        }
    }
    return trace;
}

}  // namespace moprox
