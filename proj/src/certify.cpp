#include "moprox/certify.hpp"

#include <algorithm>
#include <cmath>

#include "moprox/rng.hpp"
#include "moprox/subdiff.hpp"
#include "lp.hpp"

namespace moprox {

namespace {

// per-coordinate limiting subdifferentials of one objective at xbar
struct ComponentSubdiff {
    std::vector<RealSet1D> per_coord;
    bool lipschitz = true;
    bool approx = false;
};

ComponentSubdiff component_subdiff(const PiecewiseFunction& f, const Vec& xbar) {
    ComponentSubdiff out;
    if (f.dim == 1) {
        out.per_coord.push_back(limiting_subdiff(f, xbar[0]));
        out.lipschitz = singular_subdiff(f, xbar[0]).is_singleton(0.0);
        return out;
    }
    auto parts = separate_coordinates(f);
    if (!parts) {
        out.approx = true;
        out.lipschitz = false;
        return out;
    }
    for (int d = 0; d < f.dim; ++d) {
        out.per_coord.push_back(limiting_subdiff((*parts)[d], xbar[d]));
        if (!singular_subdiff((*parts)[d], xbar[d]).is_singleton(0.0)) out.lipschitz = false;
    }
    return out;
}

bool numeric_lipschitz_probe(const PiecewiseFunction& f, const Vec& xbar) {
    // bounded difference quotients on shrinking neighbourhoods
    Rng rng(0x11b5);
    double prev = -kInf;
    for (int level = 1; level <= 5; ++level) {
        double radius = std::pow(10.0, -level);
        double worst = 0.0;
        for (int s = 0; s < 128; ++s) {
            Vec a = xbar, b = xbar;
            Vec da = rng.unit_vector(f.dim), db = rng.unit_vector(f.dim);
            double ra = rng.log_uniform(1e-3, 1.0) * radius;
            double rb = rng.log_uniform(1e-3, 1.0) * radius;
            for (int i = 0; i < f.dim; ++i) {
                a[i] += ra * da[i];
                b[i] += rb * db[i];
            }
            double fa = evaluate(f, a), fb = evaluate(f, b);
            if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
            double den = norm2(a - b);
            if (den < 1e-14) continue;
            worst = std::max(worst, std::abs(fa - fb) / den);
        }
        if (prev > 0 && worst > 4.0 * prev + 1.0) return false;  // slopes keep growing
        prev = std::max(prev, worst);
    }
    return true;
}

}  // namespace

LipschitzVerdict lipschitz_at(const VectorFunction& F, const Vec& xbar) {
    LipschitzVerdict v;
    v.all = true;
    for (const auto& f : F.components) {
        bool ok;
        if (f.dim == 1) {
            ok = singular_subdiff(f, xbar[0]).is_singleton(0.0);
        } else if (auto parts = separate_coordinates(f)) {
            ok = true;
            for (int d = 0; d < f.dim; ++d)
                if (!singular_subdiff((*parts)[d], xbar[d]).is_singleton(0.0)) ok = false;
        } else {
            ok = numeric_lipschitz_probe(f, xbar);
            v.approx = true;
        }
        v.component.push_back(ok);
        v.all = v.all && ok;
    }
    return v;
}

namespace {

struct Selection {
    std::vector<RealSet1D::Interval> box;  // per flattened (objective, coord)
};

struct SelectionOutcome {
    bool solved = false;
    MultiplierCertificate cert;
};

SelectionOutcome solve_selection(const RegularizedProblem& RP, const Vec& xbar,
                                 const std::vector<std::vector<RealSet1D::Interval>>& pieces,
                                 const std::vector<int>& choice, const std::vector<bool>& active,
                                 const std::vector<Vec>& gens, const CertifyOptions& opt,
                                 bool paper_convention) {
    using detail::LinearProgram;
    const int m = RP.psi.objectives();
    const int n = RP.base.F.dim();
    const int K = static_cast<int>(gens.size());

    // variable layout: [alpha(m)] [beta(m)] [s+(m*n)] [s-(m*n)] [mu(K)] [r]
    const int off_alpha = 0;
    const int off_beta = m;
    const int off_sp = 2 * m;
    const int off_sm = 2 * m + m * n;
    const int off_mu = 2 * m + 2 * m * n;
    const int off_r = off_mu + K;
    const int nv = off_r + 1;

    // prox gradient coefficient per objective
    double factor = paper_convention ? RP.lambda : 2.0 * RP.lambda;
    std::vector<Vec> prox(m);
    for (int i = 0; i < m; ++i) {
        prox[i] = factor * RP.upsilon[i] * (xbar - RP.center);
    }

    LinearProgram lp;
    lp.nvars = nv;
    lp.c.assign(nv, 0.0);
    lp.c[off_r] = 1.0;

    auto sidx = [&](int i, int d) { return i * n + d; };

    // residual bound rows per coordinate: |defect_d| <= r
    for (int d = 0; d < n; ++d) {
        Vec row(nv, 0.0);
        for (int i = 0; i < m; ++i) {
            row[off_sp + sidx(i, d)] += 1.0;
            row[off_sm + sidx(i, d)] -= 1.0;
            row[off_alpha + i] += prox[i][d];
        }
        for (int k = 0; k < K; ++k) row[off_mu + k] += gens[k][d];
        Vec up = row;
        up[off_r] = -1.0;
        lp.add_row(std::move(up), LinearProgram::Rel::LE, 0.0);
        Vec dn = row;
        for (auto& c : dn) c = -c;
        dn[off_r] = -1.0;
        lp.add_row(std::move(dn), LinearProgram::Rel::LE, 0.0);
    }

    // simplex normalization and inactive betas
    {
        Vec row(nv, 0.0);
        for (int i = 0; i < m; ++i) {
            row[off_alpha + i] = 1.0;
            row[off_beta + i] = 1.0;
        }
        lp.add_row(std::move(row), LinearProgram::Rel::EQ, 1.0);
    }
    for (int i = 0; i < m; ++i) {
        if (!active[i]) {
            Vec row(nv, 0.0);
            row[off_beta + i] = 1.0;
            lp.add_row(std::move(row), LinearProgram::Rel::EQ, 0.0);
        }
    }

    // subgradient selection bounds: gamma_i*lo <= s_i <= gamma_i*hi
    for (int i = 0; i < m; ++i) {
        const auto& box = pieces[i];
        for (int d = 0; d < n; ++d) {
            const auto& iv = box[static_cast<std::size_t>(choice[i]) * n + d];
            if (std::isfinite(iv.lo)) {
                Vec row(nv, 0.0);
                row[off_sp + sidx(i, d)] = 1.0;
                row[off_sm + sidx(i, d)] = -1.0;
                row[off_alpha + i] = -iv.lo;
                row[off_beta + i] = -iv.lo;
                lp.add_row(std::move(row), LinearProgram::Rel::GE, 0.0);
            }
            if (std::isfinite(iv.hi)) {
                Vec row(nv, 0.0);
                row[off_sp + sidx(i, d)] = 1.0;
                row[off_sm + sidx(i, d)] = -1.0;
                row[off_alpha + i] = -iv.hi;
                row[off_beta + i] = -iv.hi;
                lp.add_row(std::move(row), LinearProgram::Rel::LE, 0.0);
            }
        }
    }

    // normal element cap (generators are unit vectors)
    if (K > 0) {
        Vec row(nv, 0.0);
        for (int k = 0; k < K; ++k) row[off_mu + k] = 1.0;
        lp.add_row(std::move(row), LinearProgram::Rel::LE, opt.tau_cap);
    }

    auto sol = detail::solve_lp(lp);
    SelectionOutcome out;
    if (sol.status != detail::LPResult::Status::Optimal) return out;

    MultiplierCertificate& c = out.cert;
    c.alpha.assign(m, 0.0);
    c.beta.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        c.alpha[i] = std::max(0.0, sol.x[off_alpha + i]);
        c.beta[i] = std::max(0.0, sol.x[off_beta + i]);
    }
    c.w.assign(n, 0.0);
    for (int k = 0; k < K; ++k)
        for (int d = 0; d < n; ++d) c.w[d] += sol.x[off_mu + k] * gens[k][d];
    c.tau = norm2(c.w);
    c.selected_pieces = choice;

    // independent recomputation of the inclusion defect: project the chosen
    // subgradient masses back onto the selected pieces, then evaluate
    c.subgradients.assign(static_cast<std::size_t>(m) * n, 0.0);
    Vec defect = c.w;
    double mass = 0.0;
    for (int i = 0; i < m; ++i) {
        double gamma = c.alpha[i] + c.beta[i];
        mass += gamma;
        for (int d = 0; d < n; ++d) {
            double s = sol.x[off_sp + sidx(i, d)] - sol.x[off_sm + sidx(i, d)];
            const auto& iv = pieces[i][static_cast<std::size_t>(choice[i]) * n + d];
            if (gamma > 1e-14) {
                double g = s / gamma;
                g = std::min(std::max(g, iv.lo), iv.hi);
                c.subgradients[sidx(i, d)] = g;
                defect[d] += gamma * g;
            } else {
                c.subgradients[sidx(i, d)] = std::min(std::max(0.0, iv.lo), iv.hi);
            }
            defect[d] += c.alpha[i] * prox[i][d];
        }
    }
    c.stationarity = norm2(defect);
    c.normalization = std::abs(mass - 1.0);
    c.complementarity = 0.0;
    Vec fbar = evaluate(RP.base.F, xbar);
    for (int i = 0; i < m; ++i)
        c.complementarity =
            std::max(c.complementarity, std::abs(c.beta[i] * (fbar[i] - RP.f_center[i])));
    c.feasible = c.stationarity <= opt.tol && c.normalization <= 1e-12 &&
                 c.complementarity <= 1e-10;
    out.solved = true;
    return out;
}

}  // namespace

MultiplierCertificate certify_pareto(const RegularizedProblem& RP, const Vec& xbar,
                                     const CertifyOptions& opt) {
    const int m = RP.psi.objectives();
    const int n = RP.base.F.dim();
    if (static_cast<int>(xbar.size()) != n)
        throw std::invalid_argument("certify_pareto: point dimension mismatch");
    if (!RP.in_level_set(xbar))
        throw std::invalid_argument("certify_pareto: candidate point is not in the feasible level set");
    if (m > 5) throw std::invalid_argument("certify_pareto: at most 5 objectives supported");

    LipschitzVerdict lip = lipschitz_at(RP.base.F, xbar);
    if (!lip.all) {
        std::string which;
        for (std::size_t i = 0; i < lip.component.size(); ++i)
            if (!lip.component[i]) which += (which.empty() ? "" : ", ") + std::to_string(i);
        throw PreconditionError(
            "certify_pareto: objective component(s) " + which +
            " are not locally Lipschitzian at the candidate point; certificates for "
            "non-Lipschitz costs are unsupported");
    }

    // per-objective convex pieces of the limiting subdifferential (flattened
    // per-coordinate boxes)
    std::vector<std::vector<RealSet1D::Interval>> pieces(m);
    std::vector<int> piece_count(m, 0);
    for (int i = 0; i < m; ++i) {
        ComponentSubdiff cs = component_subdiff(RP.base.F.components[i], xbar);
        std::vector<std::vector<RealSet1D::Interval>> per_coord;
        for (const auto& set : cs.per_coord) {
            auto cp = set.convex_pieces();
            if (cp.empty() || cp.size() > 4)
                throw std::invalid_argument(
                    "certify_pareto: objective " + std::to_string(i) +
                    " has an unsupported subdifferential piece structure at the point");
            per_coord.push_back(cp);
        }
        // cartesian product over coordinates
        std::vector<std::vector<RealSet1D::Interval>> boxes{{}};
        for (const auto& cp : per_coord) {
            std::vector<std::vector<RealSet1D::Interval>> next;
            for (const auto& partial : boxes)
                for (const auto& iv : cp) {
                    auto grown = partial;
                    grown.push_back(iv);
                    next.push_back(std::move(grown));
                }
            boxes = std::move(next);
        }
        piece_count[i] = static_cast<int>(boxes.size());
        for (const auto& b : boxes)
            for (const auto& iv : b) pieces[i].push_back(iv);
    }

    Vec fbar = evaluate(RP.base.F, xbar);
    std::vector<bool> active(m);
    for (int i = 0; i < m; ++i)
        active[i] = std::abs(fbar[i] - RP.f_center[i]) <= opt.active_tol;

    std::vector<Vec> gens = normal_cone(RP.base.omega, xbar);
    for (auto& g : gens) {
        double nv = norm2(g);
        if (nv > 0) for (auto& c : g) c /= nv;
    }

    // enumerate piece selections
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(piece_count[i]);

    auto run = [&](bool paper) {
        std::vector<SelectionOutcome> outcomes(total);
        kernels::for_each_index(total, opt.exec, [&](std::size_t sel) {
            std::vector<int> choice(m);
            std::size_t rest = sel;
            for (int i = 0; i < m; ++i) {
                choice[i] = static_cast<int>(rest % piece_count[i]);
                rest /= piece_count[i];
            }
            outcomes[sel] = solve_selection(RP, xbar, pieces, choice, active, gens, opt, paper);
        });
        // deterministic lexicographic best: (residual, selection index)
        MultiplierCertificate best;
        best.stationarity = kInf;
        bool found = false;
        for (std::size_t sel = 0; sel < total; ++sel) {
            if (!outcomes[sel].solved) continue;
            if (!found || outcomes[sel].cert.stationarity < best.stationarity) {
                best = outcomes[sel].cert;
                found = true;
            }
        }
        if (!found) best.note = "no selection admitted a multiplier solution";
        return best;
    };

    MultiplierCertificate cert = run(opt.paper_convention);
    if (!cert.feasible && cert.note.empty())
        cert.note = "no certificate found at tolerance " + std::to_string(opt.tol);
    if (opt.paper_convention) {
        MultiplierCertificate analytic = run(false);
        cert.other_convention_residual = analytic.stationarity;
        cert.note += (cert.note.empty() ? "" : "; ");
        cert.note += "analytic-gradient convention residual " +
                     std::to_string(analytic.stationarity);
    }
    return cert;
}

PenaltyReport exact_penalty_check(const PiecewiseFunction& f, const ConstraintSet& omega,
                                  const Vec& xbar, double tau, double radius, double step) {
    if (!omega.contains(xbar, 1e-12))
        throw std::invalid_argument("exact_penalty_check: xbar must lie in the constraint set");
    const int n = f.dim;
    PenaltyReport rep;
    rep.tau = tau;
    rep.radius = radius;
    rep.step = step;
    double fbar = evaluate(f, xbar);
    if (!std::isfinite(fbar))
        throw std::invalid_argument("exact_penalty_check: xbar outside the function domain");

    double best_violation = 0.0;
    auto try_point = [&](const Vec& x) {
        double fx = evaluate(f, x);
        if (!std::isfinite(fx)) return;
        double penalized = fx + tau * distance_to_set(omega, x);
        double gap = fbar - penalized;
        if (gap > 1e-12 && gap > best_violation) {
            best_violation = gap;
            rep.violator = x;
        }
    };

    // lattice over the ball
    Grid g;
    g.lo = xbar;
    g.hi = xbar;
    for (int d = 0; d < n; ++d) {
        g.lo[d] -= radius;
        g.hi[d] += radius;
    }
    g.step = step;
    const std::size_t N = g.size();
    for (std::size_t i = 0; i < N; ++i) try_point(g.point(i));

    // logarithmic ladders toward xbar catch violations at sub-step scales
    for (int d = 0; d < n; ++d) {
        for (double sign : {1.0, -1.0}) {
            for (int k = 1; k <= 14; ++k) {
                Vec x = xbar;
                x[d] += sign * std::pow(10.0, -k) * radius;
                try_point(x);
            }
        }
    }
    if (n > 1) {
        for (double sign : {1.0, -1.0}) {
            for (int k = 1; k <= 14; ++k) {
                Vec x = xbar;
                for (int d = 0; d < n; ++d) x[d] += sign * std::pow(10.0, -k) * radius;
                try_point(x);
            }
        }
    }

    rep.violation = best_violation;
    rep.pass = !rep.violator.has_value();
    return rep;
}

double penalty_tau_from_dl(const PiecewiseFunction& f, const Vec& xbar, const DLSchedule& sched) {
    DirLipReport rep = certify_dl(f, xbar, sched);
    if (rep.verdict != DLVerdict::DirectionallyLipschitz)
        throw PreconditionError("penalty_tau_from_dl: no directional-Lipschitz certificate at the point (" +
                                to_string(rep.verdict) + ")");
    // conservative over all certified directions: the penalty scan may need
    // to travel back to the set along any of them
    double L = 0.0;
    for (const auto& d : rep.directions)
        if (d.verdict == DLVerdict::DirectionallyLipschitz) L = std::max(L, d.L);
    return L + 1e-3;
}

}  // namespace moprox
