#include "moprox/dirlip.hpp"

#include <algorithm>
#include <cmath>

#include "moprox/rng.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace moprox {

DLSchedule DLSchedule::defaults() {
    DLSchedule s;
    s.t_levels = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    s.point_radii.clear();
    for (double t : s.t_levels) s.point_radii.push_back(std::sqrt(t));
    s.dir_radii = {0.3, 0.12, 0.05, 0.02, 0.006, 0.0005};
    s.samples_per_level = 160;
    return s;
}

DLSchedule DLSchedule::fast() {
    DLSchedule s = defaults();
    s.samples_per_level = 48;
    return s;
}

std::string to_string(DLVerdict v) {
    switch (v) {
        case DLVerdict::DirectionallyLipschitz: return "DL";
        case DLVerdict::NotDirectionallyLipschitz: return "not-DL";
        case DLVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<double> quotient_limsup(const PiecewiseFunction& f, const Vec& xbar, const Vec& u,
                                    const DLSchedule& sched, std::uint64_t substream) {
    const int n = f.dim;
    if (static_cast<int>(xbar.size()) != n)
        throw std::invalid_argument("quotient_limsup: point dimension mismatch");
    if (sched.t_levels.empty() || sched.samples_per_level < 1)
        throw std::invalid_argument("quotient_limsup: schedule needs levels and samples");
    for (std::size_t j = 0; j < sched.levels(); ++j) {
        if (sched.t_levels[j] <= 0.0 ||
            (j > 0 && sched.t_levels[j] >= sched.t_levels[j - 1]))
            throw std::invalid_argument("quotient_limsup: step levels must decrease to 0");
        if (j > 0 && (sched.point_radii[j] > sched.point_radii[j - 1] ||
                      sched.dir_radii[std::min(j, sched.dir_radii.size() - 1)] >
                          sched.dir_radii[std::min(j - 1, sched.dir_radii.size() - 1)]))
            throw std::invalid_argument("quotient_limsup: radii must be non-increasing");
    }
    if (std::abs(norm2(u) - 1.0) > 1e-12)
        throw std::invalid_argument("quotient_limsup: direction must be a unit vector");
    const double fbar = evaluate(f, xbar);
    if (!std::isfinite(fbar))
        throw std::invalid_argument("quotient_limsup: point outside the function domain");
    const bool continuous = f.declared_continuous;

    std::vector<double> q_levels;
    for (std::size_t j = 0; j < sched.levels(); ++j) {
        const double tj = sched.t_levels[j];
        const double delta = sched.point_radii[j];
        const double rho = j < sched.dir_radii.size() ? sched.dir_radii[j] : sched.dir_radii.back();
        const double filter = std::cbrt(tj);
        Rng rng(mix_seed(sched.seed ^ substream, 1000 + j));
        double best = -kInf;

        auto probe = [&](const Vec& x, const Vec& v, double t) {
            double fx = evaluate(f, x);
            if (!std::isfinite(fx)) return;  // x must stay inside dom f
            if (!continuous && std::abs(fx - fbar) > filter) return;  // value-attentive
            Vec y = x;
            for (int i = 0; i < n; ++i) y[i] += t * v[i];
            double fy = evaluate(f, y);
            double q = std::isfinite(fy) ? (fy - fx) / t : kInf;
            best = std::max(best, q);
        };

        for (int s = 0; s < sched.samples_per_level; ++s) {
            Vec v = (s == 0) ? u : rng.unit_vector_near(u, rho);
            double t = (s == 0) ? tj : rng.log_uniform(1e-6, 1.0) * tj;
            // structured probes: the centre point, the pulled-back point
            // x = xbar - t v (lands exactly on xbar), and radius-scale points
            probe(xbar, v, t);
            {
                Vec x = xbar;
                for (int i = 0; i < n; ++i) x[i] -= t * v[i];
                probe(x, v, t);
            }
            for (double c : {1.0, -1.0}) {
                Vec x = xbar;
                for (int i = 0; i < n; ++i) x[i] += c * delta * v[i];
                probe(x, v, t);
            }
            // random point at a log-uniform radius
            {
                Vec dir = rng.unit_vector(n);
                double r = rng.log_uniform(1e-3, 1.0) * delta;
                Vec x = xbar;
                for (int i = 0; i < n; ++i) x[i] += r * dir[i];
                probe(x, v, t);
            }
        }
        q_levels.push_back(best);
    }
    return q_levels;
}

namespace {

struct SlopeFit {
    double slope = 0.0;
    double r2 = 0.0;
    int points = 0;
};

SlopeFit fit_loglog(const std::vector<double>& t, const std::vector<double>& q) {
    SlopeFit fit;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (std::isfinite(q[i]) && q[i] > 0.0) {
            xs.push_back(std::log10(t[i]));
            ys.push_back(std::log10(q[i]));
        }
    }
    fit.points = static_cast<int>(xs.size());
    if (fit.points < 3) return fit;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 0 || syy <= 0) return fit;
    fit.slope = sxy / sxx;
    fit.r2 = (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace

DirectionResult classify_direction(const PiecewiseFunction& f, const Vec& xbar, const Vec& u,
                                   const DLSchedule& sched, std::uint64_t substream) {
    DirectionResult r;
    r.u = u;
    r.q_levels = quotient_limsup(f, xbar, u, sched, substream);
    const std::size_t J = r.q_levels.size() - 1;
    const double qJ = r.q_levels[J];
    const double qJ1 = r.q_levels[J - 1];
    SlopeFit fit = fit_loglog(sched.t_levels, r.q_levels);
    r.slope = fit.slope;
    r.r2 = fit.r2;

    const bool finite_tail = std::isfinite(qJ) && std::isfinite(qJ1);
    if (finite_tail && qJ <= 0.0 && qJ1 <= 0.0) {
        r.verdict = DLVerdict::DirectionallyLipschitz;
        r.L = 0.0;
        return r;
    }
    if (finite_tail && qJ > 0.0 && qJ1 > 0.0 &&
        std::abs(qJ - qJ1) <= 0.10 * std::max(qJ, qJ1)) {
        r.verdict = DLVerdict::DirectionallyLipschitz;
        r.L = std::max(qJ, qJ1);
        return r;
    }
    // a non-growing tail over the last three levels certifies boundedness
    // (smooth atoms have vanishing max-quotients, e.g. ~ C * radius)
    if (finite_tail && r.q_levels.size() >= 3) {
        const double qJ2 = r.q_levels[J - 2];
        bool non_growing = std::isfinite(qJ2) && qJ <= qJ1 * 1.1 + 1e-9 && qJ1 <= qJ2 * 1.1 + 1e-9;
        if (non_growing) {
            r.verdict = DLVerdict::DirectionallyLipschitz;
            r.L = std::max(qJ, 0.0);
            return r;
        }
    }
    bool infinite_tail = !std::isfinite(qJ) && !std::isfinite(qJ1);
    if (infinite_tail || (fit.points >= 4 && fit.slope <= -0.2 && fit.r2 >= 0.9)) {
        r.verdict = DLVerdict::NotDirectionallyLipschitz;
        return r;
    }
    r.verdict = DLVerdict::Inconclusive;
    return r;
}

std::vector<Vec> direction_grid(int n) {
    std::vector<Vec> dirs;
    if (n == 1) {
        dirs.push_back(Vec{1.0});
        dirs.push_back(Vec{-1.0});
        return dirs;
    }
    if (n > 3) throw std::invalid_argument("direction_grid: searches are limited to n <= 3");
    for (int i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        dirs.push_back(e);
        e[i] = -1.0;
        dirs.push_back(e);
    }
    for (double sign : {1.0, -1.0}) {
        Vec d(n, sign / std::sqrt(static_cast<double>(n)));
        dirs.push_back(d);
    }
    const int count = 64 * n;
    if (n == 2) {
        for (int k = 0; k < count; ++k) {
            double a = 2.0 * M_PI * k / count;
            dirs.push_back(Vec{std::cos(a), std::sin(a)});
        }
    } else {
        // Fibonacci sphere
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / count;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double a = golden * k;
            dirs.push_back(Vec{r * std::cos(a), r * std::sin(a), z});
        }
    }
    for (auto& d : dirs) {
        double nv = norm2(d);
        for (auto& c : d) c /= nv;
    }
    return dirs;
}

DirLipReport certify_dl(const PiecewiseFunction& f, const Vec& xbar, const DLSchedule& sched) {
    DirLipReport rep;
    rep.point = xbar;
    std::vector<Vec> dirs = direction_grid(f.dim);
    rep.directions.resize(dirs.size());

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (long k = 0; k < static_cast<long>(dirs.size()); ++k) {
        // fixed substream per direction index: identical to serial execution
        rep.directions[k] =
            classify_direction(f, xbar, dirs[k], sched, static_cast<std::uint64_t>(k) * 0x9e37);
    }

    long best = -1;
    double best_L = kInf, best_margin = kInf;
    bool any_inconclusive = false;
    for (long k = 0; k < static_cast<long>(rep.directions.size()); ++k) {
        const DirectionResult& d = rep.directions[k];
        if (d.verdict == DLVerdict::DirectionallyLipschitz) {
            rep.certified_directions.push_back(d.u);
            double margin = d.q_levels.back();  // more negative = more robust
            if (d.L < best_L - 1e-12 ||
                (std::abs(d.L - best_L) <= 1e-12 && margin < best_margin)) {
                best = k;
                best_L = d.L;
                best_margin = margin;
            }
        } else if (d.verdict == DLVerdict::Inconclusive) {
            any_inconclusive = true;
        }
    }

    if (best >= 0) {
        rep.verdict = DLVerdict::DirectionallyLipschitz;
        rep.u = rep.directions[best].u;
        rep.L = rep.directions[best].L;
        rep.delta = sched.point_radii.back();
        rep.slope = rep.directions[best].slope;
        rep.r2 = rep.directions[best].r2;
    } else if (!any_inconclusive) {
        rep.verdict = DLVerdict::NotDirectionallyLipschitz;
        // report the clearest blow-up fit among the refuted directions
        double best_r2 = -1.0;
        for (const auto& d : rep.directions) {
            if (d.r2 > best_r2) {
                best_r2 = d.r2;
                rep.slope = d.slope;
                rep.r2 = d.r2;
                rep.u = d.u;
            }
        }
    } else {
        rep.verdict = DLVerdict::Inconclusive;
    }
    return rep;
}

DLCalcOutcome dl_calculus_check(CombineKind kind, const PiecewiseFunction& f,
                                const PiecewiseFunction& g, const Vec& xbar, const Vec& u,
                                const DLSchedule& sched) {
    DLCalcOutcome out;
    DirectionResult rf = classify_direction(f, xbar, u, sched);
    DirectionResult rg = classify_direction(g, xbar, u, sched);
    if (rf.verdict != DLVerdict::DirectionallyLipschitz) {
        out.status = DLCalcOutcome::Status::PreconditionViolation;
        out.detail = "first function not certified at the common direction (" +
                     to_string(rf.verdict) + ")";
        return out;
    }
    if (rg.verdict != DLVerdict::DirectionallyLipschitz) {
        out.status = DLCalcOutcome::Status::PreconditionViolation;
        out.detail = "second function not certified at the common direction (" +
                     to_string(rg.verdict) + ")";
        return out;
    }
    out.L_f = rf.L;
    out.L_g = rg.L;
    PiecewiseFunction h = combine(kind, {f, g});
    DirectionResult rh = classify_direction(h, xbar, u, sched);
    if (rh.verdict != DLVerdict::DirectionallyLipschitz) {
        out.status = DLCalcOutcome::Status::Fail;
        out.detail = "combination not certified (" + to_string(rh.verdict) + ")";
        return out;
    }
    out.L_combined = rh.L;
    double bound = (kind == CombineKind::Sum) ? rf.L + rg.L : std::max(rf.L, rg.L);
    if (rh.L <= bound + 1e-3) {
        out.status = DLCalcOutcome::Status::Pass;
    } else {
        out.status = DLCalcOutcome::Status::Fail;
        out.detail = "combined constant exceeds the calculus bound";
    }
    return out;
}

}  // namespace moprox
