#include "moprox/problem.hpp"

#include <algorithm>
#include <cmath>

namespace moprox {

namespace kernels {

std::vector<char> nondominated_mask_serial(const std::vector<double>& values, std::size_t m,
                                           double tie_tol) {
    const std::size_t n = m == 0 ? 0 : values.size() / m;
    std::vector<char> mask(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = &values[i * m];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (dominates(&values[j * m], xi, m, tie_tol)) {
                mask[i] = 0;
                break;
            }
        }
    }
    return mask;
}

std::vector<char> nondominated_mask(const std::vector<double>& values, std::size_t m,
                                    double tie_tol, const ExecPolicy& pol) {
    const std::size_t n = m == 0 ? 0 : values.size() / m;
    std::vector<char> mask(n, 1);
    for_each_index(n, pol, [&](std::size_t i) {
        const double* xi = &values[i * m];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (dominates(&values[j * m], xi, m, tie_tol)) {
                mask[i] = 0;
                return;
            }
        }
    });
    return mask;
}

}  // namespace kernels

RegularizedProblem RegularizedProblem::make(MOProblem base, Vec center, double lambda,
                                            Vec upsilon) {
    RegularizedProblem rp;
    if (!base.omega.contains(center, 1e-12))
        throw std::invalid_argument("RegularizedProblem: center must lie in the constraint set");
    rp.psi = build_prox_objective(base.F, center, lambda, upsilon);  // validates lambda, upsilon
    rp.f_center = evaluate(base.F, center);
    rp.base = std::move(base);
    rp.center = std::move(center);
    rp.lambda = lambda;
    rp.upsilon = std::move(upsilon);
    return rp;
}

Vec RegularizedProblem::phi(const Vec& x) const {
    Vec v = evaluate(base.F, x);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f_center[i];
    return v;
}

bool RegularizedProblem::in_level_set(const Vec& x) const {
    if (!base.omega.contains(x, kLevelTol)) return false;
    Vec p = phi(x);
    for (double c : p) {
        if (!std::isfinite(c)) return false;
        if (c > kLevelTol) return false;
    }
    return true;
}

Grid Grid::uniform_1d(double lo, double hi, double step) {
    Grid g;
    g.lo = {lo};
    g.hi = {hi};
    g.step = step;
    return g;
}

std::vector<std::size_t> Grid::shape() const {
    if (lo.size() != hi.size()) throw std::invalid_argument("Grid: bound dimension mismatch");
    if (step <= 0.0) throw std::invalid_argument("Grid: step must be positive");
    std::vector<std::size_t> s;
    for (std::size_t d = 0; d < lo.size(); ++d) {
        if (hi[d] < lo[d]) throw std::invalid_argument("Grid: empty range");
        s.push_back(static_cast<std::size_t>(std::floor((hi[d] - lo[d]) / step + 1e-9)) + 1);
    }
    return s;
}

std::size_t Grid::size() const {
    std::size_t n = 1;
    for (std::size_t c : shape()) {
        if (c != 0 && n > cap / c + 1) throw std::invalid_argument("Grid: lattice cap exceeded");
        n *= c;
    }
    if (n > cap) throw std::invalid_argument("Grid: lattice cap exceeded");
    return n;
}

Vec Grid::point(std::size_t index) const {
    auto s = shape();
    Vec x(lo.size());
    for (std::size_t d = lo.size(); d-- > 0;) {
        std::size_t k = index % s[d];
        index /= s[d];
        x[d] = lo[d] + static_cast<double>(k) * step;
    }
    return x;
}

namespace {

constexpr double kTieTol = 1e-15;

template <class Feasible, class Objective>
ParetoResult pareto_on_lattice(const Grid& g, int m, const kernels::ExecPolicy& pol,
                               Feasible&& feasible, Objective&& objective) {
    const std::size_t n = g.size();

    // pass 1: feasibility + objective evaluation over the lattice
    std::vector<char> feas(n, 0);
    std::vector<double> vals(n * static_cast<std::size_t>(m), 0.0);
    kernels::for_each_index(n, pol, [&](std::size_t i) {
        Vec x = g.point(i);
        if (!feasible(x)) return;
        Vec v = objective(x);
        for (double c : v)
            if (!std::isfinite(c)) return;
        feas[i] = 1;
        for (int k = 0; k < m; ++k) vals[i * m + k] = v[k];
    });

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (feas[i]) keep.push_back(i);

    std::vector<double> packed(keep.size() * m);
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (int k = 0; k < m; ++k) packed[r * m + k] = vals[keep[r] * m + k];

    // pass 2: dominance filter
    std::vector<char> mask = kernels::nondominated_mask(packed, m, kTieTol, pol);

    ParetoResult res;
    for (std::size_t r = 0; r < keep.size(); ++r) {
        if (!mask[r]) continue;
        res.indices.push_back(keep[r]);
        res.points.push_back(g.point(keep[r]));
        Vec v(m);
        for (int k = 0; k < m; ++k) v[k] = packed[r * m + k];
        res.values.push_back(std::move(v));
    }
    return res;
}

}  // namespace

ParetoResult pareto_bruteforce(const MOProblem& P, const Grid& g, const kernels::ExecPolicy& pol) {
    return pareto_on_lattice(
        g, P.F.objectives(), pol, [&](const Vec& x) { return P.omega.contains(x, 1e-12); },
        [&](const Vec& x) { return evaluate(P.F, x); });
}

ParetoResult pareto_bruteforce(const RegularizedProblem& RP, const Grid& g,
                               const kernels::ExecPolicy& pol) {
    return pareto_on_lattice(
        g, RP.psi.objectives(), pol, [&](const Vec& x) { return RP.in_level_set(x); },
        [&](const Vec& x) { return evaluate(RP.psi, x); });
}

double phi_gamma(const RegularizedProblem& RP, const Vec& xbar, double gamma, const Vec& x) {
    if (gamma <= 0.0) throw std::invalid_argument("phi_gamma: gamma must be positive");
    Vec psix = evaluate(RP.psi, x);
    Vec psibar = evaluate(RP.psi, xbar);
    Vec phix = RP.phi(x);
    double v = -kInf;
    for (std::size_t i = 0; i < psix.size(); ++i) {
        if (!std::isfinite(psix[i]) || !std::isfinite(psibar[i])) return kInf;
        v = std::max(v, psix[i] - psibar[i] + gamma);
        v = std::max(v, phix[i]);
    }
    return v;
}

ScanResult phi_gamma_scan(const RegularizedProblem& RP, const Vec& xbar, double gamma,
                          const Grid& g, const kernels::ExecPolicy& pol) {
    const std::size_t n = g.size();
    auto [minv, arg] = kernels::argmin_reduce(n, pol, [&](std::size_t i) {
        Vec x = g.point(i);
        if (!RP.base.omega.contains(x, 1e-12)) return kInf;
        double v = phi_gamma(RP, xbar, gamma, x);
        return std::isfinite(v) ? v : kInf;
    });
    ScanResult r;
    r.min_value = minv;
    if (arg < n) r.argmin = g.point(arg);
    r.positive = minv > 0.0;
    return r;
}

}  // namespace moprox
