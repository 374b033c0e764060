#include "moprox/constraint.hpp"

#include <algorithm>
#include <cmath>

namespace moprox {

ConstraintSet ConstraintSet::whole_space(int dim) {
    ConstraintSet s;
    s.kind_ = Kind::WholeSpace;
    s.dim_ = dim;
    return s;
}

ConstraintSet ConstraintSet::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box: bound dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) throw std::invalid_argument("box: lower bound exceeds upper bound");
    ConstraintSet s;
    s.kind_ = Kind::Box;
    s.dim_ = static_cast<int>(lo.size());
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
}

ConstraintSet ConstraintSet::polyhedron(int dim, std::vector<Row> rows, Vec feasible_point) {
    if (static_cast<int>(feasible_point.size()) != dim)
        throw std::invalid_argument("polyhedron: feasible point dimension mismatch");
    if (rows.size() > 8)
        throw std::invalid_argument("polyhedron: at most 8 constraint rows supported");
    for (const auto& r : rows) {
        if (static_cast<int>(r.a.size()) != dim)
            throw std::invalid_argument("polyhedron: row dimension mismatch");
        if (dot(r.a, feasible_point) > r.b + 1e-9)
            throw std::invalid_argument("polyhedron: certifying point infeasible");
    }
    ConstraintSet s;
    s.kind_ = Kind::Polyhedron;
    s.dim_ = dim;
    s.rows_ = std::move(rows);
    return s;
}

bool ConstraintSet::contains(const Vec& x, double tol) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("ConstraintSet::contains: dimension mismatch");
    switch (kind_) {
        case Kind::WholeSpace:
            return true;
        case Kind::Box:
            for (int i = 0; i < dim_; ++i)
                if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
            return true;
        case Kind::Polyhedron:
            for (const auto& r : rows_)
                if (dot(r.a, x) > r.b + tol) return false;
            return true;
    }
    return false;
}

namespace {

// solve the k x k symmetric system G mu = rhs by Gaussian elimination with
// partial pivoting; returns false on (near) singularity
bool solve_dense(std::vector<std::vector<double>> G, Vec rhs, Vec& out) {
    const std::size_t k = rhs.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
        if (std::abs(G[piv][col]) < 1e-12) return false;
        std::swap(G[piv], G[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < k; ++r) {
            double f = G[r][col] / G[col][col];
            for (std::size_t c = col; c < k; ++c) G[r][c] -= f * G[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    out.assign(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < k; ++c) s -= G[i][c] * out[c];
        out[i] = s / G[i][i];
    }
    return true;
}

Projection project_polyhedron(const ConstraintSet& omega, const Vec& x) {
    const auto& rows = omega.rows();
    const std::size_t m = rows.size();
    Projection best;
    best.distance = kInf;

    // enumerate active subsets; the projection onto {a_i.y = b_i, i in S}
    // is y = x - A^T mu with (A A^T) mu = A x - b
    const std::size_t subsets = std::size_t{1} << m;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::size_t> S;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::size_t{1} << i)) S.push_back(i);
        if (S.size() > x.size()) continue;
        Vec y = x;
        if (!S.empty()) {
            const std::size_t k = S.size();
            std::vector<std::vector<double>> G(k, std::vector<double>(k));
            Vec rhs(k);
            for (std::size_t r = 0; r < k; ++r) {
                for (std::size_t c = 0; c < k; ++c) G[r][c] = dot(rows[S[r]].a, rows[S[c]].a);
                rhs[r] = dot(rows[S[r]].a, x) - rows[S[r]].b;
            }
            Vec mu;
            if (!solve_dense(std::move(G), std::move(rhs), mu)) continue;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t i = 0; i < x.size(); ++i) y[i] -= mu[r] * rows[S[r]].a[i];
        }
        if (!omega.contains(y, 1e-9)) continue;
        double d = norm2(y - x);
        if (d < best.distance) {
            best.distance = d;
            best.point = y;
        }
    }
    if (!std::isfinite(best.distance))
        throw std::runtime_error("distance_and_projection: polyhedron projection failed");
    if (best.distance < 1e-15) best.distance = 0.0;
    return best;
}

}  // namespace

Projection distance_and_projection(const ConstraintSet& omega, const Vec& x) {
    if (static_cast<int>(x.size()) != omega.dim())
        throw std::invalid_argument("distance_and_projection: dimension mismatch");
    switch (omega.kind()) {
        case ConstraintSet::Kind::WholeSpace:
            return {0.0, x};
        case ConstraintSet::Kind::Box: {
            Projection p;
            p.point = x;
            double s = 0.0;
            for (int i = 0; i < omega.dim(); ++i) {
                double c = std::min(std::max(x[i], omega.lower()[i]), omega.upper()[i]);
                s += (x[i] - c) * (x[i] - c);
                p.point[i] = c;
            }
            p.distance = std::sqrt(s);
            return p;
        }
        case ConstraintSet::Kind::Polyhedron:
            return project_polyhedron(omega, x);
    }
    throw std::logic_error("distance_and_projection: unknown set kind");
}

std::vector<Vec> normal_cone(const ConstraintSet& omega, const Vec& xbar, double tol) {
    if (!omega.contains(xbar, tol))
        throw std::invalid_argument("normal_cone: point not in the set");
    std::vector<Vec> gens;
    switch (omega.kind()) {
        case ConstraintSet::Kind::WholeSpace:
            break;
        case ConstraintSet::Kind::Box:
            for (int i = 0; i < omega.dim(); ++i) {
                if (std::isfinite(omega.lower()[i]) && xbar[i] <= omega.lower()[i] + tol) {
                    Vec g(omega.dim(), 0.0);
                    g[i] = -1.0;
                    gens.push_back(g);
                }
                if (std::isfinite(omega.upper()[i]) && xbar[i] >= omega.upper()[i] - tol) {
                    Vec g(omega.dim(), 0.0);
                    g[i] = 1.0;
                    gens.push_back(g);
                }
            }
            break;
        case ConstraintSet::Kind::Polyhedron:
            for (const auto& r : omega.rows())
                if (dot(r.a, xbar) >= r.b - tol) gens.push_back(r.a);
            break;
    }
    return gens;
}

DistSubdiff dist_subdiff(const ConstraintSet& omega, const Vec& xbar) {
    DistSubdiff d;
    d.generators = normal_cone(omega, xbar);
    if (omega.dim() == 1) {
        d.set_1d = RealSet1D::point(0.0);
        for (const auto& g : d.generators) {
            if (g[0] > 0)
                d.set_1d = d.set_1d.union_with(RealSet1D::interval(0.0, 1.0));
            else if (g[0] < 0)
                d.set_1d = d.set_1d.union_with(RealSet1D::interval(-1.0, 0.0));
        }
    }
    return d;
}

}  // namespace moprox
