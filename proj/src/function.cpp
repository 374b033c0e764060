#include "moprox/function.hpp"

#include <algorithm>
#include <cmath>

namespace moprox {

namespace expr {

static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr constant(double c) {
    Expr e;
    e.op = Expr::Op::Constant;
    e.value = c;
    return make(std::move(e));
}

ExprPtr affine(Vec a, double b) {
    Expr e;
    e.op = Expr::Op::Affine;
    e.coeffs = std::move(a);
    e.offset = b;
    return make(std::move(e));
}

ExprPtr coord(int i, int dim) {
    Vec a(dim, 0.0);
    a.at(i) = 1.0;
    return affine(std::move(a), 0.0);
}

ExprPtr power(Vec base_a, double base_b, Rational r) {
    Expr e;
    e.op = Expr::Op::Power;
    e.coeffs = std::move(base_a);
    e.offset = base_b;
    e.exponent = r;
    return make(std::move(e));
}

ExprPtr power_coord(int i, int dim, Rational r) {
    Vec a(dim, 0.0);
    a.at(i) = 1.0;
    return power(std::move(a), 0.0, r);
}

ExprPtr abs(ExprPtr e) {
    Expr n;
    n.op = Expr::Op::Abs;
    n.args = {std::move(e)};
    return make(std::move(n));
}

ExprPtr square(ExprPtr e) {
    // canonicalize so the subdifferential side rules never meet
    // square-of-infinite-slope children
    if (e->op == Expr::Op::Power)
        return power(e->coeffs, e->offset, Rational(2 * e->exponent.num, e->exponent.den));
    if (e->op == Expr::Op::Affine)
        return power(e->coeffs, e->offset, Rational(2, 1));
    if (e->op == Expr::Op::Abs)
        return square(e->args[0]);
    Expr n;
    n.op = Expr::Op::Square;
    n.args = {std::move(e)};
    return make(std::move(n));
}

ExprPtr sqnorm_shift(Vec center) {
    Expr e;
    e.op = Expr::Op::SqNormShift;
    e.coeffs = std::move(center);
    return make(std::move(e));
}

ExprPtr sum(std::vector<ExprPtr> es) {
    if (es.empty()) throw std::invalid_argument("sum: empty argument list");
    if (es.size() == 1) return es[0];
    Expr e;
    e.op = Expr::Op::Sum;
    e.args = std::move(es);
    return make(std::move(e));
}

ExprPtr scale(double c, ExprPtr e) {
    Expr n;
    n.op = Expr::Op::Scale;
    n.value = c;
    n.args = {std::move(e)};
    return make(std::move(n));
}

ExprPtr max_of(std::vector<ExprPtr> es) {
    if (es.empty()) throw std::invalid_argument("max: empty argument list");
    if (es.size() == 1) return es[0];
    Expr e;
    e.op = Expr::Op::Max;
    e.args = std::move(es);
    return make(std::move(e));
}

ExprPtr min_of(std::vector<ExprPtr> es) {
    if (es.empty()) throw std::invalid_argument("min: empty argument list");
    if (es.size() == 1) return es[0];
    Expr e;
    e.op = Expr::Op::Min;
    e.args = std::move(es);
    return make(std::move(e));
}

ExprPtr sin_of(ExprPtr e) {
    Expr n;
    n.op = Expr::Op::Sin;
    n.args = {std::move(e)};
    return make(std::move(n));
}

ExprPtr oscillation(Vec base_a, double base_b) {
    Expr e;
    e.op = Expr::Op::Oscillation;
    e.coeffs = std::move(base_a);
    e.offset = base_b;
    return make(std::move(e));
}

}  // namespace expr

static double affine_value(const Expr& e, const Vec& x) {
    if (e.coeffs.size() != x.size())
        throw std::invalid_argument("expression dimension mismatch");
    return dot(e.coeffs, x) + e.offset;
}

double evaluate(const Expr& e, const Vec& x) {
    switch (e.op) {
        case Expr::Op::Constant:
            return e.value;
        case Expr::Op::Affine:
            return affine_value(e, x);
        case Expr::Op::Power:
            return rational_pow(affine_value(e, x), e.exponent);
        case Expr::Op::Abs: {
            double v = evaluate(*e.args[0], x);
            return std::isfinite(v) ? std::abs(v) : kInf;
        }
        case Expr::Op::Square: {
            double v = evaluate(*e.args[0], x);
            return std::isfinite(v) ? v * v : kInf;
        }
        case Expr::Op::SqNormShift: {
            if (e.coeffs.size() != x.size())
                throw std::invalid_argument("expression dimension mismatch");
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                double d = x[i] - e.coeffs[i];
                s += d * d;
            }
            return s;
        }
        case Expr::Op::Sum: {
            double s = 0.0;
            for (const auto& a : e.args) {
                double v = evaluate(*a, x);
                if (!std::isfinite(v)) return kInf;
                s += v;
            }
            return s;
        }
        case Expr::Op::Scale: {
            double v = evaluate(*e.args[0], x);
            if (!std::isfinite(v)) return kInf;
            return e.value * v;
        }
        case Expr::Op::Max: {
            double s = -kInf;
            for (const auto& a : e.args) {
                double v = evaluate(*a, x);
                if (!std::isfinite(v)) return kInf;
                s = std::max(s, v);
            }
            return s;
        }
        case Expr::Op::Min: {
            double s = kInf;
            for (const auto& a : e.args) {
                double v = evaluate(*a, x);
                if (!std::isfinite(v)) return kInf;
                s = std::min(s, v);
            }
            return s;
        }
        case Expr::Op::Sin: {
            double v = evaluate(*e.args[0], x);
            return std::isfinite(v) ? std::sin(v) : kInf;
        }
        case Expr::Op::Oscillation: {
            double u = affine_value(e, x);
            if (!std::isfinite(u)) return kInf;
            if (u == 0.0) return 0.0;  // continuous extension
            return u * std::sin(1.0 / u);
        }
    }
    return kInf;
}

std::optional<Quadratic1D> as_quadratic_1d(const Expr& e) {
    switch (e.op) {
        case Expr::Op::Constant:
            return Quadratic1D{e.value, 0, 0};
        case Expr::Op::Affine:
            if (e.coeffs.size() != 1) return std::nullopt;
            return Quadratic1D{e.offset, e.coeffs[0], 0};
        case Expr::Op::Power: {
            if (e.coeffs.size() != 1) return std::nullopt;
            double a = e.coeffs[0], b = e.offset;
            if (e.exponent == Rational(1, 1)) return Quadratic1D{b, a, 0};
            if (e.exponent == Rational(2, 1)) return Quadratic1D{b * b, 2 * a * b, a * a};
            return std::nullopt;
        }
        case Expr::Op::SqNormShift: {
            if (e.coeffs.size() != 1) return std::nullopt;
            double c = e.coeffs[0];
            return Quadratic1D{c * c, -2 * c, 1};
        }
        case Expr::Op::Square: {
            auto inner = as_quadratic_1d(*e.args[0]);
            if (!inner || inner->c2 != 0) return std::nullopt;
            return Quadratic1D{inner->c0 * inner->c0, 2 * inner->c0 * inner->c1,
                               inner->c1 * inner->c1};
        }
        case Expr::Op::Sum: {
            Quadratic1D q{0, 0, 0};
            for (const auto& a : e.args) {
                auto part = as_quadratic_1d(*a);
                if (!part) return std::nullopt;
                q.c0 += part->c0;
                q.c1 += part->c1;
                q.c2 += part->c2;
            }
            return q;
        }
        case Expr::Op::Scale: {
            auto part = as_quadratic_1d(*e.args[0]);
            if (!part) return std::nullopt;
            return Quadratic1D{e.value * part->c0, e.value * part->c1, e.value * part->c2};
        }
        default:
            return std::nullopt;
    }
}

bool guard_holds(const std::vector<AffineIneq>& guard, const Vec& x) {
    for (const auto& g : guard) {
        double v = dot(g.a, x);
        if (g.strict ? !(v < g.b) : !(v <= g.b)) return false;
    }
    return true;
}

double evaluate(const PiecewiseFunction& f, const Vec& x) {
    if (static_cast<int>(x.size()) != f.dim)
        throw std::invalid_argument("evaluate: point dimension does not match function");
    for (const auto& p : f.pieces) {
        if (guard_holds(p.guard, x)) return evaluate(*p.body, x);
    }
    return kInf;
}

double evaluate(const PiecewiseFunction& f, double x) { return evaluate(f, Vec{x}); }

Interval1D piece_interval_1d(const Piece& p) {
    Interval1D r;
    for (const auto& g : p.guard) {
        if (g.a.size() != 1) throw std::invalid_argument("piece_interval_1d: guard not 1-D");
        double a = g.a[0];
        if (a == 0.0) {
            bool holds = g.strict ? (0.0 < g.b) : (0.0 <= g.b);
            if (!holds) r.empty = true;
            continue;
        }
        double bound = g.b / a;
        if (a > 0.0) {
            if (bound < r.hi || (bound == r.hi && g.strict)) {
                r.hi = bound;
                r.hi_open = g.strict;
            }
        } else {
            if (bound > r.lo || (bound == r.lo && g.strict)) {
                r.lo = bound;
                r.lo_open = g.strict;
            }
        }
    }
    if (r.lo > r.hi || (r.lo == r.hi && (r.lo_open || r.hi_open))) r.empty = true;
    return r;
}

std::vector<ValidationIssue> validate(const PiecewiseFunction& f, double continuity_tol) {
    std::vector<ValidationIssue> issues;
    if (f.dim < 1) issues.push_back({"dimension must be >= 1"});
    if (f.pieces.empty()) issues.push_back({"no pieces"});
    for (const auto& p : f.pieces) {
        for (const auto& g : p.guard)
            if (static_cast<int>(g.a.size()) != f.dim)
                issues.push_back({"guard row dimension mismatch"});
    }
    if (f.dim == 1) {
        std::vector<Interval1D> ivs;
        for (const auto& p : f.pieces) ivs.push_back(piece_interval_1d(p));
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            if (ivs[i].empty) continue;
            for (std::size_t j = i + 1; j < ivs.size(); ++j) {
                if (ivs[j].empty) continue;
                double lo = std::max(ivs[i].lo, ivs[j].lo);
                double hi = std::min(ivs[i].hi, ivs[j].hi);
                if (lo < hi) {
                    issues.push_back({"pieces " + std::to_string(i) + " and " + std::to_string(j) +
                                      " have overlapping interiors"});
                }
            }
        }
        if (f.declared_continuous) {
            for (std::size_t i = 0; i < ivs.size(); ++i) {
                for (std::size_t j = 0; j < ivs.size(); ++j) {
                    if (i == j || ivs[i].empty || ivs[j].empty) continue;
                    if (ivs[i].hi == ivs[j].lo && std::isfinite(ivs[i].hi)) {
                        double b = ivs[i].hi;
                        double vi = evaluate(*f.pieces[i].body, Vec{b});
                        double vj = evaluate(*f.pieces[j].body, Vec{b});
                        if (std::isfinite(vi) && std::isfinite(vj) &&
                            std::abs(vi - vj) > continuity_tol)
                            issues.push_back({"declared continuous but pieces disagree at boundary " +
                                              std::to_string(b)});
                    }
                }
            }
        }
    }
    return issues;
}

namespace {

std::vector<AffineIneq> merge_guards(const std::vector<AffineIneq>& a,
                                     const std::vector<AffineIneq>& b) {
    std::vector<AffineIneq> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

// split a refined 1-D piece of max/min(bodyA, bodyB) along switching points
void resolve_max_1d(std::vector<Piece>& out, const std::vector<AffineIneq>& guard, ExprPtr a,
                    ExprPtr b, bool want_max) {
    auto qa = as_quadratic_1d(*a);
    auto qb = as_quadratic_1d(*b);
    Piece joint;
    joint.guard = guard;
    if (!qa || !qb) {
        joint.body = want_max ? expr::max_of({a, b}) : expr::min_of({a, b});
        out.push_back(joint);
        return;
    }
    // sign analysis of d(x) = a(x) - b(x) on the guard interval
    double d2 = qa->c2 - qb->c2, d1 = qa->c1 - qb->c1, d0 = qa->c0 - qb->c0;
    std::vector<double> roots;
    const double eps = 1e-14;
    if (std::abs(d2) > eps) {
        double disc = d1 * d1 - 4 * d2 * d0;
        if (disc >= 0) {
            double s = std::sqrt(disc);
            roots.push_back((-d1 - s) / (2 * d2));
            roots.push_back((-d1 + s) / (2 * d2));
            std::sort(roots.begin(), roots.end());
        }
    } else if (std::abs(d1) > eps) {
        roots.push_back(-d0 / d1);
    } else {
        out.push_back({guard, want_max ? (d0 >= 0 ? a : b) : (d0 >= 0 ? b : a)});
        return;
    }
    Interval1D iv;
    {
        Piece tmp;
        tmp.guard = guard;
        iv = piece_interval_1d(tmp);
    }
    std::vector<double> cuts;
    for (double r : roots)
        if (r > iv.lo && r < iv.hi) cuts.push_back(r);
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double lo = iv.lo;
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
        double hi = (k < cuts.size()) ? cuts[k] : iv.hi;
        if (lo > hi) break;
        double mid;
        if (std::isinf(lo) && std::isinf(hi))
            mid = 0.0;
        else if (std::isinf(lo))
            mid = hi - 1.0;
        else if (std::isinf(hi))
            mid = lo + 1.0;
        else
            mid = 0.5 * (lo + hi);
        double dv = (d2 * mid + d1) * mid + d0;
        ExprPtr chosen = want_max ? (dv >= 0 ? a : b) : (dv >= 0 ? b : a);
        Piece piece;
        piece.guard = guard;
        if (std::isfinite(lo)) piece.guard.push_back({Vec{-1.0}, -lo, false});
        if (std::isfinite(hi)) piece.guard.push_back({Vec{1.0}, hi, false});
        piece.body = chosen;
        out.push_back(piece);
        lo = hi;
    }
}

PiecewiseFunction combine_two(CombineKind kind, const PiecewiseFunction& f,
                              const PiecewiseFunction& g) {
    if (f.dim != g.dim) throw std::invalid_argument("combine: dimension mismatch");
    PiecewiseFunction r;
    r.dim = f.dim;
    r.declared_continuous = f.declared_continuous && g.declared_continuous;
    for (const auto& pf : f.pieces) {
        for (const auto& pg : g.pieces) {
            auto guard = merge_guards(pf.guard, pg.guard);
            if (r.dim == 1) {
                Piece probe;
                probe.guard = guard;
                if (piece_interval_1d(probe).empty) continue;
            }
            if (kind == CombineKind::Sum) {
                r.pieces.push_back({guard, expr::sum({pf.body, pg.body})});
            } else if (r.dim == 1) {
                resolve_max_1d(r.pieces, guard, pf.body, pg.body, true);
            } else {
                r.pieces.push_back({guard, expr::max_of({pf.body, pg.body})});
            }
        }
    }
    return r;
}

}  // namespace

PiecewiseFunction combine(CombineKind kind, const std::vector<PiecewiseFunction>& fs) {
    if (fs.empty()) throw std::invalid_argument("combine: empty function list");
    PiecewiseFunction acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = combine_two(kind, acc, fs[i]);
    return acc;
}

Vec evaluate(const VectorFunction& F, const Vec& x) {
    Vec r(F.components.size());
    for (std::size_t i = 0; i < F.components.size(); ++i) r[i] = evaluate(F.components[i], x);
    return r;
}

VectorFunction build_prox_objective(const VectorFunction& F, const Vec& center, double lambda,
                                    const Vec& upsilon) {
    if (lambda <= 0.0) throw std::invalid_argument("build_prox_objective: lambda must be positive");
    if (upsilon.size() != F.components.size())
        throw std::invalid_argument("build_prox_objective: upsilon size mismatch");
    for (double u : upsilon)
        if (u <= 0.0) throw std::invalid_argument("build_prox_objective: upsilon components must be positive");
    if (std::abs(norm2(upsilon) - 1.0) > 1e-12)
        throw std::invalid_argument("build_prox_objective: upsilon must have unit norm");
    if (static_cast<int>(center.size()) != F.dim())
        throw std::invalid_argument("build_prox_objective: center dimension mismatch");
    for (const auto& fc : F.components)
        if (!std::isfinite(evaluate(fc, center)))
            throw std::invalid_argument("build_prox_objective: center outside domain");

    VectorFunction psi;
    for (std::size_t i = 0; i < F.components.size(); ++i) {
        PiecewiseFunction comp = F.components[i];
        ExprPtr prox = expr::scale(lambda * upsilon[i], expr::sqnorm_shift(center));
        for (auto& piece : comp.pieces) piece.body = expr::sum({piece.body, prox});
        comp.name = comp.name.empty() ? "psi" : ("psi(" + comp.name + ")");
        psi.components.push_back(std::move(comp));
    }
    return psi;
}

namespace fnlib {

static Piece whole_space_piece(ExprPtr body) { return Piece{{}, std::move(body)}; }

PiecewiseFunction from_expr(ExprPtr body, int dim, std::string name) {
    PiecewiseFunction f;
    f.dim = dim;
    f.pieces.push_back(whole_space_piece(std::move(body)));
    f.declared_continuous = true;
    f.name = std::move(name);
    return f;
}

PiecewiseFunction abs_x() {
    PiecewiseFunction f;
    f.dim = 1;
    f.declared_continuous = true;
    f.name = "abs";
    f.pieces.push_back({{AffineIneq{Vec{1.0}, 0.0, true}}, expr::affine(Vec{-1.0}, 0.0)});   // x < 0
    f.pieces.push_back({{AffineIneq{Vec{-1.0}, 0.0, false}}, expr::affine(Vec{1.0}, 0.0)});  // x >= 0
    return f;
}

PiecewiseFunction abs_x_atom() {
    return from_expr(expr::abs(expr::coord(0, 1)), 1, "abs_atom");
}

PiecewiseFunction square_x() {
    return from_expr(expr::power_coord(0, 1, Rational(2, 1)), 1, "square");
}

PiecewiseFunction cube_root() {
    return from_expr(expr::power_coord(0, 1, Rational(1, 3)), 1, "cuberoot");
}

PiecewiseFunction neg_cube_root() {
    return from_expr(expr::scale(-1.0, expr::power_coord(0, 1, Rational(1, 3))), 1, "neg_cuberoot");
}

PiecewiseFunction abs_cube_root(double sign) {
    return from_expr(expr::scale(sign, expr::abs(expr::power_coord(0, 1, Rational(1, 3)))), 1,
                     sign >= 0 ? "abs_cuberoot" : "neg_abs_cuberoot");
}

PiecewiseFunction cube_root_sum(int n) {
    std::vector<ExprPtr> terms;
    for (int i = 0; i < n; ++i) terms.push_back(expr::power_coord(i, n, Rational(1, 3)));
    return from_expr(terms.size() == 1 ? terms[0] : expr::sum(terms), n, "cuberoot_sum");
}

PiecewiseFunction oscillation_pair_component() {
    PiecewiseFunction f;
    f.dim = 1;
    f.declared_continuous = true;
    f.name = "half_x_sin_inv";
    f.pieces.push_back({{AffineIneq{Vec{1.0}, 0.0, false}}, expr::affine(Vec{-1.0}, 0.0)});  // x <= 0
    f.pieces.push_back(
        {{AffineIneq{Vec{-1.0}, 0.0, true}}, expr::scale(0.5, expr::oscillation(Vec{1.0}, 0.0))});
    return f;
}

PiecewiseFunction parabola_shift(double c) {
    return from_expr(expr::sqnorm_shift(Vec{c}), 1, "parabola");
}

PiecewiseFunction cuberoot_or_parabola() {
    PiecewiseFunction f;
    f.dim = 1;
    f.declared_continuous = true;
    f.name = "cuberoot_or_parabola";
    f.pieces.push_back({{AffineIneq{Vec{1.0}, 0.0, false}},
                        expr::sum({expr::power_coord(0, 1, Rational(2, 1)),
                                   expr::coord(0, 1)})});  // x <= 0: x^2 + x
    f.pieces.push_back({{AffineIneq{Vec{-1.0}, 0.0, true}},
                        expr::power_coord(0, 1, Rational(1, 3))});  // x > 0: x^(1/3)
    return f;
}

PiecewiseFunction min_x_zero() {
    PiecewiseFunction f;
    f.dim = 1;
    f.declared_continuous = true;
    f.name = "min_x_zero";
    f.pieces.push_back({{AffineIneq{Vec{1.0}, 0.0, true}}, expr::coord(0, 1)});      // x < 0: x
    f.pieces.push_back({{AffineIneq{Vec{-1.0}, 0.0, false}}, expr::constant(0.0)});  // x >= 0: 0
    return f;
}

}  // namespace fnlib

}  // namespace moprox
