#include "moprox/subdiff.hpp"

#include <algorithm>
#include <cmath>

#include "moprox/rng.hpp"

namespace moprox {

namespace {

constexpr double kValueTieTol = 1e-12;

struct ExprSide {
    double value = 0.0;        // limit of the body value along the side
    SideLimit quotient;        // slope-oriented difference quotient
    SideLimit deriv;           // derivative accumulation range
    bool infinite_side = false;  // body is +inf on the side (domain gap)
    bool approx = false;
};

SideLimit add_limits(const SideLimit& a, const SideLimit& b) {
    auto add_ends = [](double x, double y, double sign_inf) {
        if (std::isinf(x) || std::isinf(y)) {
            if (std::isinf(x) && std::isinf(y) && (x > 0) != (y > 0))
                return sign_inf;  // conflicting infinities, resolved by caller
            return std::isinf(x) ? x : y;
        }
        return x + y;
    };
    if (!a.dense && !b.dense) {
        if (std::isinf(a.lo) && std::isinf(b.lo) && (a.lo > 0) != (b.lo > 0))
            return SideLimit::dense_range(-kInf, kInf, true);
        double v = std::isinf(a.lo) ? a.lo : (std::isinf(b.lo) ? b.lo : a.lo + b.lo);
        SideLimit r = SideLimit::limit(v);
        r.approx = a.approx || b.approx;
        return r;
    }
    SideLimit r;
    r.dense = true;
    r.approx = a.approx || b.approx || (a.dense && b.dense);
    r.lo = add_ends(a.lo, b.lo, -kInf);
    r.hi = add_ends(a.hi, b.hi, kInf);
    if (r.lo == r.hi) return SideLimit{false, r.approx, r.lo, r.hi};
    return r;
}

SideLimit scale_limit(const SideLimit& a, double c) {
    if (c == 0.0) return SideLimit::limit(0.0);
    SideLimit r = a;
    r.lo = c * a.lo;
    r.hi = c * a.hi;
    if (c < 0) std::swap(r.lo, r.hi);
    return r;
}

SideLimit max_limits(const SideLimit& a, const SideLimit& b, bool want_max) {
    if (!want_max) {
        // min(a,b) = -max(-a,-b)
        return scale_limit(max_limits(scale_limit(a, -1), scale_limit(b, -1), true), -1);
    }
    SideLimit r;
    r.lo = std::max(a.lo, b.lo);
    r.hi = std::max(a.hi, b.hi);
    r.dense = a.dense || b.dense;
    r.approx = a.approx || b.approx || (a.dense && b.dense);
    if (!r.dense && r.lo != r.hi) r.lo = r.hi;  // max of two limits converges
    if (r.dense && r.lo == r.hi) r.dense = false;
    return r;
}

SideLimit hull_limits(const SideLimit& a, const SideLimit& b, bool approx) {
    SideLimit r;
    r.dense = true;
    r.approx = approx || a.approx || b.approx;
    r.lo = std::min(a.lo, b.lo);
    r.hi = std::max(a.hi, b.hi);
    if (r.lo == r.hi) r.dense = false;
    return r;
}

// One-sided derivative of rational_pow at base value u0 != 0.
double rpow_deriv_at(double u0, const Rational& r) {
    double mag = std::pow(std::abs(u0), r.value() - 1.0);
    double sgn = 1.0;
    if (u0 < 0.0) sgn = (r.num % 2 != 0) ? 1.0 : -1.0;
    return r.value() * mag * sgn;
}

// Power atom side behaviour at a point where the affine base vanishes.
// `slope` is the base derivative a; `side` is +1 (right) or -1 (left).
ExprSide power_at_root(double slope, const Rational& r, int side) {
    ExprSide s;
    s.value = 0.0;
    double rv = r.value();
    if (rv <= 0.0) {
        s.infinite_side = true;  // value +inf at the point itself
        return s;
    }
    double u_side = slope * side;  // sign of base just off the point
    if (u_side == 0.0) {           // constant base: body identically 0
        s.quotient = SideLimit::limit(0.0);
        s.deriv = SideLimit::limit(0.0);
        return s;
    }
    if (u_side < 0.0 && !r.odd_denominator()) {
        s.infinite_side = true;  // even root of a negative base
        return s;
    }
    // body(x0 + side*t) = rational_pow(u_side*t*side_sign...) = sgn * |slope|^rv * t^rv
    double sgn = 1.0;
    if (u_side < 0.0) sgn = (r.num % 2 != 0) ? -1.0 : 1.0;
    // slope-oriented quotient: right (b(t)-0)/t, left (0-b(-t))/t = -b(-t)/t
    double qsign = sgn * (side > 0 ? 1.0 : -1.0);
    if (rv < 1.0) {
        s.quotient = SideLimit::limit(qsign * kInf);
    } else if (rv == 1.0) {
        s.quotient = SideLimit::limit(qsign * std::abs(slope));
    } else {
        s.quotient = SideLimit::limit(0.0);
    }
    // derivative d/dx rational_pow(a x + b) = a * rv * |u|^(rv-1) * sigma(u)
    double sig = (u_side > 0.0) ? 1.0 : ((r.num % 2 != 0) ? 1.0 : -1.0);
    double dsign = (slope > 0 ? 1.0 : -1.0) * sig;
    if (rv < 1.0) {
        s.deriv = SideLimit::limit(dsign * kInf);
    } else if (rv == 1.0) {
        s.deriv = SideLimit::limit(slope * sig);
    } else {
        s.deriv = SideLimit::limit(0.0);
    }
    return s;
}

// Side analysis of a 1-D expression body at x0, side = +1 or -1.
ExprSide analyze_expr(const Expr& e, double x0, int side) {
    ExprSide s;
    const Vec x{x0};
    switch (e.op) {
        case Expr::Op::Constant:
            s.value = e.value;
            s.quotient = SideLimit::limit(0.0);
            s.deriv = SideLimit::limit(0.0);
            return s;
        case Expr::Op::Affine: {
            double a = e.coeffs.at(0);
            s.value = a * x0 + e.offset;
            s.quotient = SideLimit::limit(a);
            s.deriv = SideLimit::limit(a);
            return s;
        }
        case Expr::Op::SqNormShift: {
            double c = e.coeffs.at(0);
            s.value = (x0 - c) * (x0 - c);
            s.quotient = SideLimit::limit(2 * (x0 - c));
            s.deriv = SideLimit::limit(2 * (x0 - c));
            return s;
        }
        case Expr::Op::Power: {
            double a = e.coeffs.at(0);
            double u0 = a * x0 + e.offset;
            if (u0 != 0.0) {
                s.value = rational_pow(u0, e.exponent);
                if (!std::isfinite(s.value)) {
                    s.infinite_side = true;
                    return s;
                }
                double d = a * rpow_deriv_at(u0, e.exponent);
                s.quotient = SideLimit::limit(d);
                s.deriv = SideLimit::limit(d);
                return s;
            }
            return power_at_root(a, e.exponent, side);
        }
        case Expr::Op::Abs: {
            ExprSide c = analyze_expr(*e.args[0], x0, side);
            if (c.infinite_side) return c;
            s.approx = c.approx;
            if (c.value > kValueTieTol) {
                s.value = c.value;
                s.quotient = c.quotient;
                s.deriv = c.deriv;
            } else if (c.value < -kValueTieTol) {
                s.value = -c.value;
                s.quotient = scale_limit(c.quotient, -1.0);
                s.deriv = scale_limit(c.deriv, -1.0);
            } else {
                s.value = std::abs(c.value);
                // child vanishes: |child|(x0 + side*t) ~ |q| * t
                auto abs_range = [&](const SideLimit& q) {
                    double m, M;
                    if (q.lo <= 0.0 && q.hi >= 0.0) m = 0.0;
                    else m = std::min(std::abs(q.lo), std::abs(q.hi));
                    M = std::max(std::abs(q.lo), std::abs(q.hi));
                    SideLimit r;
                    r.dense = q.dense;
                    r.approx = q.approx;
                    r.lo = m;
                    r.hi = M;
                    if (!q.dense) { r.lo = std::abs(q.lo); r.hi = r.lo; }
                    return r;
                };
                SideLimit aq = abs_range(c.quotient);
                s.quotient = (side > 0) ? aq : scale_limit(aq, -1.0);
                // derivative: sign of the child off the point flips the range
                double csign = 0.0;
                if (!c.quotient.dense)
                    csign = (c.quotient.lo > 0) ? 1.0 : (c.quotient.lo < 0 ? -1.0 : 0.0);
                double off_sign = csign * (side > 0 ? 1.0 : -1.0);
                if (off_sign > 0)
                    s.deriv = c.deriv;
                else if (off_sign < 0)
                    s.deriv = scale_limit(c.deriv, -1.0);
                else
                    s.deriv = hull_limits(c.deriv, scale_limit(c.deriv, -1.0), true);
            }
            return s;
        }
        case Expr::Op::Square: {
            ExprSide c = analyze_expr(*e.args[0], x0, side);
            if (c.infinite_side) return c;
            s.value = c.value * c.value;
            s.approx = c.approx;
            bool child_unbounded = std::isinf(c.deriv.lo) || std::isinf(c.deriv.hi);
            if (std::abs(c.value) <= kValueTieTol && child_unbounded) {
                s.approx = true;  // 0 * inf composition, not resolvable here
                s.quotient = SideLimit::dense_range(-kInf, kInf, true);
                s.deriv = SideLimit::dense_range(-kInf, kInf, true);
                return s;
            }
            s.quotient = scale_limit(c.quotient, 2 * c.value);
            s.deriv = scale_limit(c.deriv, 2 * c.value);
            return s;
        }
        case Expr::Op::Sum: {
            bool first = true;
            for (const auto& arg : e.args) {
                ExprSide c = analyze_expr(*arg, x0, side);
                if (c.infinite_side) return c;
                if (first) {
                    s = c;
                    first = false;
                } else {
                    s.value += c.value;
                    s.quotient = add_limits(s.quotient, c.quotient);
                    s.deriv = add_limits(s.deriv, c.deriv);
                    s.approx = s.approx || c.approx;
                }
            }
            s.approx = s.approx || s.quotient.approx || s.deriv.approx;
            return s;
        }
        case Expr::Op::Scale: {
            ExprSide c = analyze_expr(*e.args[0], x0, side);
            if (c.infinite_side) return c;
            s.value = e.value * c.value;
            s.quotient = scale_limit(c.quotient, e.value);
            s.deriv = scale_limit(c.deriv, e.value);
            s.approx = c.approx;
            return s;
        }
        case Expr::Op::Max:
        case Expr::Op::Min: {
            bool want_max = e.op == Expr::Op::Max;
            std::vector<ExprSide> parts;
            double best = want_max ? -kInf : kInf;
            for (const auto& arg : e.args) {
                ExprSide c = analyze_expr(*arg, x0, side);
                if (c.infinite_side) return c;
                parts.push_back(c);
                best = want_max ? std::max(best, c.value) : std::min(best, c.value);
            }
            std::vector<const ExprSide*> active;
            for (const auto& p : parts)
                if (std::abs(p.value - best) <= kValueTieTol * (1 + std::abs(best)))
                    active.push_back(&p);
            s.value = best;
            if (active.size() == 1) {
                s.quotient = active[0]->quotient;
                s.deriv = active[0]->deriv;
                s.approx = active[0]->approx;
                return s;
            }
            // tied branches: quotient of max = max of branch quotients; keep
            // only the branch whose quotient strictly dominates, else hull
            SideLimit q = active[0]->quotient;
            for (std::size_t i = 1; i < active.size(); ++i)
                q = max_limits(q, active[i]->quotient, want_max);
            s.quotient = q;
            const ExprSide* dominant = nullptr;
            for (const auto* p : active) {
                bool dom = true;
                for (const auto* o : active) {
                    if (o == p) continue;
                    bool wins = want_max ? (p->quotient.lo > o->quotient.hi)
                                         : (p->quotient.hi < o->quotient.lo);
                    if (!wins) { dom = false; break; }
                }
                if (dom) { dominant = p; break; }
            }
            if (dominant) {
                s.deriv = dominant->deriv;
                s.approx = dominant->approx;
            } else {
                SideLimit d = active[0]->deriv;
                bool identical = true;
                for (std::size_t i = 1; i < active.size(); ++i) {
                    const SideLimit& o = active[i]->deriv;
                    if (o.lo != d.lo || o.hi != d.hi || o.dense != d.dense) identical = false;
                    d = hull_limits(d, o, false);
                }
                s.deriv = d;
                s.approx = !identical;
            }
            return s;
        }
        case Expr::Op::Sin: {
            ExprSide c = analyze_expr(*e.args[0], x0, side);
            if (c.infinite_side) return c;
            s.value = std::sin(c.value);
            double cosv = std::cos(c.value);
            if (!c.quotient.dense && std::isfinite(c.quotient.lo)) {
                s.quotient = SideLimit::limit(cosv * c.quotient.lo);
                s.deriv = SideLimit::limit(cosv * c.deriv.lo);
                s.approx = c.approx;
            } else {
                double m = std::max(std::abs(c.deriv.lo), std::abs(c.deriv.hi));
                s.quotient = SideLimit::dense_range(-m, m, true);
                s.deriv = SideLimit::dense_range(-m, m, true);
                s.approx = true;
            }
            return s;
        }
        case Expr::Op::Oscillation: {
            double a = e.coeffs.at(0);
            double u0 = a * x0 + e.offset;
            if (u0 != 0.0) {
                s.value = u0 * std::sin(1.0 / u0);
                double d = a * (std::sin(1.0 / u0) - std::cos(1.0 / u0) / u0);
                s.quotient = SideLimit::limit(d);
                s.deriv = SideLimit::limit(d);
                return s;
            }
            s.value = 0.0;
            if (a == 0.0) {
                s.quotient = SideLimit::limit(0.0);
                s.deriv = SideLimit::limit(0.0);
                return s;
            }
            // u sin(1/u) near the root: quotients recur through [-|a|, |a|],
            // derivative amplitude |cos(1/u)/u| is unbounded on both signs
            s.quotient = SideLimit::dense_range(-std::abs(a), std::abs(a));
            s.deriv = SideLimit::dense_range(-kInf, kInf);
            return s;
        }
    }
    s.approx = true;
    s.quotient = SideLimit::dense_range(-kInf, kInf, true);
    s.deriv = SideLimit::dense_range(-kInf, kInf, true);
    return s;
}

const Piece* adjoining_piece(const PiecewiseFunction& f, double x, int side) {
    for (const auto& p : f.pieces) {
        Interval1D iv = piece_interval_1d(p);
        if (iv.empty) continue;
        if (side > 0) {
            if (iv.lo <= x && iv.hi > x) return &p;
        } else {
            if (iv.hi >= x && iv.lo < x) return &p;
        }
    }
    return nullptr;
}

}  // namespace

PointAnalysis analyze_point(const PiecewiseFunction& f, double x) {
    if (f.dim != 1) throw std::invalid_argument("analyze_point: function must be 1-D");
    PointAnalysis pa;
    pa.fx = evaluate(f, x);
    if (!std::isfinite(pa.fx))
        throw std::invalid_argument("analyze_point: point outside the function domain");
    for (int side : {-1, +1}) {
        SideData& sd = (side > 0) ? pa.right : pa.left;
        const Piece* piece = adjoining_piece(f, x, side);
        if (!piece) continue;
        ExprSide es = analyze_expr(*piece->body, x, side);
        sd.exists = true;
        sd.approx = es.approx;
        pa.approx = pa.approx || es.approx;
        if (es.infinite_side) {
            sd.attentive = false;
            sd.value_limit = kInf;
            sd.quotient = SideLimit::limit(side > 0 ? kInf : -kInf);
            sd.deriv = SideLimit::limit(0.0);
            continue;
        }
        sd.value_limit = es.value;
        if (std::abs(es.value - pa.fx) > kValueTieTol * (1 + std::abs(pa.fx))) {
            sd.attentive = false;
            double jump = es.value - pa.fx;
            // value jump dominates the quotient
            double q = (jump > 0) == (side > 0) ? kInf : -kInf;
            sd.quotient = SideLimit::limit(q);
            sd.deriv = SideLimit::limit(0.0);
            continue;
        }
        sd.quotient = es.quotient;
        sd.deriv = es.deriv;
    }
    return pa;
}

RealSet1D frechet_subdiff(const PiecewiseFunction& f, double x) {
    PointAnalysis pa = analyze_point(f, x);
    double lower = -kInf, upper = kInf;
    if (pa.left.exists) lower = pa.left.quotient.limsup();
    if (pa.right.exists) upper = pa.right.quotient.liminf();
    if (lower > upper) return RealSet1D::empty();
    if (lower == kInf || upper == -kInf) return RealSet1D::empty();
    return RealSet1D::interval(lower, upper);
}

RealSet1D limiting_subdiff(const PiecewiseFunction& f, double x) {
    PointAnalysis pa = analyze_point(f, x);
    RealSet1D out = frechet_subdiff(f, x);
    for (const SideData* sd : {&pa.left, &pa.right}) {
        if (!sd->exists || !sd->attentive) continue;
        const SideLimit& d = sd->deriv;
        if (!d.dense) {
            if (std::isfinite(d.lo)) out = out.union_with(RealSet1D::point(d.lo));
        } else {
            out = out.union_with(RealSet1D::interval(d.lo, d.hi));
        }
    }
    return out;
}

RealSet1D singular_subdiff(const PiecewiseFunction& f, double x) {
    PointAnalysis pa = analyze_point(f, x);
    RealSet1D out = RealSet1D::point(0.0);
    for (const SideData* sd : {&pa.left, &pa.right}) {
        if (!sd->exists || !sd->attentive) continue;
        if (sd->deriv.limsup() == kInf) out = out.union_with(RealSet1D::ray_up(0.0));
        if (sd->deriv.liminf() == -kInf) out = out.union_with(RealSet1D::ray_down(0.0));
    }
    RealSet1D fr = frechet_subdiff(f, x);
    if (fr.unbounded_above()) out = out.union_with(RealSet1D::ray_up(0.0));
    if (fr.unbounded_below()) out = out.union_with(RealSet1D::ray_down(0.0));
    return out;
}

RealSet1D clarke(const PiecewiseFunction& f, double x) {
    RealSet1D sing = singular_subdiff(f, x);
    if (!sing.is_singleton(0.0)) throw NotLipschitzError(sing);
    return limiting_subdiff(f, x).convex_hull();
}

ProbeSchedule ProbeSchedule::defaults() {
    ProbeSchedule s;
    for (int j = 1; j <= 6; ++j) s.t_levels.push_back(std::pow(10.0, -j));
    return s;
}

double clarke_dirderiv(const PiecewiseFunction& f, double x, double d, const ProbeSchedule& sched) {
    RealSet1D sing = singular_subdiff(f, x);
    if (!sing.is_singleton(0.0)) throw NotLipschitzError(sing);
    Rng rng(mix_seed(sched.seed, 101));
    std::vector<double> q_levels;
    for (std::size_t j = 0; j < sched.t_levels.size(); ++j) {
        double tj = sched.t_levels[j];
        double radius = sched.radius(j);
        double best = -kInf;
        auto probe = [&](double y, double t) {
            double fy = evaluate(f, y);
            double fyt = evaluate(f, y + t * d);
            if (!std::isfinite(fy) || !std::isfinite(fyt)) return;
            best = std::max(best, (fyt - fy) / t);
        };
        probe(x, tj);
        probe(x - tj * d, tj);
        probe(x - 2 * tj * d, tj);
        probe(x + tj * d, tj);
        // radius-edge probes pin the per-level maximum for monotone slopes,
        // which keeps the level extrapolation stable
        probe(x + radius * d, tj);
        probe(x - radius * d, tj);
        probe(x + 0.5 * radius * d, tj);
        probe(x - 0.5 * radius * d, tj);
        for (int s = 0; s < sched.samples_per_level; ++s) {
            double y = x + rng.sign() * rng.log_uniform(1e-6, 1.0) * radius;
            double t = rng.log_uniform(1e-3, 1.0) * tj;
            probe(y, t);
        }
        q_levels.push_back(best);
    }
    std::size_t J = q_levels.size() - 1;
    double q1 = q_levels[J - 1], q2 = q_levels[J];
    if (!std::isfinite(q1) || !std::isfinite(q2))
        throw std::runtime_error("clarke_dirderiv: quotient blow-up detected");
    double spread = std::abs(q2 - q1);
    if (spread > 10.0 * (1.0 + std::abs(q2)))
        throw std::runtime_error("clarke_dirderiv: quotient blow-up detected");
    double r = sched.radius(J) / sched.radius(J - 1);
    double est = (q2 - r * q1) / (1.0 - r);
    double lo = std::min(q1, q2) - spread, hi = std::max(q1, q2) + spread;
    return std::min(std::max(est, lo), hi);
}

SumRuleResult sum_rule(const std::vector<PiecewiseFunction>& fs, double x) {
    if (fs.empty()) throw std::invalid_argument("sum_rule: empty function list");
    SumRuleResult r;
    std::vector<RealSet1D> singular;
    for (const auto& f : fs) singular.push_back(singular_subdiff(f, x));
    r.qualified = true;
    for (std::size_t i = 0; i < singular.size() && r.qualified; ++i)
        for (std::size_t j = 0; j < singular.size(); ++j) {
            if (i == j) continue;
            if (singular[i].sup() > 0.0 && singular[j].inf() < 0.0) {
                r.qualified = false;
                break;
            }
        }
    r.sum = limiting_subdiff(fs[0], x);
    for (std::size_t i = 1; i < fs.size(); ++i)
        r.sum = r.sum.minkowski_sum(limiting_subdiff(fs[i], x));
    return r;
}

namespace {
double nearest_point(const RealSet1D& s, double v) {
    double best = kInf, arg = v;
    for (const auto& piece : s.convex_pieces()) {
        double p = std::min(std::max(v, piece.lo), piece.hi);
        if (std::isinf(p)) p = std::isinf(piece.lo) ? piece.hi : piece.lo;
        double d = std::abs(p - v);
        if (d < best) { best = d; arg = p; }
    }
    return arg;
}
}  // namespace

bool robustness_check(const PiecewiseFunction& f, double x, int trials, std::uint64_t seed) {
    RealSet1D at_x = limiting_subdiff(f, x);
    double fx = evaluate(f, x);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
        double side = rng.sign();
        double r0 = rng.log_uniform(1e-3, 1e-1);
        bool have_prev = false;
        double prev = 0.0, last = 0.0, last_step = kInf;
        int depth = 0;
        for (int j = 0; j <= 11; ++j) {
            double xk = x + side * r0 * std::pow(10.0, -j);
            double fxk = evaluate(f, xk);
            if (!std::isfinite(fxk)) continue;
            if (std::abs(fxk - fx) > 1e-2 && j < 2) continue;  // stay value-attentive
            RealSet1D sub = limiting_subdiff(f, xk);
            if (sub.is_empty()) continue;
            double w = have_prev ? nearest_point(sub, prev) : nearest_point(sub, 0.0);
            if (have_prev) last_step = std::abs(w - prev);
            prev = w;
            last = w;
            have_prev = true;
            ++depth;
        }
        if (!have_prev || depth < 4) continue;                    // no usable sequence
        if (!(last_step <= 1e-6 * (1.0 + std::abs(last)))) continue;  // not convergent
        if (at_x.distance_to(last) > 1e-9) return false;
    }
    return true;
}

RealSet1D numeric_frechet_probe(const PiecewiseFunction& f, double x, const ProbeSchedule& sched) {
    double fx = evaluate(f, x);
    if (!std::isfinite(fx)) throw std::invalid_argument("numeric_frechet_probe: point outside domain");
    std::size_t K = sched.t_levels.size() - 1;
    double radius = sched.radius(K);
    std::vector<double> probes;
    for (int w = 0; w <= 6; ++w) {
        double h = radius * std::pow(10.0, -w);
        probes.push_back(x + h);
        probes.push_back(x - h);
    }
    Rng rng(mix_seed(sched.seed, 7));
    for (int s = 0; s < sched.samples_per_level; ++s)
        probes.push_back(x + rng.sign() * rng.log_uniform(1e-7, 1.0) * radius);

    const double tol = 1e-7;
    RealSet1D out;
    double run_start = kInf;
    double prev = kInf;
    bool in_run = false;
    const long n_cand =
        std::lround((sched.candidate_hi - sched.candidate_lo) / sched.candidate_step);
    for (long k = 0; k <= n_cand; ++k) {
        double v = sched.candidate_lo + static_cast<double>(k) * sched.candidate_step;
        bool pass = true;
        for (double y : probes) {
            double fy = evaluate(f, y);
            if (!std::isfinite(fy)) continue;  // +inf values satisfy the liminf inequality
            double q = (fy - fx - v * (y - x)) / std::abs(y - x);
            if (q < -tol) { pass = false; break; }
        }
        if (pass) {
            if (!in_run) { run_start = v; in_run = true; }
            prev = v;
        } else if (in_run) {
            out = out.union_with(run_start == prev ? RealSet1D::point(prev)
                                                   : RealSet1D::interval(run_start, prev));
            in_run = false;
        }
    }
    if (in_run)
        out = out.union_with(run_start == prev ? RealSet1D::point(prev)
                                               : RealSet1D::interval(run_start, prev));
    return out;
}

SubdiffReport subdiff_report(const PiecewiseFunction& f, double x) {
    SubdiffReport rep;
    rep.function_name = f.name;
    rep.point = x;
    PointAnalysis pa = analyze_point(f, x);
    rep.left = pa.left;
    rep.right = pa.right;
    rep.approx = pa.approx;
    rep.frechet = frechet_subdiff(f, x);
    rep.limiting = limiting_subdiff(f, x);
    rep.singular = singular_subdiff(f, x);
    rep.lipschitz = rep.singular.is_singleton(0.0);
    if (rep.lipschitz) rep.clarke = rep.limiting.convex_hull();
    return rep;
}

std::optional<std::vector<PiecewiseFunction>> separate_coordinates(const PiecewiseFunction& f) {
    if (f.dim == 1) return std::vector<PiecewiseFunction>{f};
    if (f.pieces.size() != 1 || !f.pieces[0].guard.empty()) return std::nullopt;

    // flatten sums/scales into (coefficient, term) pairs
    struct Term {
        double coeff;
        const Expr* e;
    };
    std::vector<Term> terms;
    std::vector<std::pair<double, const Expr*>> stack{{1.0, f.pieces[0].body.get()}};
    while (!stack.empty()) {
        auto [c, e] = stack.back();
        stack.pop_back();
        if (e->op == Expr::Op::Sum) {
            for (const auto& a : e->args) stack.push_back({c, a.get()});
        } else if (e->op == Expr::Op::Scale) {
            stack.push_back({c * e->value, e->args[0].get()});
        } else {
            terms.push_back({c, e});
        }
    }

    auto single_coord = [](const Expr& e, int& coord) -> bool {
        const Vec* a = nullptr;
        switch (e.op) {
            case Expr::Op::Constant:
                coord = -1;
                return true;
            case Expr::Op::Affine:
            case Expr::Op::Power:
            case Expr::Op::Oscillation:
                a = &e.coeffs;
                break;
            default:
                return false;
        }
        coord = -1;
        for (std::size_t i = 0; i < a->size(); ++i) {
            if ((*a)[i] != 0.0) {
                if (coord >= 0) return false;
                coord = static_cast<int>(i);
            }
        }
        return true;
    };

    std::vector<std::vector<ExprPtr>> per_coord(f.dim);
    for (const auto& t : terms) {
        if (t.e->op == Expr::Op::SqNormShift) {
            // ||x - c||^2 splits into per-coordinate squares
            for (int d = 0; d < f.dim; ++d)
                per_coord[d].push_back(expr::scale(
                    t.coeff, expr::power(Vec{1.0}, -t.e->coeffs.at(d), Rational(2, 1))));
            continue;
        }
        int coord = -1;
        if (!single_coord(*t.e, coord)) return std::nullopt;
        if (coord < 0) coord = 0;  // constants attach to the first coordinate
        // rebuild the atom over the single surviving variable
        Expr one_d = *t.e;
        if (!one_d.coeffs.empty() && t.e->op != Expr::Op::Constant) {
            double a = 0.0;
            for (double c : t.e->coeffs) a += c;  // only one nonzero entry
            one_d.coeffs = Vec{a};
        }
        ExprPtr atom = std::make_shared<const Expr>(std::move(one_d));
        per_coord[coord].push_back(t.coeff == 1.0 ? atom : expr::scale(t.coeff, atom));
    }
    std::vector<PiecewiseFunction> out;
    for (int d = 0; d < f.dim; ++d) {
        ExprPtr body = per_coord[d].empty() ? expr::constant(0.0)
                                            : (per_coord[d].size() == 1 ? per_coord[d][0]
                                                                        : expr::sum(per_coord[d]));
        out.push_back(fnlib::from_expr(body, 1, f.name + "[" + std::to_string(d) + "]"));
    }
    return out;
}

}  // namespace moprox
