#include "moprox/realset.hpp"

#include <algorithm>
#include <sstream>

namespace moprox {

RealSet1D RealSet1D::point(double v) {
    RealSet1D s;
    s.points_.push_back(v);
    return s;
}

RealSet1D RealSet1D::interval(double lo, double hi) {
    RealSet1D s;
    if (lo > hi) return s;
    if (lo == hi) {
        s.points_.push_back(lo);
        return s;
    }
    s.intervals_.push_back({lo, hi});
    return s;
}

bool RealSet1D::is_bounded() const {
    for (const auto& iv : intervals_)
        if (std::isinf(iv.lo) || std::isinf(iv.hi)) return false;
    return true;
}

bool RealSet1D::is_singleton(double v, double tol) const {
    return intervals_.empty() && points_.size() == 1 && std::abs(points_[0] - v) <= tol;
}

bool RealSet1D::unbounded_above() const {
    return !intervals_.empty() && std::isinf(intervals_.back().hi);
}

bool RealSet1D::unbounded_below() const {
    return !intervals_.empty() && std::isinf(intervals_.front().lo);
}

bool RealSet1D::contains(double v, double tol) const {
    for (const auto& iv : intervals_)
        if (v >= iv.lo - tol && v <= iv.hi + tol) return true;
    for (double p : points_)
        if (std::abs(v - p) <= tol) return true;
    return false;
}

double RealSet1D::inf() const {
    double m = kInf;
    if (!intervals_.empty()) m = intervals_.front().lo;
    if (!points_.empty()) m = std::min(m, points_.front());
    return m;
}

double RealSet1D::sup() const {
    double m = -kInf;
    if (!intervals_.empty()) m = intervals_.back().hi;
    if (!points_.empty()) m = std::max(m, points_.back());
    return m;
}

void RealSet1D::normalize() {
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : intervals_) {
        if (iv.lo > iv.hi) continue;
        if (iv.lo == iv.hi) {
            points_.push_back(iv.lo);
            continue;
        }
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    // absorb points touching or inside intervals, then re-merge: a point at
    // an interval endpoint extends nothing, a point bridging two intervals
    // cannot occur for closed sets
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    std::vector<double> keep;
    for (double p : points_) {
        bool inside = false;
        for (const auto& iv : merged)
            if (p >= iv.lo && p <= iv.hi) { inside = true; break; }
        if (!inside) keep.push_back(p);
    }
    intervals_ = std::move(merged);
    points_ = std::move(keep);
}

RealSet1D RealSet1D::union_with(const RealSet1D& other) const {
    RealSet1D r;
    r.intervals_ = intervals_;
    r.intervals_.insert(r.intervals_.end(), other.intervals_.begin(), other.intervals_.end());
    r.points_ = points_;
    r.points_.insert(r.points_.end(), other.points_.begin(), other.points_.end());
    r.normalize();
    return r;
}

RealSet1D RealSet1D::minkowski_sum(const RealSet1D& other) const {
    if (is_empty() || other.is_empty()) return empty();
    RealSet1D r;
    auto add = [&](double alo, double ahi, double blo, double bhi) {
        // closed-interval sum with inf-aware endpoint arithmetic
        double lo = (std::isinf(alo) || std::isinf(blo)) ? -kInf : alo + blo;
        double hi = (std::isinf(ahi) || std::isinf(bhi)) ? kInf : ahi + bhi;
        if (lo == hi)
            r.points_.push_back(lo);
        else
            r.intervals_.push_back({lo, hi});
    };
    auto pieces_a = convex_pieces();
    auto pieces_b = other.convex_pieces();
    for (const auto& a : pieces_a)
        for (const auto& b : pieces_b) add(a.lo, a.hi, b.lo, b.hi);
    r.normalize();
    return r;
}

RealSet1D RealSet1D::scaled(double c) const {
    if (is_empty()) return empty();
    if (c == 0.0) return point(0.0);
    RealSet1D r;
    for (const auto& iv : intervals_) {
        double a = c * iv.lo, b = c * iv.hi;
        if (a > b) std::swap(a, b);
        r.intervals_.push_back({a, b});
    }
    for (double p : points_) r.points_.push_back(c * p);
    r.normalize();
    return r;
}

RealSet1D RealSet1D::convex_hull() const {
    if (is_empty()) return empty();
    return interval(inf(), sup());
}

double RealSet1D::distance_to(double v) const {
    double d = kInf;
    for (const auto& iv : intervals_) {
        if (v < iv.lo)
            d = std::min(d, iv.lo - v);
        else if (v > iv.hi)
            d = std::min(d, v - iv.hi);
        else
            return 0.0;
    }
    for (double p : points_) d = std::min(d, std::abs(v - p));
    return d;
}

std::vector<RealSet1D::Interval> RealSet1D::convex_pieces() const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() || j < points_.size()) {
        if (j >= points_.size() || (i < intervals_.size() && intervals_[i].lo < points_[j])) {
            out.push_back(intervals_[i]);
            ++i;
        } else {
            out.push_back({points_[j], points_[j]});
            ++j;
        }
    }
    return out;
}

double RealSet1D::hausdorff(const RealSet1D& a, const RealSet1D& b, double cap) {
    if (a.is_empty() && b.is_empty()) return 0.0;
    if (a.is_empty() || b.is_empty()) return kInf;
    if (a.unbounded_above() != b.unbounded_above()) return kInf;
    if (a.unbounded_below() != b.unbounded_below()) return kInf;
    auto directed = [&](const RealSet1D& from, const RealSet1D& to) {
        double worst = 0.0;
        auto probe = [&](double v) {
            if (std::isinf(v)) return;
            if (std::abs(v) > cap) return;
            worst = std::max(worst, to.distance_to(v));
        };
        for (const auto& iv : from.intervals_) {
            probe(iv.lo);
            probe(iv.hi);
            // interior of `from` farthest from `to` at midpoints of `to` gaps
            auto gaps = to.convex_pieces();
            for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
                double mid = 0.5 * (gaps[k].hi + gaps[k + 1].lo);
                if (mid >= iv.lo && mid <= iv.hi) probe(mid);
            }
            if (std::isinf(iv.lo)) probe(-cap);
            if (std::isinf(iv.hi)) probe(cap);
        }
        for (double p : from.points_) probe(p);
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

bool RealSet1D::subset_of(const RealSet1D& other, double tol) const {
    if (is_empty()) return true;
    if (other.is_empty()) return false;
    if (unbounded_above() && !other.unbounded_above()) return false;
    if (unbounded_below() && !other.unbounded_below()) return false;
    for (const auto& iv : intervals_) {
        // every sub-piece of iv must lie in a single component of other
        bool ok = false;
        for (const auto& piece : other.convex_pieces()) {
            double lo = std::isinf(iv.lo) ? piece.lo : iv.lo;
            double hi = std::isinf(iv.hi) ? piece.hi : iv.hi;
            if (lo >= piece.lo - tol && hi <= piece.hi + tol) { ok = true; break; }
        }
        if (!ok) return false;
    }
    for (double p : points_)
        if (other.distance_to(p) > tol) return false;
    return true;
}

bool RealSet1D::same_as(const RealSet1D& other, double tol) const {
    if (tol == 0.0) {
        if (intervals_.size() != other.intervals_.size()) return false;
        if (points_.size() != other.points_.size()) return false;
        for (std::size_t i = 0; i < intervals_.size(); ++i)
            if (intervals_[i].lo != other.intervals_[i].lo || intervals_[i].hi != other.intervals_[i].hi)
                return false;
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i] != other.points_[i]) return false;
        return true;
    }
    double h = hausdorff(*this, other);
    return h <= tol;
}

std::string RealSet1D::to_string() const {
    if (is_empty()) return "{}";
    std::ostringstream os;
    bool first = true;
    auto fmt = [](double v) -> std::string {
        if (v == kInf) return "inf";
        if (v == -kInf) return "-inf";
        std::ostringstream t;
        t << v;
        return t.str();
    };
    for (const auto& piece : convex_pieces()) {
        if (!first) os << " u ";
        first = false;
        if (piece.lo == piece.hi) {
            os << "{" << fmt(piece.lo) << "}";
        } else {
            os << (std::isinf(piece.lo) ? "(" : "[") << fmt(piece.lo) << ", " << fmt(piece.hi)
               << (std::isinf(piece.hi) ? ")" : "]");
        }
    }
    return os.str();
}

}  // namespace moprox
