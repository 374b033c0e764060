#ifndef MOPROX_REALSET_HPP
#define MOPROX_REALSET_HPP

#include <string>
#include <vector>

#include "moprox/core.hpp"

namespace moprox {

/// Closed subset of the extended real line stored as a normalized finite
/// union of closed intervals (endpoints may be +-inf) and isolated points.
/// Invariants after normalization: intervals are sorted, pairwise disjoint
/// and non-adjacent; isolated points are sorted and lie strictly outside
/// every interval.
class RealSet1D {
public:
    struct Interval {
        double lo;
        double hi;
    };

    RealSet1D() = default;

    static RealSet1D empty() { return RealSet1D(); }
    static RealSet1D point(double v);
    static RealSet1D interval(double lo, double hi);
    static RealSet1D ray_down(double hi) { return interval(-kInf, hi); }  // (-inf, hi]
    static RealSet1D ray_up(double lo) { return interval(lo, kInf); }     // [lo, inf)
    static RealSet1D whole_line() { return interval(-kInf, kInf); }

    bool is_empty() const { return intervals_.empty() && points_.empty(); }
    bool is_bounded() const;
    bool is_singleton(double v, double tol = 0.0) const;
    bool unbounded_above() const;
    bool unbounded_below() const;

    bool contains(double v, double tol = 0.0) const;

    /// Greatest lower / least upper bound; +-inf on empty per convention
    /// inf(empty) = +inf, sup(empty) = -inf.
    double inf() const;
    double sup() const;

    RealSet1D union_with(const RealSet1D& other) const;
    RealSet1D minkowski_sum(const RealSet1D& other) const;
    RealSet1D scaled(double c) const;
    RealSet1D convex_hull() const;

    /// Distance from a real point to the set (+inf for empty set).
    double distance_to(double v) const;

    /// Hausdorff distance restricted to [-cap, cap]; +inf when the ray
    /// structure (unboundedness pattern) differs.
    static double hausdorff(const RealSet1D& a, const RealSet1D& b, double cap = 1e6);

    /// Every component of this set lies within tol of the other set.
    bool subset_of(const RealSet1D& other, double tol = 0.0) const;
    bool same_as(const RealSet1D& other, double tol = 0.0) const;

    /// Maximal convex pieces (intervals and isolated points), in order.
    std::vector<Interval> convex_pieces() const;

    const std::vector<Interval>& intervals() const { return intervals_; }
    const std::vector<double>& isolated_points() const { return points_; }

    std::string to_string() const;

private:
    std::vector<Interval> intervals_;
    std::vector<double> points_;

    void normalize();
};

}  // namespace moprox

#endif
