#ifndef MOPROX_CONSTRAINT_HPP
#define MOPROX_CONSTRAINT_HPP

#include <vector>

#include "moprox/core.hpp"
#include "moprox/realset.hpp"

namespace moprox {

/// Closed constraint set: the whole space, a coordinate box, or a polyhedron
/// given by affine inequalities with a certifying feasible point.
class ConstraintSet {
public:
    enum class Kind { WholeSpace, Box, Polyhedron };

    struct Row {
        Vec a;
        double b;
    };

    static ConstraintSet whole_space(int dim);
    static ConstraintSet box(Vec lo, Vec hi);  // entries may be +-inf
    static ConstraintSet polyhedron(int dim, std::vector<Row> rows, Vec feasible_point);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Vec& lower() const { return lo_; }
    const Vec& upper() const { return hi_; }
    const std::vector<Row>& rows() const { return rows_; }

    bool contains(const Vec& x, double tol = 0.0) const;

private:
    Kind kind_ = Kind::WholeSpace;
    int dim_ = 1;
    Vec lo_, hi_;
    std::vector<Row> rows_;
};

struct Projection {
    double distance = 0.0;
    Vec point;
};

/// Exact Euclidean distance and a nearest point. Boxes clamp; polyhedra go
/// through active-set enumeration over <= 8 constraints.
Projection distance_and_projection(const ConstraintSet& omega, const Vec& x);

inline double distance_to_set(const ConstraintSet& omega, const Vec& x) {
    return distance_and_projection(omega, x).distance;
}

/// Finite generator list of the normal cone at a member point (outward
/// normals of active constraints; {0} represented by an empty list).
std::vector<Vec> normal_cone(const ConstraintSet& omega, const Vec& xbar, double tol = 1e-9);

/// Limiting subdifferential of the distance function at a member point:
/// the normal cone truncated to the unit ball. 1-D sets return the interval.
struct DistSubdiff {
    std::vector<Vec> generators;  // cone generators, unit cap applies
    RealSet1D set_1d;             // populated when dim == 1
};
DistSubdiff dist_subdiff(const ConstraintSet& omega, const Vec& xbar);

}  // namespace moprox

#endif
