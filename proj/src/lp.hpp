#ifndef MOPROX_LP_HPP
#define MOPROX_LP_HPP

#include <vector>

#include "moprox/core.hpp"

namespace moprox::detail {

/// Dense two-phase simplex for the tiny certificate-feasibility programs
/// (tens of variables). Bland's rule, so termination is guaranteed.
struct LinearProgram {
    enum class Rel { LE, EQ, GE };
    struct Row {
        Vec a;
        Rel rel;
        double b;
    };
    int nvars = 0;
    Vec c;                  // minimize c.x, x >= 0
    std::vector<Row> rows;

    void add_row(Vec a, Rel rel, double b) { rows.push_back({std::move(a), rel, b}); }
};

struct LPResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    double objective = 0.0;
    Vec x;
};

LPResult solve_lp(const LinearProgram& lp);

}  // namespace moprox::detail

#endif
