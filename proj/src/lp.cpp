#include "lp.hpp"

#include <algorithm>
#include <cmath>

namespace moprox::detail {

namespace {

constexpr double kPivTol = 1e-11;

struct Tableau {
    // rows x (cols + 1), last column is the rhs
    int m = 0, cols = 0;
    std::vector<Vec> a;
    std::vector<int> basis;
    Vec cost;      // current objective coefficients (phase-dependent)
    Vec reduced;   // objective row
    double obj = 0.0;

    void price() {
        reduced = cost;
        obj = 0.0;
        for (int r = 0; r < m; ++r) {
            double cb = cost[basis[r]];
            if (cb == 0.0) continue;
            for (int j = 0; j < cols; ++j) reduced[j] -= cb * a[r][j];
            obj -= cb * a[r][cols];
        }
    }

    void pivot(int r, int j) {
        double p = a[r][j];
        for (int c = 0; c <= cols; ++c) a[r][c] /= p;
        for (int rr = 0; rr < m; ++rr) {
            if (rr == r) continue;
            double f = a[rr][j];
            if (f == 0.0) continue;
            for (int c = 0; c <= cols; ++c) a[rr][c] -= f * a[r][c];
        }
        double f = reduced[j];
        if (f != 0.0) {
            for (int c = 0; c < cols; ++c) reduced[c] -= f * a[r][c];
            obj -= f * a[r][cols];
        }
        basis[r] = j;
    }

    // Bland's rule: smallest improving column, smallest ratio then smallest
    // basis index on ties
    bool iterate() {
        int enter = -1;
        for (int j = 0; j < cols; ++j) {
            if (reduced[j] < -kPivTol) { enter = j; break; }
        }
        if (enter < 0) return false;  // optimal
        int leave = -1;
        double best = kInf;
        for (int r = 0; r < m; ++r) {
            if (a[r][enter] > kPivTol) {
                double ratio = a[r][cols] / a[r][enter];
                if (ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && (leave < 0 || basis[r] < basis[leave]))) {
                    best = ratio;
                    leave = r;
                }
            }
        }
        if (leave < 0) throw LPResult::Status::Unbounded;
        pivot(leave, enter);
        return true;
    }
};

}  // namespace

LPResult solve_lp(const LinearProgram& lp) {
    const int n = lp.nvars;
    const int m = static_cast<int>(lp.rows.size());

    // count slacks and artificials
    int nslack = 0;
    for (const auto& row : lp.rows)
        if (row.rel != LinearProgram::Rel::EQ) ++nslack;

    Tableau T;
    T.m = m;
    T.cols = n + nslack + m;  // at most one artificial per row
    T.a.assign(m, Vec(T.cols + 1, 0.0));
    T.basis.assign(m, -1);

    int slack_at = n;
    int art_at = n + nslack;
    std::vector<int> artificials;
    for (int r = 0; r < m; ++r) {
        const auto& row = lp.rows[r];
        double b = row.b;
        double sgn = b < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n && j < static_cast<int>(row.a.size()); ++j)
            T.a[r][j] = sgn * row.a[j];
        T.a[r][T.cols] = sgn * b;
        auto rel = row.rel;
        if (sgn < 0) {
            if (rel == LinearProgram::Rel::LE) rel = LinearProgram::Rel::GE;
            else if (rel == LinearProgram::Rel::GE) rel = LinearProgram::Rel::LE;
        }
        if (rel == LinearProgram::Rel::LE) {
            T.a[r][slack_at] = 1.0;
            T.basis[r] = slack_at;
            ++slack_at;
        } else {
            if (rel == LinearProgram::Rel::GE) {
                T.a[r][slack_at] = -1.0;
                ++slack_at;
            }
            T.a[r][art_at] = 1.0;
            T.basis[r] = art_at;
            artificials.push_back(art_at);
            ++art_at;
        }
    }
    T.cols = art_at;
    for (auto& row : T.a) row.resize(T.cols + 1, 0.0);
    // rhs lives at index T.cols: migrate it (rows were built with old width)
    for (int r = 0; r < m; ++r) {
        double rhs = T.a[r][n + nslack + m];
        T.a[r][n + nslack + m] = 0.0;
        T.a[r][T.cols] = rhs;
    }

    LPResult res;
    try {
        if (!artificials.empty()) {
            T.cost.assign(T.cols, 0.0);
            for (int j : artificials) T.cost[j] = 1.0;
            T.price();
            while (T.iterate()) {}
            if (T.obj > 1e-8) {
                res.status = LPResult::Status::Infeasible;
                return res;
            }
            // drive remaining artificials out of the basis
            for (int r = 0; r < m; ++r) {
                if (T.basis[r] < artificials.front()) continue;
                bool is_art = std::find(artificials.begin(), artificials.end(), T.basis[r]) !=
                              artificials.end();
                if (!is_art) continue;
                int enter = -1;
                for (int j = 0; j < artificials.front(); ++j)
                    if (std::abs(T.a[r][j]) > kPivTol) { enter = j; break; }
                if (enter >= 0) T.pivot(r, enter);
                // a fully zero row is redundant; its artificial stays basic at 0
            }
        }
        T.cost.assign(T.cols, 0.0);
        for (int j = 0; j < n; ++j) T.cost[j] = lp.c[j];
        for (int j : artificials) T.cost[j] = 1e9;  // keep degenerate artificials at zero
        T.price();
        while (T.iterate()) {}
    } catch (LPResult::Status s) {
        res.status = s;
        return res;
    }

    res.status = LPResult::Status::Optimal;
    res.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (T.basis[r] < n) res.x[T.basis[r]] = T.a[r][T.cols];
    res.objective = 0.0;
    for (int j = 0; j < n; ++j) res.objective += lp.c[j] * res.x[j];
    return res;
}

}  // namespace moprox::detail
