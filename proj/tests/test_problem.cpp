#include <doctest.h>

#include <cmath>

#include "moprox/problem.hpp"
#include "moprox/rng.hpp"

using namespace moprox;

namespace {

MOProblem biobj_pair() {
    MOProblem P;
    P.F.components = {fnlib::parabola_shift(-1.0), fnlib::cuberoot_or_parabola()};
    P.omega = ConstraintSet::whole_space(1);
    P.name = "parabola-cuberoot";
    return P;
}

RegularizedProblem collapsed_rp() {
    double r2 = 1.0 / std::sqrt(2.0);
    return RegularizedProblem::make(biobj_pair(), Vec{-1.0}, 1.0, Vec{r2, r2});
}

}  // namespace

TEST_CASE("distance and projection") {
    auto halfline = ConstraintSet::box(Vec{0.0}, Vec{kInf});
    auto p = distance_and_projection(halfline, Vec{-2.0});
    CHECK(p.distance == 2.0);
    CHECK(p.point[0] == 0.0);

    auto seg = ConstraintSet::box(Vec{1.0}, Vec{2.0});
    auto q = distance_and_projection(seg, Vec{1.5});
    CHECK(q.distance == 0.0);
    CHECK(q.point[0] == 1.5);

    auto half = ConstraintSet::polyhedron(2, {{Vec{1.0, 1.0}, 0.0}}, Vec{-1.0, -1.0});
    auto r = distance_and_projection(half, Vec{1.0, 1.0});
    CHECK(r.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.point[0] == doctest::Approx(0.0));
    CHECK(r.point[1] == doctest::Approx(0.0));
}

TEST_CASE("normal cones") {
    auto halfline = ConstraintSet::box(Vec{0.0}, Vec{kInf});
    auto g = normal_cone(halfline, Vec{0.0});
    REQUIRE(g.size() == 1);
    CHECK(g[0][0] == -1.0);

    CHECK(normal_cone(ConstraintSet::box(Vec{1.0}, Vec{2.0}), Vec{1.5}).empty());

    auto quadrant = ConstraintSet::box(Vec{0.0, 0.0}, Vec{kInf, kInf});
    auto g2 = normal_cone(quadrant, Vec{0.0, 0.0});
    REQUIRE(g2.size() == 2);
    CHECK(g2[0][0] == -1.0);
    CHECK(g2[1][1] == -1.0);

    CHECK_THROWS_AS(normal_cone(halfline, Vec{-1.0}), std::invalid_argument);
}

TEST_CASE("distance-function subdifferential") {
    auto halfline = ConstraintSet::box(Vec{0.0}, Vec{kInf});
    CHECK(dist_subdiff(halfline, Vec{0.0}).set_1d.same_as(RealSet1D::interval(-1, 0)));
    auto seg = ConstraintSet::box(Vec{1.0}, Vec{2.0});
    CHECK(dist_subdiff(seg, Vec{1.5}).set_1d.is_singleton(0.0));
    CHECK(dist_subdiff(seg, Vec{2.0}).set_1d.same_as(RealSet1D::interval(0, 1)));
}

TEST_CASE("distance function is 1-Lipschitz on sampled pairs") {
    Rng rng(0xd157);
    std::vector<ConstraintSet> sets = {
        ConstraintSet::box(Vec{1.0}, Vec{2.0}),
        ConstraintSet::box(Vec{0.0}, Vec{kInf}),
        ConstraintSet::polyhedron(2, {{Vec{1.0, 1.0}, 0.0}, {Vec{-1.0, 0.0}, 3.0}},
                                  Vec{-1.0, -1.0}),
    };
    for (const auto& s : sets) {
        for (int k = 0; k < 300; ++k) {
            Vec a(s.dim()), b(s.dim());
            for (int d = 0; d < s.dim(); ++d) {
                a[d] = rng.uniform(-4, 4);
                b[d] = rng.uniform(-4, 4);
            }
            double da = distance_to_set(s, a), db = distance_to_set(s, b);
            CHECK(std::abs(da - db) <= norm2(a - b) + 1e-12);
        }
    }
}

TEST_CASE("grid decode and cap") {
    Grid g = Grid::uniform_1d(-1.0, 1.0, 0.5);
    CHECK(g.size() == 5);
    CHECK(g.point(0)[0] == -1.0);
    CHECK(g.point(4)[0] == 1.0);
    Grid big;
    big.lo = {-1, -1, -1};
    big.hi = {1, 1, 1};
    big.step = 1e-4;
    CHECK_THROWS_AS(big.size(), std::invalid_argument);
    Grid bad = Grid::uniform_1d(0, 1, -1.0);
    CHECK_THROWS_AS(bad.size(), std::invalid_argument);
}

TEST_CASE("pareto oracle reproduces the trade-off interval") {
    auto res = pareto_bruteforce(biobj_pair(), Grid::uniform_1d(-3.0, 2.0, 1e-3));
    REQUIRE(!res.points.empty());
    CHECK(std::abs(res.points.front()[0] - (-1.0)) <= 1e-3 + 1e-9);
    CHECK(std::abs(res.points.back()[0] - (-0.5)) <= 1e-3 + 1e-9);
    // the returned set is an interval of consecutive lattice points
    for (std::size_t i = 1; i < res.indices.size(); ++i)
        CHECK(res.indices[i] == res.indices[i - 1] + 1);
}

TEST_CASE("pareto oracle on the classic biobjective") {
    MOProblem P;
    P.F.components = {fnlib::square_x(), fnlib::parabola_shift(1.0)};
    P.omega = ConstraintSet::whole_space(1);
    auto res = pareto_bruteforce(P, Grid::uniform_1d(-2.0, 3.0, 1e-3));
    CHECK(std::abs(res.points.front()[0] - 0.0) <= 1e-3 + 1e-9);
    CHECK(std::abs(res.points.back()[0] - 1.0) <= 1e-3 + 1e-9);
}

TEST_CASE("total trade-off keeps every feasible point") {
    MOProblem P;
    P.F.components = {fnlib::from_expr(expr::coord(0, 1), 1),
                      fnlib::from_expr(expr::affine(Vec{-1.0}, 0.0), 1)};
    P.omega = ConstraintSet::whole_space(1);
    Grid g = Grid::uniform_1d(-1.0, 1.0, 0.1);
    auto res = pareto_bruteforce(P, g);
    CHECK(res.points.size() == g.size());
}

TEST_CASE("oracle output is dominance-free and complete") {
    auto P = biobj_pair();
    Grid g = Grid::uniform_1d(-3.0, 2.0, 1e-2);
    auto res = pareto_bruteforce(P, g);
    // dominance-free
    for (std::size_t i = 0; i < res.values.size(); ++i)
        for (std::size_t j = 0; j < res.values.size(); ++j) {
            if (i == j) continue;
            CHECK(!kernels::dominates(res.values[j].data(), res.values[i].data(), 2, 1e-15));
        }
    // completeness: every excluded lattice point is dominated by a returned one
    std::vector<char> kept(g.size(), 0);
    for (auto idx : res.indices) kept[idx] = 1;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (kept[i]) continue;
        Vec v = evaluate(P.F, g.point(i));
        bool dominated = false;
        for (const auto& w : res.values)
            if (kernels::dominates(w.data(), v.data(), 2, 1e-15)) { dominated = true; break; }
        CHECK(dominated);
    }
}

TEST_CASE("regularized problem construction and level set") {
    auto RP = collapsed_rp();
    CHECK(RP.in_level_set(Vec{-1.0}));
    CHECK(!RP.in_level_set(Vec{0.0}));   // f1 rises above the centre value
    CHECK(!RP.in_level_set(Vec{-1.5}));  // f2 rises above the centre value
    CHECK_THROWS_AS(RegularizedProblem::make(
                        MOProblem{VectorFunction{{fnlib::abs_x()}},
                                  ConstraintSet::box(Vec{1.0}, Vec{2.0}), ""},
                        Vec{0.0}, 1.0, Vec{1.0}),
                    std::invalid_argument);  // centre outside omega
}

TEST_CASE("level-set pareto collapses when the centre is the strict minimum") {
    auto res = pareto_bruteforce(collapsed_rp(), Grid::uniform_1d(-3.0, 2.0, 1e-3));
    REQUIRE(res.points.size() == 1);
    CHECK(res.points[0][0] == doctest::Approx(-1.0));
}

TEST_CASE("max-scalarization values") {
    MOProblem P;
    P.F.components = {fnlib::abs_x()};
    P.omega = ConstraintSet::whole_space(1);
    auto RP = RegularizedProblem::make(P, Vec{1.0}, 1.0, Vec{1.0});
    // hand decomposition: psi(0)=1, psi(0.5)=0.75, phi(0)=-1
    CHECK(phi_gamma(RP, Vec{0.5}, 0.1, Vec{0.0}) == doctest::Approx(0.35).epsilon(1e-12));
    // at the anchor the max reduces to gamma for anchors inside the level set
    CHECK(phi_gamma(RP, Vec{0.5}, 0.1, Vec{0.5}) == doctest::Approx(0.1).epsilon(1e-12));
    // large gamma dominates every bounded spread
    double spread = 0.0;
    for (double x = -1.0; x <= 1.0; x += 0.125)
        spread = std::max(spread, std::abs(evaluate(RP.psi, Vec{x})[0] -
                                           evaluate(RP.psi, Vec{0.5})[0]));
    double gamma = spread + 1.0;
    for (double x = -1.0; x <= 1.0; x += 0.125)
        CHECK(phi_gamma(RP, Vec{0.5}, gamma, Vec{x}) > 0.0);
    CHECK_THROWS_AS(phi_gamma(RP, Vec{0.5}, 0.0, Vec{0.0}), std::invalid_argument);
}

TEST_CASE("scalarization scan is positive at regularized Pareto points") {
    auto RP = collapsed_rp();
    Grid g = Grid::uniform_1d(-3.0, 2.0, 1e-3);
    auto pareto = pareto_bruteforce(RP, g);
    REQUIRE(!pareto.points.empty());
    for (const auto& xbar : pareto.points)
        for (double gamma : {1e-3, 1e-2, 1e-1}) {
            auto scan = phi_gamma_scan(RP, xbar, gamma, g);
            CHECK(scan.positive);
        }
    // a gamma larger than the scalarization spread is trivially positive
    CHECK(phi_gamma_scan(RP, pareto.points[0], 50.0, g).positive);
}

TEST_CASE("scalarization scan refutes dominated anchors") {
    MOProblem P;
    P.F.components = {fnlib::square_x()};
    P.omega = ConstraintSet::whole_space(1);
    auto RP = RegularizedProblem::make(P, Vec{1.0}, 1.0, Vec{1.0});
    // 0.9 is strictly dominated in the regularized problem (minimizer is 0.5)
    auto scan = phi_gamma_scan(RP, Vec{0.9}, 1e-3, Grid::uniform_1d(-2.0, 2.0, 1e-3));
    CHECK(scan.min_value <= 0.0);
    CHECK(!scan.positive);
}
