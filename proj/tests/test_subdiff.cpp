#include <doctest.h>

#include <cmath>

#include "moprox/rng.hpp"
#include "moprox/subdiff.hpp"

using namespace moprox;

namespace {

PiecewiseFunction neg_abs() {
    return fnlib::from_expr(expr::scale(-1.0, expr::abs(expr::coord(0, 1))), 1, "neg_abs");
}

// definition-based sampling oracle for limiting subgradients: collect central
// finite-difference slopes along ladders approaching the point. Uses only
// function evaluation, independent of the side-limit machinery.
std::vector<double> sampled_gradient_limits(const PiecewiseFunction& f, double x) {
    std::vector<double> limits;
    for (double side : {-1.0, 1.0}) {
        double prev = kInf;
        bool settled = false;
        double value = 0.0;
        for (int k = 4; k <= 9; ++k) {
            double xk = x + side * std::pow(10.0, -k);
            double h = std::pow(10.0, -k - 3);
            double fp = evaluate(f, xk + h), fm = evaluate(f, xk - h);
            if (!std::isfinite(fp) || !std::isfinite(fm)) { settled = false; break; }
            double g = (fp - fm) / (2 * h);
            if (std::isfinite(prev) && std::abs(g - prev) <= 1e-5 * (1 + std::abs(g))) {
                settled = true;
                value = g;
            } else if (std::isfinite(prev)) {
                settled = false;
            }
            prev = g;
        }
        if (settled) limits.push_back(value);
    }
    return limits;
}

struct CorpusEntry {
    PiecewiseFunction f;
    double x;
};

std::vector<CorpusEntry> corpus() {
    std::vector<CorpusEntry> c;
    for (double x : {0.0, 0.5, -1.0, 2.0}) {
        c.push_back({fnlib::abs_x(), x});
        c.push_back({fnlib::abs_x_atom(), x});
        c.push_back({fnlib::square_x(), x});
        c.push_back({fnlib::cube_root(), x});
        c.push_back({fnlib::min_x_zero(), x});
        c.push_back({fnlib::cuberoot_or_parabola(), x});
        c.push_back({neg_abs(), x});
        c.push_back({fnlib::abs_cube_root(1.0), x});
        c.push_back({fnlib::oscillation_pair_component(), x});
    }
    return c;
}

}  // namespace

TEST_CASE("frechet subdifferential basics") {
    CHECK(frechet_subdiff(fnlib::abs_x(), 0.0).same_as(RealSet1D::interval(-1, 1)));
    CHECK(frechet_subdiff(fnlib::cube_root(), 0.0).is_empty());
    CHECK(frechet_subdiff(fnlib::square_x(), 1.0).is_singleton(2.0, 1e-14));
    // single-piece abs atom agrees with the two-piece form
    CHECK(frechet_subdiff(fnlib::abs_x_atom(), 0.0).same_as(RealSet1D::interval(-1, 1)));
}

TEST_CASE("limiting subdifferential basics") {
    auto m = limiting_subdiff(neg_abs(), 0.0);
    CHECK(m.same_as(RealSet1D::point(-1).union_with(RealSet1D::point(1))));
    CHECK(limiting_subdiff(fnlib::abs_x(), 0.0).same_as(RealSet1D::interval(-1, 1)));
    CHECK(limiting_subdiff(fnlib::min_x_zero(), 0.0)
              .same_as(RealSet1D::point(0).union_with(RealSet1D::point(1))));
    CHECK(frechet_subdiff(fnlib::min_x_zero(), 0.0).is_empty());

    // definition-based sampling cross-check for the two-limit case
    auto sampled = sampled_gradient_limits(neg_abs(), 0.0);
    REQUIRE(sampled.size() == 2);
    for (double g : sampled) CHECK(m.distance_to(g) <= 1e-4);
}

TEST_CASE("singular subdifferential basics") {
    CHECK(singular_subdiff(fnlib::cube_root(), 0.0).same_as(RealSet1D::ray_up(0.0)));
    CHECK(singular_subdiff(fnlib::abs_x(), 0.0).is_singleton(0.0));
    CHECK(singular_subdiff(fnlib::cuberoot_or_parabola(), 0.0).same_as(RealSet1D::ray_up(0.0)));
    CHECK(singular_subdiff(fnlib::abs_cube_root(-1.0), 0.0).same_as(RealSet1D::whole_line()));
}

TEST_CASE("clarke gradient and the non-Lipschitz error path") {
    CHECK(clarke(neg_abs(), 0.0).same_as(RealSet1D::interval(-1, 1)));
    CHECK(clarke(fnlib::abs_x(), 0.0).same_as(RealSet1D::interval(-1, 1)));
    CHECK(clarke(fnlib::square_x(), 1.0).is_singleton(2.0, 1e-14));
    try {
        clarke(fnlib::cube_root(), 0.0);
        FAIL("expected NotLipschitzError");
    } catch (const NotLipschitzError& e) {
        CHECK(e.singular.same_as(RealSet1D::ray_up(0.0)));
    }
}

TEST_CASE("generalized directional derivative by sampling") {
    CHECK(clarke_dirderiv(fnlib::abs_x(), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(clarke_dirderiv(neg_abs(), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(clarke_dirderiv(fnlib::square_x(), 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK_THROWS_AS(clarke_dirderiv(fnlib::cube_root(), 0.0, 1.0), NotLipschitzError);
}

TEST_CASE("directional derivative matches the clarke support function") {
    for (const auto& entry : corpus()) {
        if (!singular_subdiff(entry.f, entry.x).is_singleton(0.0)) continue;
        auto hull = clarke(entry.f, entry.x);
        for (double d : {1.0, -1.0}) {
            double expected = d > 0 ? hull.sup() : -hull.inf();
            double got = clarke_dirderiv(entry.f, entry.x, d);
            CHECK(got == doctest::Approx(expected).epsilon(2e-3));
        }
    }
}

TEST_CASE("sum rule qualification and inclusion") {
    auto neg_x = fnlib::from_expr(expr::affine(Vec{-1.0}, 0.0), 1);
    auto r = sum_rule({fnlib::abs_x(), neg_x}, 0.0);
    CHECK(r.qualified);
    CHECK(r.sum.same_as(RealSet1D::interval(-2, 0)));
    // direct limiting subdifferential of the combined function: equality here
    auto direct = limiting_subdiff(combine(CombineKind::Sum, {fnlib::abs_x(), neg_x}), 0.0);
    CHECK(direct.same_as(RealSet1D::interval(-2, 0)));

    auto cancel = sum_rule({fnlib::cube_root(), fnlib::neg_cube_root()}, 0.0);
    CHECK(!cancel.qualified);
}

TEST_CASE("oscillation component analysis at the origin") {
    // the x/2*sin(1/x) branch has derivative amplitude ~1/(2x): the function
    // is not locally Lipschitzian at 0 and its singular set is the whole line
    auto f2 = fnlib::oscillation_pair_component();
    CHECK(frechet_subdiff(f2, 0.0).same_as(RealSet1D::interval(-1.0, -0.5)));
    CHECK(limiting_subdiff(f2, 0.0).same_as(RealSet1D::whole_line()));
    CHECK(singular_subdiff(f2, 0.0).same_as(RealSet1D::whole_line()));
    // consequently the pair with the cube root fails the qualification
    auto r = sum_rule({fnlib::cube_root(), f2}, 0.0);
    CHECK(!r.qualified);
    // away from the origin both are Lipschitz and the qualification holds
    auto r2 = sum_rule({fnlib::cube_root(), f2}, 0.5);
    CHECK(r2.qualified);
}

TEST_CASE("robustness of the limiting subgradient graph") {
    CHECK(robustness_check(fnlib::abs_x(), 0.0, 20, 1));
    CHECK(robustness_check(neg_abs(), 0.0, 20, 1));
    CHECK(robustness_check(fnlib::cube_root(), 0.0, 20, 1));  // vacuous: gradients blow up
    for (const auto& entry : corpus()) CHECK(robustness_check(entry.f, entry.x, 10, 42));
}

TEST_CASE("numeric frechet probe") {
    auto probe_abs = numeric_frechet_probe(fnlib::abs_x(), 0.0);
    CHECK(RealSet1D::interval(-0.99, 0.99).subset_of(probe_abs, 1e-9));
    auto probe_sq = numeric_frechet_probe(fnlib::square_x(), 0.0);
    CHECK(probe_sq.subset_of(RealSet1D::point(0.0), 0.011));  // within one grid step
    CHECK(numeric_frechet_probe(fnlib::cube_root(), 0.0).is_empty());
}

TEST_CASE("probe is a lower estimate of the exact frechet set") {
    for (const auto& entry : corpus()) {
        auto exact = frechet_subdiff(entry.f, entry.x);
        auto probe = numeric_frechet_probe(entry.f, entry.x);
        CHECK(probe.subset_of(exact, 0.011));
    }
}

TEST_CASE("frechet is contained in limiting") {
    for (const auto& entry : corpus()) {
        auto fr = frechet_subdiff(entry.f, entry.x);
        auto li = limiting_subdiff(entry.f, entry.x);
        CHECK(fr.subset_of(li));
    }
}

TEST_CASE("clarke equals the hull of limiting under Lipschitz continuity") {
    for (const auto& entry : corpus()) {
        auto sing = singular_subdiff(entry.f, entry.x);
        if (!sing.is_singleton(0.0)) continue;
        auto li = limiting_subdiff(entry.f, entry.x);
        CHECK(li.is_bounded());  // compactness under local Lipschitz continuity
        CHECK(clarke(entry.f, entry.x).same_as(li.convex_hull()));
    }
}

TEST_CASE("sum rule inclusion on qualified corpus pairs") {
    std::vector<std::pair<PiecewiseFunction, PiecewiseFunction>> pairs = {
        {fnlib::abs_x(), fnlib::from_expr(expr::affine(Vec{-1.0}, 0.0), 1)},
        {fnlib::abs_x(), fnlib::square_x()},
        {fnlib::min_x_zero(), fnlib::abs_x()},
        {fnlib::cube_root(), fnlib::square_x()},
    };
    for (const auto& [f, g] : pairs) {
        for (double x : {0.0, 0.5, -0.5}) {
            auto r = sum_rule({f, g}, x);
            if (!r.qualified) continue;
            auto direct = limiting_subdiff(combine(CombineKind::Sum, {f, g}), x);
            CHECK(direct.subset_of(r.sum, 1e-12));
        }
    }
}

TEST_CASE("point analysis rejects points outside the domain") {
    auto sqrt_x = fnlib::from_expr(expr::power_coord(0, 1, Rational(1, 2)), 1);
    CHECK_THROWS_AS(frechet_subdiff(sqrt_x, -1.0), std::invalid_argument);
    // at the domain boundary the one-sided analysis applies
    CHECK(frechet_subdiff(sqrt_x, 0.0).same_as(RealSet1D::whole_line()));
    CHECK(singular_subdiff(sqrt_x, 0.0).same_as(RealSet1D::whole_line()));
}

TEST_CASE("separable coordinate split") {
    auto parts = separate_coordinates(fnlib::cube_root_sum(3));
    REQUIRE(parts.has_value());
    CHECK(parts->size() == 3);
    for (const auto& g : *parts)
        CHECK(singular_subdiff(g, 0.0).same_as(RealSet1D::ray_up(0.0)));
    // sqnorm splits per coordinate
    auto q = fnlib::from_expr(expr::sqnorm_shift(Vec{1.0, -2.0}), 2);
    auto qparts = separate_coordinates(q);
    REQUIRE(qparts.has_value());
    CHECK(limiting_subdiff((*qparts)[0], 0.0).is_singleton(-2.0, 1e-12));
    CHECK(limiting_subdiff((*qparts)[1], 0.0).is_singleton(4.0, 1e-12));
    // a genuine coupling is rejected
    auto coupled = fnlib::from_expr(expr::abs(expr::affine(Vec{1.0, 1.0}, 0.0)), 2);
    CHECK(!separate_coordinates(coupled).has_value());
}
