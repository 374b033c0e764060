#include <doctest.h>

#include "moprox/realset.hpp"
#include "moprox/rng.hpp"

using namespace moprox;

namespace {

RealSet1D random_set(Rng& rng) {
    RealSet1D s;
    int pieces = 1 + static_cast<int>(rng.next() % 4);
    for (int k = 0; k < pieces; ++k) {
        double choice = rng.uniform();
        if (choice < 0.3) {
            s = s.union_with(RealSet1D::point(rng.uniform(-5, 5)));
        } else if (choice < 0.8) {
            double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5);
            s = s.union_with(RealSet1D::interval(std::min(a, b), std::max(a, b)));
        } else if (choice < 0.9) {
            s = s.union_with(RealSet1D::ray_up(rng.uniform(-5, 5)));
        } else {
            s = s.union_with(RealSet1D::ray_down(rng.uniform(-5, 5)));
        }
    }
    return s;
}

void check_normalized(const RealSet1D& s) {
    const auto& ivs = s.intervals();
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        CHECK(ivs[i].lo < ivs[i].hi);
        if (i > 0) CHECK(ivs[i - 1].hi < ivs[i].lo);  // disjoint and non-adjacent
    }
    for (double p : s.isolated_points())
        for (const auto& iv : ivs) CHECK((p < iv.lo || p > iv.hi));
}

}  // namespace

TEST_CASE("construction and membership") {
    auto s = RealSet1D::interval(-1, 1);
    CHECK(s.contains(0.0));
    CHECK(s.contains(1.0));
    CHECK(!s.contains(1.0001));
    CHECK(s.contains(1.0001, 1e-3));
    CHECK(RealSet1D::empty().is_empty());
    CHECK(RealSet1D::point(2.0).is_singleton(2.0));
    CHECK(RealSet1D::ray_up(0.0).unbounded_above());
    CHECK(!RealSet1D::ray_up(0.0).unbounded_below());
    CHECK(RealSet1D::interval(3, 3).is_singleton(3.0));
}

TEST_CASE("union merges touching pieces") {
    auto s = RealSet1D::interval(0, 1).union_with(RealSet1D::interval(1, 2));
    CHECK(s.intervals().size() == 1);
    CHECK(s.same_as(RealSet1D::interval(0, 2)));
    auto t = RealSet1D::interval(0, 1).union_with(RealSet1D::point(1.0));
    CHECK(t.isolated_points().empty());
    auto u = RealSet1D::point(0.0).union_with(RealSet1D::point(0.0));
    CHECK(u.isolated_points().size() == 1);
}

TEST_CASE("minkowski sums") {
    auto a = RealSet1D::interval(-1, 1);
    auto b = RealSet1D::point(-1.0);
    CHECK(a.minkowski_sum(b).same_as(RealSet1D::interval(-2, 0)));
    CHECK(RealSet1D::point(2.0).minkowski_sum(RealSet1D::point(3.0)).is_singleton(5.0));
    auto r = RealSet1D::ray_up(0.0).minkowski_sum(RealSet1D::ray_down(0.0));
    CHECK(r.same_as(RealSet1D::whole_line()));
    CHECK(RealSet1D::empty().minkowski_sum(a).is_empty());
}

TEST_CASE("scaling") {
    auto s = RealSet1D::interval(1, 2).union_with(RealSet1D::point(-3.0));
    auto neg = s.scaled(-2.0);
    CHECK(neg.contains(-4.0));
    CHECK(neg.contains(-2.0));
    CHECK(neg.contains(6.0));
    CHECK(s.scaled(0.0).is_singleton(0.0));
    CHECK(RealSet1D::ray_up(1.0).scaled(-1.0).same_as(RealSet1D::ray_down(-1.0)));
}

TEST_CASE("hull, distance, hausdorff") {
    auto s = RealSet1D::point(-1.0).union_with(RealSet1D::point(1.0));
    CHECK(s.convex_hull().same_as(RealSet1D::interval(-1, 1)));
    CHECK(s.distance_to(0.0) == doctest::Approx(1.0));
    CHECK(s.distance_to(1.5) == doctest::Approx(0.5));
    CHECK(RealSet1D::hausdorff(s, s.convex_hull()) == doctest::Approx(1.0));
    CHECK(RealSet1D::hausdorff(RealSet1D::ray_up(0.0), RealSet1D::interval(0, 1)) == kInf);
    CHECK(RealSet1D::hausdorff(RealSet1D::ray_up(0.0), RealSet1D::ray_up(0.25)) ==
          doctest::Approx(0.25));
}

TEST_CASE("subset queries") {
    CHECK(RealSet1D::interval(0, 1).subset_of(RealSet1D::interval(-1, 2)));
    CHECK(!RealSet1D::interval(-1, 2).subset_of(RealSet1D::interval(0, 1)));
    CHECK(RealSet1D::point(0.5).subset_of(RealSet1D::interval(0, 1)));
    CHECK(RealSet1D::empty().subset_of(RealSet1D::point(0.0)));
    CHECK(!RealSet1D::whole_line().subset_of(RealSet1D::interval(-10, 10)));
    CHECK(RealSet1D::interval(0, 1).subset_of(RealSet1D::interval(0.001, 0.999), 1e-2));
}

TEST_CASE("set operations preserve normalization") {
    Rng rng(0xbeef);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_set(rng);
        auto b = random_set(rng);
        check_normalized(a);
        check_normalized(a.union_with(b));
        check_normalized(a.minkowski_sum(b));
        check_normalized(a.scaled(rng.uniform(-2, 2)));
        check_normalized(a.convex_hull());
        // hull contains the set
        CHECK(a.subset_of(a.convex_hull()));
        // minkowski sum contains translates by isolated points of b
        for (double p : b.isolated_points()) {
            for (double q : a.isolated_points()) CHECK(a.minkowski_sum(b).contains(q + p, 1e-12));
        }
    }
}
