#include <doctest.h>

#include "moprox/kernels.hpp"
#include "moprox/rng.hpp"

using namespace moprox;
using kernels::ExecPolicy;

TEST_CASE("dominance predicate honours the tie tolerance") {
    double a[2] = {1.0, 2.0};
    double b[2] = {1.0, 1.0};
    CHECK(kernels::dominates(b, a, 2, 1e-15));
    CHECK(!kernels::dominates(a, b, 2, 1e-15));
    double c[2] = {1.0 + 5e-16, 1.0};
    CHECK(!kernels::dominates(c, b, 2, 1e-15));  // tie in both: no strict gain
    CHECK(!kernels::dominates(b, c, 2, 1e-15));
}

TEST_CASE("parallel and serial dominance masks agree") {
    Rng rng(0x77);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 200 + (rng.next() % 400);
        const std::size_t m = 1 + (rng.next() % 4);
        std::vector<double> vals(n * m);
        for (auto& v : vals) v = std::floor(rng.uniform(0.0, 8.0));  // many exact ties
        auto serial = kernels::nondominated_mask_serial(vals, m, 1e-15);
        auto parallel = kernels::nondominated_mask(vals, m, 1e-15, ExecPolicy{});
        CHECK(serial == parallel);
        auto forced_serial = kernels::nondominated_mask(vals, m, 1e-15, ExecPolicy::serial());
        CHECK(serial == forced_serial);
    }
}

TEST_CASE("argmin reduce breaks ties by index for any thread count") {
    const std::size_t n = 10001;
    auto eval = [](std::size_t i) { return static_cast<double>((i * 7919) % 10); };
    auto serial = kernels::argmin_reduce(n, ExecPolicy::serial(), eval);
    auto parallel = kernels::argmin_reduce(n, ExecPolicy{}, eval);
    CHECK(serial == parallel);
    for (int threads : {1, 2, 3, 7}) {
        ExecPolicy pol;
        pol.threads = threads;
        CHECK(kernels::argmin_reduce(n, pol, eval) == serial);
    }
}

TEST_CASE("for_each_index covers the range exactly once") {
    const std::size_t n = 5000;
    std::vector<int> counts(n, 0);
    kernels::for_each_index(n, ExecPolicy{}, [&](std::size_t i) { counts[i] += 1; });
    for (int c : counts) CHECK(c == 1);
}
