// Benchmark comparing the OpenMP kernels against their serial reference
// implementations: dominance filtering, lattice evaluation, argmin scans and
// multistart searches.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "moprox/problem.hpp"
#include "moprox/rng.hpp"
#include "moprox/solver.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

using namespace moprox;

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_best_of(int reps, F&& fn) {
    double best = kInf;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_s();
        fn();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

void row(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s %10.4f s %10.4f s %8.2fx\n", name, serial_s, parallel_s,
                serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;

#if defined(_OPENMP)
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; parallel kernels run serially\n");
#endif
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    const kernels::ExecPolicy par{};
    const kernels::ExecPolicy ser = kernels::ExecPolicy::serial();
    const int reps = quick ? 1 : 3;

    // dominance filter on synthetic fronts
    {
        const std::size_t n = quick ? 4000 : 20000;
        const std::size_t m = 3;
        Rng rng(42);
        std::vector<double> vals(n * m);
        for (auto& v : vals) v = rng.uniform(0.0, 1.0);
        std::vector<char> a, b;
        double ts = time_best_of(reps, [&] { a = kernels::nondominated_mask_serial(vals, m, 1e-15); });
        double tp = time_best_of(reps, [&] { b = kernels::nondominated_mask(vals, m, 1e-15, par); });
        if (a != b) { std::fprintf(stderr, "dominance kernels disagree\n"); return 1; }
        row("dominance_filter", ts, tp);
    }

    // lattice evaluation of the bundled biobjective
    {
        MOProblem P;
        P.F.components = {fnlib::parabola_shift(-1.0), fnlib::cuberoot_or_parabola()};
        P.omega = ConstraintSet::whole_space(1);
        Grid g = Grid::uniform_1d(-3.0, 2.0, quick ? 1e-4 : 2e-5);
        const std::size_t n = g.size();
        std::vector<double> out_s(n), out_p(n);
        double ts = time_best_of(reps, [&] {
            kernels::for_each_index(n, ser, [&](std::size_t i) {
                out_s[i] = evaluate(P.F.components[1], g.point(i));
            });
        });
        double tp = time_best_of(reps, [&] {
            kernels::for_each_index(n, par, [&](std::size_t i) {
                out_p[i] = evaluate(P.F.components[1], g.point(i));
            });
        });
        if (out_s != out_p) { std::fprintf(stderr, "lattice evaluation disagrees\n"); return 1; }
        row("lattice_evaluation", ts, tp);
    }

    // argmin scan of a scalarization
    {
        MOProblem P;
        P.F.components = {fnlib::abs_x()};
        P.omega = ConstraintSet::whole_space(1);
        auto RP = RegularizedProblem::make(P, Vec{1.0}, 1.0, Vec{1.0});
        Grid g = Grid::uniform_1d(-3.0, 3.0, quick ? 1e-4 : 1e-5);
        const std::size_t n = g.size();
        auto eval_phi = [&](std::size_t i) {
            return phi_gamma(RP, Vec{0.5}, 1e-2, g.point(i));
        };
        std::pair<double, std::size_t> rs, rp;
        double ts = time_best_of(reps, [&] { rs = kernels::argmin_reduce(n, ser, eval_phi); });
        double tp = time_best_of(reps, [&] { rp = kernels::argmin_reduce(n, par, eval_phi); });
        if (rs != rp) { std::fprintf(stderr, "argmin kernels disagree\n"); return 1; }
        row("scalarization_argmin", ts, tp);
    }

    // full Pareto oracle (two-pass kernel composition)
    {
        MOProblem P;
        P.F.components = {fnlib::square_x(), fnlib::parabola_shift(1.0)};
        P.omega = ConstraintSet::whole_space(1);
        Grid g = Grid::uniform_1d(-2.0, 3.0, quick ? 2e-3 : 5e-4);
        ParetoResult a, b;
        double ts = time_best_of(reps, [&] { a = pareto_bruteforce(P, g, ser); });
        double tp = time_best_of(reps, [&] { b = pareto_bruteforce(P, g, par); });
        if (a.indices != b.indices) { std::fprintf(stderr, "pareto results disagree\n"); return 1; }
        row("pareto_bruteforce", ts, tp);
    }

    // multistart proximal inner step
    {
        MOProblem P;
        P.F.components = {fnlib::square_x(), fnlib::parabola_shift(1.0)};
        P.omega = ConstraintSet::whole_space(1);
        double r2 = 1.0 / std::sqrt(2.0);
        SolverConfig scfg;
        scfg.multistarts = quick ? 8 : 24;
        StepResult ssr, psr;
        SolverConfig cs = scfg;
        cs.exec = ser;
        SolverConfig cp = scfg;
        cp.exec = par;
        double ts = time_best_of(reps, [&] { ssr = proximal_step(P, Vec{2.0}, 1.0, Vec{r2, r2}, cs); });
        double tp = time_best_of(reps, [&] { psr = proximal_step(P, Vec{2.0}, 1.0, Vec{r2, r2}, cp); });
        if (ssr.x_next != psr.x_next) { std::fprintf(stderr, "multistart results disagree\n"); return 1; }
        row("proximal_multistart", ts, tp);
    }

    std::printf("all kernel pairs agreed\n");
    return 0;
}
