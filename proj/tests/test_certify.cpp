#include <doctest.h>

#include <cmath>

#include "moprox/certify.hpp"
#include "moprox/subdiff.hpp"

using namespace moprox;

namespace {

MOProblem scalar_problem(PiecewiseFunction f) {
    MOProblem P;
    P.F.components = {std::move(f)};
    P.omega = ConstraintSet::whole_space(1);
    return P;
}

MOProblem pair_problem() {
    MOProblem P;
    P.F.components = {fnlib::parabola_shift(-1.0), fnlib::cuberoot_or_parabola()};
    P.omega = ConstraintSet::whole_space(1);
    return P;
}

MOProblem quadratics_problem() {
    MOProblem P;
    P.F.components = {fnlib::square_x(), fnlib::parabola_shift(1.0)};
    P.omega = ConstraintSet::whole_space(1);
    return P;
}

// test-side recomputation of the inclusion defect, trusting only the
// certificate payload
double recompute_defect(const RegularizedProblem& RP, const Vec& xbar,
                        const MultiplierCertificate& cert, bool paper = false) {
    const int m = RP.psi.objectives();
    const int n = RP.base.F.dim();
    double factor = paper ? RP.lambda : 2.0 * RP.lambda;
    Vec defect = cert.w;
    for (int i = 0; i < m; ++i) {
        double gamma = cert.alpha[i] + cert.beta[i];
        for (int d = 0; d < n; ++d) {
            defect[d] += gamma * cert.subgradients[i * n + d];
            defect[d] += cert.alpha[i] * factor * RP.upsilon[i] * (xbar[d] - RP.center[d]);
        }
    }
    return norm2(defect);
}

}  // namespace

TEST_CASE("local Lipschitz verdicts per component") {
    auto F = pair_problem().F;
    auto a = lipschitz_at(F, Vec{-0.75});
    CHECK(a.component == std::vector<bool>{true, true});
    auto b = lipschitz_at(F, Vec{0.0});
    CHECK(b.component == std::vector<bool>{true, false});
    VectorFunction Fabs;
    Fabs.components = {fnlib::abs_x()};
    CHECK(lipschitz_at(Fabs, Vec{0.0}).all);
    // separable multi-coordinate component
    VectorFunction Fsum;
    Fsum.components = {fnlib::cube_root_sum(2)};
    CHECK(!lipschitz_at(Fsum, Vec{0.0, 0.0}).all);
    CHECK(lipschitz_at(Fsum, Vec{1.0, 1.0}).all);
}

TEST_CASE("scalar kink certificate is exactly stationary") {
    auto RP = RegularizedProblem::make(scalar_problem(fnlib::abs_x()), Vec{1.0}, 1.0, Vec{1.0});
    auto cert = certify_pareto(RP, Vec{0.5});
    REQUIRE(cert.feasible);
    CHECK(cert.alpha[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cert.beta[0] == 0.0);
    CHECK(cert.stationarity <= 1e-12);
    CHECK(cert.tau == 0.0);
    CHECK(recompute_defect(RP, Vec{0.5}, cert) <= 1e-12);
}

TEST_CASE("smooth certificate at the prox centre") {
    auto RP = RegularizedProblem::make(scalar_problem(fnlib::square_x()), Vec{0.0}, 1.0, Vec{1.0});
    auto cert = certify_pareto(RP, Vec{0.0});
    REQUIRE(cert.feasible);
    CHECK(cert.alpha[0] == doctest::Approx(1.0));
    CHECK(cert.stationarity <= 1e-12);
    CHECK(cert.normalization <= 1e-12);
    CHECK(cert.complementarity <= 1e-10);
}

TEST_CASE("collapsed level set certificate") {
    double r2 = 1.0 / std::sqrt(2.0);
    auto RP = RegularizedProblem::make(pair_problem(), Vec{-1.0}, 1.0, Vec{r2, r2});
    auto cert = certify_pareto(RP, Vec{-1.0});
    REQUIRE(cert.feasible);
    CHECK(cert.alpha[0] + cert.beta[0] == doctest::Approx(1.0));
    CHECK(cert.alpha[1] + cert.beta[1] == doctest::Approx(0.0));
    CHECK(cert.stationarity <= 1e-10);
}

TEST_CASE("prox-gradient conventions disagree by the analytic factor") {
    auto RP = RegularizedProblem::make(scalar_problem(fnlib::abs_x()), Vec{1.0}, 1.0, Vec{1.0});
    CertifyOptions literal;
    literal.paper_convention = true;
    auto cert = certify_pareto(RP, Vec{0.5}, literal);
    CHECK(!cert.feasible);
    CHECK(cert.stationarity == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(cert.other_convention_residual.has_value());
    CHECK(*cert.other_convention_residual <= 1e-12);
    CHECK(cert.note.find("analytic") != std::string::npos);
    CHECK(recompute_defect(RP, Vec{0.5}, cert, true) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("non-Lipschitz candidates are rejected with a precondition error") {
    double r2 = 1.0 / std::sqrt(2.0);
    // centre 0 gives D = [-1, 0], and the second component is not Lipschitz at 0
    auto RP = RegularizedProblem::make(pair_problem(), Vec{0.0}, 1.0, Vec{r2, r2});
    REQUIRE(RP.in_level_set(Vec{0.0}));
    CHECK_THROWS_AS(certify_pareto(RP, Vec{0.0}), PreconditionError);
    CHECK_THROWS_AS(certify_pareto(RP, Vec{5.0}), std::invalid_argument);  // not in D
}

TEST_CASE("certificates at lattice Pareto points of the bundled problems") {
    struct Entry {
        RegularizedProblem rp;
        Grid grid;
        double slope_bound;  // documented residual growth constant C
    };
    double r2 = 1.0 / std::sqrt(2.0);
    std::vector<Entry> entries;
    entries.push_back({RegularizedProblem::make(scalar_problem(fnlib::abs_x()), Vec{1.0}, 1.0,
                                                Vec{1.0}),
                       Grid::uniform_1d(-2.0, 2.0, 1e-3), 4.0});
    entries.push_back({RegularizedProblem::make(scalar_problem(fnlib::square_x()), Vec{0.0}, 1.0,
                                                Vec{1.0}),
                       Grid::uniform_1d(-2.0, 2.0, 1e-3), 4.0});
    entries.push_back({RegularizedProblem::make(pair_problem(), Vec{-1.0}, 1.0, Vec{r2, r2}),
                       Grid::uniform_1d(-3.0, 2.0, 1e-3), 1.0});
    entries.push_back({RegularizedProblem::make(quadratics_problem(), Vec{2.0}, 1.0, Vec{r2, r2}),
                       Grid::uniform_1d(-2.0, 3.0, 1e-3), 8.0});
    for (const auto& e : entries) {
        auto pareto = pareto_bruteforce(e.rp, e.grid);
        REQUIRE(!pareto.points.empty());
        for (const auto& xbar : pareto.points) {
            if (!lipschitz_at(e.rp.base.F, xbar).all) continue;
            auto cert = certify_pareto(e.rp, xbar);
            CHECK(cert.stationarity <= 1e-4 + e.slope_bound * e.grid.step);
            CHECK(cert.normalization <= 1e-12);
            CHECK(cert.complementarity <= 1e-10);
            // soundness: the reported residual is reproducible from the payload
            CHECK(recompute_defect(e.rp, xbar, cert) ==
                  doctest::Approx(cert.stationarity).epsilon(1e-9));
        }
    }
}

TEST_CASE("interior smooth dominated points are refuted") {
    double r2 = 1.0 / std::sqrt(2.0);
    auto RPsq = RegularizedProblem::make(scalar_problem(fnlib::square_x()), Vec{1.0}, 1.0,
                                         Vec{1.0});
    auto c1 = certify_pareto(RPsq, Vec{0.8});
    CHECK(!c1.feasible);
    CHECK(c1.stationarity > 1e-2);
    CHECK(c1.stationarity == doctest::Approx(1.2).epsilon(1e-9));

    auto RPq = RegularizedProblem::make(quadratics_problem(), Vec{2.0}, 1.0, Vec{r2, r2});
    auto c2 = certify_pareto(RPq, Vec{1.8});
    CHECK(!c2.feasible);
    CHECK(c2.stationarity > 1e-2);

    auto RPabs = RegularizedProblem::make(scalar_problem(fnlib::abs_x()), Vec{1.0}, 1.0,
                                          Vec{1.0});
    auto c3 = certify_pareto(RPabs, Vec{-0.5});
    CHECK(c3.stationarity > 1e-2);
}

TEST_CASE("constrained certificate uses the normal cone") {
    // minimize |x| + (x-1)^2 over [0.8, 2]: the prox objective pushes against
    // the lower bound, so the certificate needs a normal element
    MOProblem P;
    P.F.components = {fnlib::abs_x()};
    P.omega = ConstraintSet::box(Vec{0.8}, Vec{2.0});
    auto RP = RegularizedProblem::make(P, Vec{1.0}, 1.0, Vec{1.0});
    auto cert = certify_pareto(RP, Vec{0.8});
    REQUIRE(cert.feasible);
    CHECK(cert.tau > 0.0);
    CHECK(cert.w[0] < 0.0);  // outward normal of the lower bound
    CHECK(cert.stationarity <= 1e-10);
}

TEST_CASE("two-dimensional certificate against a halfspace") {
    // minimize ||x - (1,1)||^2 + ||x||^2 over x1 + x2 <= 0: the constrained
    // minimizer is the origin, where the objective gradient (-2,-2) is
    // cancelled by the outward normal direction (1,1)
    MOProblem P;
    P.F.components = {fnlib::from_expr(expr::sqnorm_shift(Vec{1.0, 1.0}), 2)};
    P.omega = ConstraintSet::polyhedron(2, {{Vec{1.0, 1.0}, 0.0}}, Vec{0.0, 0.0});
    auto RP = RegularizedProblem::make(P, Vec{0.0, 0.0}, 1.0, Vec{1.0});
    auto cert = certify_pareto(RP, Vec{0.0, 0.0});
    REQUIRE(cert.feasible);
    CHECK(cert.stationarity <= 1e-10);
    CHECK(cert.w[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(cert.w[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(cert.tau == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    // an interior point of the halfspace has no normal element to lean on
    auto interior = certify_pareto(RP, Vec{-0.5, -0.5});
    CHECK(!interior.feasible);
    CHECK(interior.stationarity > 1e-2);
}

TEST_CASE("exact penalty scan passes where the threshold bound holds") {
    auto seg = ConstraintSet::box(Vec{1.0}, Vec{2.0});
    auto rep = exact_penalty_check(fnlib::abs_x(), seg, Vec{1.0}, 2.0, 0.5, 1e-4);
    CHECK(rep.pass);
    // interior smooth minimum: the penalty never activates
    auto box = ConstraintSet::box(Vec{-1.0}, Vec{1.0});
    auto rep2 = exact_penalty_check(fnlib::square_x(), box, Vec{0.0}, 0.0, 0.5, 1e-4);
    CHECK(rep2.pass);
}

TEST_CASE("exact penalty counterexample is reproducible across tau") {
    auto box = ConstraintSet::box(Vec{0.0}, Vec{1.0});
    for (double tau : {1.0, 1e2, 1e4, 1e6}) {
        auto rep = exact_penalty_check(fnlib::cube_root(), box, Vec{0.0}, tau, 0.5, 1e-4);
        CHECK(!rep.pass);
        REQUIRE(rep.violator.has_value());
        CHECK((*rep.violator)[0] < 0.0);
        CHECK(rep.violation > 1e-12);
    }
}

TEST_CASE("penalty threshold from the directional constant") {
    CHECK(penalty_tau_from_dl(fnlib::abs_x(), Vec{0.0}) == doctest::Approx(1.001).epsilon(1e-3));
    CHECK(penalty_tau_from_dl(fnlib::cube_root(), Vec{0.0}) ==
          doctest::Approx(1e-3).epsilon(1e-2));
    CHECK(penalty_tau_from_dl(fnlib::square_x(), Vec{1.0}) ==
          doctest::Approx(2.001).epsilon(2e-2));
    CHECK_THROWS_AS(penalty_tau_from_dl(fnlib::abs_cube_root(-1.0), Vec{0.0}),
                    PreconditionError);
}

TEST_CASE("suggested threshold validates through the penalty scan") {
    auto seg = ConstraintSet::box(Vec{1.0}, Vec{2.0});
    double tau = penalty_tau_from_dl(fnlib::abs_x(), Vec{1.0});
    auto rep = exact_penalty_check(fnlib::abs_x(), seg, Vec{1.0}, tau, 0.5, 1e-4);
    CHECK(rep.pass);
}
