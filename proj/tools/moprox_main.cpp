// moprox: analysis and certification toolkit for proximally regularized
// multiobjective problems with nonsmooth objectives.
//
// Subcommands: eval, subdiff, dirlip, pareto, regularize, certify, solve,
// selftest. Exit codes: 0 success, 1 parse/validation error, 2 negative
// verdict, 3 precondition failure.

#include <chrono>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "moprox/io.hpp"
#include "moprox/solver.hpp"
#include "moprox/subdiff.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

using namespace moprox;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNegative = 2;
constexpr int kExitPrecondition = 3;

struct CommonArgs {
    std::string problem_path;
    std::string out_path;
    std::uint64_t seed = 0x5eed;
    double tol = 1e-6;
    double grid_step = 1e-3;
    int threads = 0;
    bool paper_literal = false;
};

Vec parse_point(const std::string& s) {
    Vec v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (...) {
            throw ParseError("cannot parse point component \"" + item + "\"");
        }
    }
    if (v.empty()) throw ParseError("empty point");
    return v;
}

void emit(const CommonArgs& args, const std::string& command, const json& outputs,
          double wall_s) {
    RunReport rep;
    rep.command = command;
    rep.outputs = outputs;
    rep.wall_time_s = wall_s;
    rep.seed = args.seed;
    std::ifstream in(args.problem_path, std::ios::binary);
    if (in) {
        std::stringstream ss;
        ss << in.rdbuf();
        rep.inputs_digest = digest_hex(ss.str() + command);
    } else {
        rep.inputs_digest = digest_hex(command);
    }
    if (!args.out_path.empty()) atomic_write(args.out_path, rep.to_json().dump(2) + "\n");
}

Grid grid_for(const ProblemFile& pf, double step) {
    Grid g;
    if (pf.expected.contains("grid")) {
        const auto& gj = pf.expected.at("grid");
        for (const auto& v : gj.at("lo")) g.lo.push_back(v.get<double>());
        for (const auto& v : gj.at("hi")) g.hi.push_back(v.get<double>());
    } else if (pf.omega.kind() == ConstraintSet::Kind::Box) {
        g.lo = pf.omega.lower();
        g.hi = pf.omega.upper();
        for (int d = 0; d < pf.dimension; ++d) {
            if (!std::isfinite(g.lo[d])) g.lo[d] = -3.0;
            if (!std::isfinite(g.hi[d])) g.hi[d] = 3.0;
        }
    } else {
        g.lo.assign(pf.dimension, -3.0);
        g.hi.assign(pf.dimension, 3.0);
    }
    g.step = step;
    return g;
}

int cmd_eval(const CommonArgs& args, int component, const Vec& x) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(args.problem_path);
    if (component < 0 || component >= pf.F.objectives())
        throw ParseError("component index out of range");
    double v = evaluate(pf.F.components[component], x);
    std::cout << v << "\n";
    json out;
    out["value"] = std::isfinite(v) ? json(v) : json("inf");
    emit(args, "eval", out,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return kExitOk;
}

int cmd_subdiff(const CommonArgs& args, int component, double x) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(args.problem_path);
    if (component < 0 || component >= pf.F.objectives())
        throw ParseError("component index out of range");
    const auto& f = pf.F.components[component];
    if (f.dim != 1) throw ParseError("subdiff expects a 1-D objective");
    SubdiffReport rep = subdiff_report(f, x);
    auto side_line = [](const SideData& s) -> std::string {
        if (!s.exists) return "(no adjoining piece)";
        std::ostringstream os;
        os << "deriv ";
        if (s.deriv.dense)
            os << "[" << s.deriv.lo << ", " << s.deriv.hi << "] (oscillatory)";
        else
            os << s.deriv.lo;
        if (!s.attentive) os << "  [value jump]";
        return os.str();
    };
    std::cout << "function:  " << (rep.function_name.empty() ? "f" : rep.function_name)
              << "  at " << x << "\n"
              << "frechet:   " << rep.frechet.to_string() << "\n"
              << "limiting:  " << rep.limiting.to_string() << "\n"
              << "singular:  " << rep.singular.to_string() << "\n"
              << "clarke:    "
              << (rep.clarke ? rep.clarke->to_string() : std::string("(not locally Lipschitz)"))
              << "\n"
              << "left:      " << side_line(rep.left) << "\n"
              << "right:     " << side_line(rep.right) << "\n"
              << "lipschitz: " << (rep.lipschitz ? "yes" : "no")
              << (rep.approx ? "  [approximate]" : "") << "\n";
    json out;
    out["frechet"] = realset_to_json(rep.frechet);
    out["limiting"] = realset_to_json(rep.limiting);
    out["singular"] = realset_to_json(rep.singular);
    if (rep.clarke) out["clarke"] = realset_to_json(*rep.clarke);
    auto side_json = [](const SideData& s) {
        json j;
        j["exists"] = s.exists;
        if (s.exists) {
            j["attentive"] = s.attentive;
            j["deriv_lo"] = std::isfinite(s.deriv.lo) ? json(s.deriv.lo)
                                                      : json(s.deriv.lo > 0 ? "inf" : "-inf");
            j["deriv_hi"] = std::isfinite(s.deriv.hi) ? json(s.deriv.hi)
                                                      : json(s.deriv.hi > 0 ? "inf" : "-inf");
            j["oscillatory"] = s.deriv.dense;
        }
        return j;
    };
    out["left"] = side_json(rep.left);
    out["right"] = side_json(rep.right);
    out["lipschitz"] = rep.lipschitz;
    out["approximate"] = rep.approx;
    emit(args, "subdiff", out,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return kExitOk;
}

int cmd_dirlip(const CommonArgs& args, int component, const Vec& x,
               const std::optional<Vec>& direction) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(args.problem_path);
    if (component < 0 || component >= pf.F.objectives())
        throw ParseError("component index out of range");
    const auto& f = pf.F.components[component];
    DLSchedule sched = DLSchedule::defaults();
    sched.seed = args.seed;

    json out;
    DLVerdict verdict;
    if (direction) {
        Vec u = *direction;
        double nrm = norm2(u);
        if (nrm <= 0) throw ParseError("direction must be nonzero");
        for (auto& c : u) c /= nrm;
        DirectionResult r = classify_direction(f, x, u, sched);
        verdict = r.verdict;
        std::cout << "direction " << "(";
        for (std::size_t i = 0; i < u.size(); ++i) std::cout << (i ? "," : "") << u[i];
        std::cout << ")  verdict: " << to_string(r.verdict) << "  L=" << r.L
                  << "  slope=" << r.slope << "  r2=" << r.r2 << "\n";
        std::cout << "level quotients (t, Q):\n";
        for (std::size_t j = 0; j < sched.t_levels.size(); ++j)
            std::cout << "  " << sched.t_levels[j] << "  " << r.q_levels[j] << "\n";
        out["verdict"] = to_string(r.verdict);
        out["L"] = r.L;
        out["slope"] = r.slope;
        out["r2"] = r.r2;
        out["quotients"] = r.q_levels;
        out["t_levels"] = sched.t_levels;
    } else {
        DirLipReport rep = certify_dl(f, x, sched);
        verdict = rep.verdict;
        std::cout << "verdict: " << to_string(rep.verdict) << "\n";
        if (rep.verdict == DLVerdict::DirectionallyLipschitz) {
            std::cout << "witness u = (";
            for (std::size_t i = 0; i < rep.u.size(); ++i) std::cout << (i ? "," : "") << rep.u[i];
            std::cout << ")  L=" << rep.L << "  delta=" << rep.delta
                      << "  certified directions: " << rep.certified_directions.size() << "\n";
        } else {
            std::cout << "blow-up slope=" << rep.slope << "  r2=" << rep.r2 << "\n";
        }
        const DirectionResult* shown = nullptr;
        for (const auto& d : rep.directions)
            if (d.u == rep.u) shown = &d;
        if (shown) {
            std::cout << "quotient table (t, Q) for the reported direction:\n";
            for (std::size_t j = 0; j < sched.t_levels.size(); ++j)
                std::cout << "  " << sched.t_levels[j] << "  " << shown->q_levels[j] << "\n";
        }
        out["verdict"] = to_string(rep.verdict);
        out["L"] = rep.L;
        out["delta"] = rep.delta;
        out["slope"] = rep.slope;
        out["r2"] = rep.r2;
        out["u"] = rep.u;
        out["certified_directions"] = rep.certified_directions.size();
        if (shown) {
            out["quotients"] = shown->q_levels;
            out["t_levels"] = sched.t_levels;
        }
    }
    emit(args, "dirlip", out,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return verdict == DLVerdict::NotDirectionallyLipschitz ? kExitNegative : kExitOk;
}

int cmd_pareto(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(args.problem_path);
    Grid g = grid_for(pf, args.grid_step);
    ParetoResult res = pareto_bruteforce(pf.problem(), g);
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        for (double c : res.points[i]) std::cout << c << " ";
        std::cout << "| ";
        for (double c : res.values[i]) std::cout << c << " ";
        std::cout << "\n";
    }
    std::cerr << res.points.size() << " Pareto lattice points\n";
    json out;
    out["count"] = res.points.size();
    if (!res.points.empty() && pf.dimension == 1) {
        out["hull_lo"] = res.points.front()[0];
        out["hull_hi"] = res.points.back()[0];
    }
    json rows = json::array();
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        json r;
        r["x"] = res.points[i];
        r["F"] = res.values[i];
        rows.push_back(r);
    }
    out["rows"] = rows;
    emit(args, "pareto", out,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return kExitOk;
}

int cmd_regularize(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(args.problem_path);
    RegularizedProblem rp = pf.regularized();
    ProblemFile out_pf;
    out_pf.name = pf.name + "-regularized";
    out_pf.dimension = pf.dimension;
    out_pf.F = rp.psi;
    out_pf.omega = pf.omega;
    json j = problem_to_json(out_pf);
    j["level_set"] = {{"f_center", rp.f_center}, {"center", rp.center}};
    std::cout << j.dump(2) << "\n";
    emit(args, "regularize", j,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return kExitOk;
}

int cmd_certify(const CommonArgs& args, const Vec& x) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(args.problem_path);
    RegularizedProblem rp = pf.regularized();
    CertifyOptions opt;
    opt.tol = args.tol;
    opt.paper_convention = args.paper_literal;
    MultiplierCertificate cert = certify_pareto(rp, x, opt);
    std::cout << "verdict:        " << (cert.feasible ? "feasible" : "no certificate") << "\n"
              << "alpha:          ";
    for (double a : cert.alpha) std::cout << a << " ";
    std::cout << "\nbeta:           ";
    for (double b : cert.beta) std::cout << b << " ";
    std::cout << "\nstationarity:   " << cert.stationarity << "\n"
              << "normalization:  " << cert.normalization << "\n"
              << "complementarity:" << cert.complementarity << "\n"
              << "tau:            " << cert.tau << "\n";
    if (!cert.note.empty()) std::cout << "note:           " << cert.note << "\n";
    json out;
    out["feasible"] = cert.feasible;
    out["alpha"] = cert.alpha;
    out["beta"] = cert.beta;
    out["w"] = cert.w;
    out["tau"] = cert.tau;
    out["stationarity"] = cert.stationarity;
    out["normalization"] = cert.normalization;
    out["complementarity"] = cert.complementarity;
    out["selected_pieces"] = cert.selected_pieces;
    out["note"] = cert.note;
    if (cert.other_convention_residual)
        out["other_convention_residual"] = *cert.other_convention_residual;
    emit(args, "certify", out,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return cert.feasible ? kExitOk : kExitNegative;
}

int cmd_solve(const CommonArgs& args, const Vec& x0, double lambda,
              const std::optional<Vec>& upsilon) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = load_problem(args.problem_path);
    double lam = lambda;
    Vec ups;
    if (pf.regularization) {
        if (lambda <= 0) lam = pf.regularization->lambda;
        ups = pf.regularization->upsilon;
    }
    if (upsilon) ups = *upsilon;
    if (lam <= 0) lam = 1.0;
    if (ups.empty()) {
        const int m = pf.F.objectives();
        ups.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
    }
    SolverConfig cfg;
    cfg.seed = args.seed;
    SolverTrace tr = solve_ppa(pf.problem(), x0, lam, ups, cfg);
    std::cout << "k   x   F(x)\n";
    for (std::size_t k = 0; k < tr.iterates.size(); ++k) {
        std::cout << k << "   ";
        for (double c : tr.iterates[k]) std::cout << c << " ";
        std::cout << "  ";
        for (double c : tr.objective_values[k]) std::cout << c << " ";
        std::cout << "\n";
    }
    std::cout << "termination: " << tr.termination << "\n"
              << "certificate: " << tr.certificate_note << "\n";
    json out;
    json its = json::array();
    for (std::size_t k = 0; k < tr.iterates.size(); ++k) {
        json r;
        r["k"] = k;
        r["x"] = tr.iterates[k];
        r["F"] = tr.objective_values[k];
        if (k > 0) {
            r["gamma_floor"] = tr.steps[k - 1].inner.empty()
                                   ? 0.0
                                   : tr.steps[k - 1].inner.back().gamma;
            r["tau"] = tr.steps[k - 1].tau;
        }
        its.push_back(r);
    }
    out["trace"] = its;
    out["termination"] = tr.termination;
    out["certificate"] = tr.certificate_note;
    if (tr.certificate) {
        out["certificate_feasible"] = tr.certificate->feasible;
        out["certificate_stationarity"] = tr.certificate->stationarity;
    }
    emit(args, "solve", out,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return kExitOk;
}

int run_selftest(const CommonArgs& args);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis and certification toolkit for proximally regularized multiobjective problems"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string point_str, x0_str, dir_str;
    int component = 0;
    double lambda = -1.0;
    std::string upsilon_str;

    auto add_common = [&](CLI::App* sub, bool needs_problem = true) {
        if (needs_problem)
            sub->add_option("--problem,-p", common.problem_path, "problem file (JSON)")
                ->required();
        sub->add_option("--out", common.out_path, "write the machine-readable run report here");
        sub->add_option("--seed", common.seed, "seed for randomized procedures");
        sub->add_option("--tol", common.tol, "feasibility tolerance");
        sub->add_option("--grid-step", common.grid_step, "lattice step");
        sub->add_option("--threads", common.threads, "worker threads (0 = default)");
        sub->add_flag("--paper-literal", common.paper_literal,
                      "use the prox-gradient convention without the analytic factor 2");
    };

    auto* eval = app.add_subcommand("eval", "evaluate an objective at a point");
    add_common(eval);
    eval->add_option("--component,-c", component, "objective index");
    eval->add_option("--point,-x", point_str, "point, comma-separated")->required();

    auto* subdiff = app.add_subcommand("subdiff", "subdifferential report at a point (1-D)");
    add_common(subdiff);
    subdiff->add_option("--component,-c", component, "objective index");
    subdiff->add_option("--point,-x", point_str, "evaluation point")->required();

    auto* dirlip = app.add_subcommand("dirlip", "directional-Lipschitz certification");
    add_common(dirlip);
    dirlip->add_option("--component,-c", component, "objective index");
    dirlip->add_option("--point,-x", point_str, "base point")->required();
    dirlip->add_option("--direction,-u", dir_str, "candidate direction (skips the grid search)");

    auto* pareto = app.add_subcommand("pareto", "brute-force Pareto lattice");
    add_common(pareto);

    auto* regularize = app.add_subcommand("regularize", "emit the proximally regularized problem");
    add_common(regularize);

    auto* certify = app.add_subcommand("certify", "multiplier certificate at a candidate point");
    add_common(certify);
    certify->add_option("--point,-x", point_str, "candidate point")->required();

    auto* solve = app.add_subcommand("solve", "proximal-point solver");
    add_common(solve);
    solve->add_option("--x0", x0_str, "starting point")->required();
    solve->add_option("--lambda", lambda, "prox weight (default: problem file, else 1)");
    solve->add_option("--upsilon", upsilon_str, "objective weights, comma-separated unit vector");

    auto* selftest = app.add_subcommand("selftest", "run the bundled corpus regression checks");
    add_common(selftest, false);

    CLI11_PARSE(app, argc, argv);

#if defined(_OPENMP)
    if (common.threads > 0) omp_set_num_threads(common.threads);
#endif

    try {
        if (eval->parsed()) return cmd_eval(common, component, parse_point(point_str));
        if (subdiff->parsed()) return cmd_subdiff(common, component, parse_point(point_str)[0]);
        if (dirlip->parsed()) {
            std::optional<moprox::Vec> dir;
            if (!dir_str.empty()) dir = parse_point(dir_str);
            return cmd_dirlip(common, component, parse_point(point_str), dir);
        }
        if (pareto->parsed()) return cmd_pareto(common);
        if (regularize->parsed()) return cmd_regularize(common);
        if (certify->parsed()) return cmd_certify(common, parse_point(point_str));
        if (solve->parsed()) {
            std::optional<moprox::Vec> ups;
            if (!upsilon_str.empty()) ups = parse_point(upsilon_str);
            return cmd_solve(common, parse_point(x0_str), lambda, ups);
        }
        if (selftest->parsed()) return run_selftest(common);
    } catch (const moprox::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const moprox::PreconditionError& e) {
        std::cerr << "precondition failure: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitParse;
}

namespace {

int run_selftest(const CommonArgs& args) {
    using namespace moprox;
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    // exact subdifferential corpus
    check("cuberoot singular ray", singular_subdiff(fnlib::cube_root(), 0.0)
                                       .same_as(RealSet1D::ray_up(0.0)));
    check("cuberoot frechet empty", frechet_subdiff(fnlib::cube_root(), 0.0).is_empty());
    check("abs clarke hull", clarke(fnlib::abs_x(), 0.0).same_as(RealSet1D::interval(-1, 1)));
    check("neg-abs limiting pair",
          limiting_subdiff(fnlib::from_expr(expr::scale(-1, expr::abs(expr::coord(0, 1))), 1), 0.0)
              .same_as(RealSet1D::point(-1).union_with(RealSet1D::point(1))));
    {
        auto sr = sum_rule({fnlib::abs_x(), fnlib::from_expr(expr::affine(Vec{-1.0}, 0.0), 1)}, 0.0);
        check("sum rule qualification", sr.qualified && sr.sum.same_as(RealSet1D::interval(-2, 0)));
    }

    // Pareto lattice of the bundled biobjective (coarse grid for speed)
    {
        MOProblem P;
        P.F.components = {fnlib::parabola_shift(-1.0), fnlib::cuberoot_or_parabola()};
        P.omega = ConstraintSet::whole_space(1);
        auto res = pareto_bruteforce(P, Grid::uniform_1d(-3.0, 2.0, 1e-2));
        bool ok = !res.points.empty() && std::abs(res.points.front()[0] + 1.0) <= 1e-2 + 1e-12 &&
                  std::abs(res.points.back()[0] + 0.5) <= 1e-2 + 1e-12;
        check("pareto hull of the biobjective corpus", ok);
    }

    // directional-Lipschitz corpus
    {
        DLSchedule sched = DLSchedule::fast();
        sched.seed = args.seed;
        auto rep = certify_dl(fnlib::cube_root_sum(2), Vec{0.0, 0.0}, sched);
        double diag = -1.0 / std::sqrt(2.0);
        bool ok = rep.verdict == DLVerdict::DirectionallyLipschitz && rep.L <= 1e-3 &&
                  rep.u[0] * diag + rep.u[1] * diag >= 0.9;
        check("cuberoot-sum DL with diagonal witness", ok);
        auto neg = certify_dl(fnlib::abs_cube_root(-1.0), Vec{0.0}, sched);
        check("negative abs-cuberoot not DL",
              neg.verdict == DLVerdict::NotDirectionallyLipschitz);
    }

    // certificate corpus
    {
        MOProblem P;
        P.F.components = {fnlib::abs_x()};
        P.omega = ConstraintSet::whole_space(1);
        auto RP = RegularizedProblem::make(P, Vec{1.0}, 1.0, Vec{1.0});
        auto cert = certify_pareto(RP, Vec{0.5});
        check("scalar certificate stationary", cert.feasible && cert.stationarity <= 1e-8);
        CertifyOptions lit;
        lit.paper_convention = true;
        auto cert2 = certify_pareto(RP, Vec{0.5}, lit);
        check("paper-literal residual 0.5", std::abs(cert2.stationarity - 0.5) <= 1e-9);
    }

    // exact penalty corpus
    {
        auto pass = exact_penalty_check(fnlib::abs_x(), ConstraintSet::box(Vec{1.0}, Vec{2.0}),
                                        Vec{1.0}, 2.0, 0.5, 1e-3);
        check("penalty pass case", pass.pass);
        auto fail = exact_penalty_check(fnlib::cube_root(), ConstraintSet::box(Vec{0.0}, Vec{1.0}),
                                        Vec{0.0}, 1e6, 0.5, 1e-3);
        check("penalty documented counterexample", !fail.pass);
    }

    // solver corpus (coarse)
    {
        MOProblem P;
        P.F.components = {fnlib::square_x()};
        P.omega = ConstraintSet::whole_space(1);
        SolverConfig cfg;
        cfg.seed = args.seed;
        auto tr = solve_ppa(P, Vec{1.0}, 0.5, Vec{1.0}, cfg);
        bool ok = tr.iterates.size() >= 9 ? std::abs(tr.iterates[8][0]) <= 1e-3
                                          : std::abs(tr.iterates.back()[0]) <= 1e-3;
        check("scalar proximal contraction", ok);
    }

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? kExitOk : kExitNegative;
}

}  // namespace
