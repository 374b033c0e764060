#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "moprox/io.hpp"
#include "moprox/rng.hpp"

using namespace moprox;

namespace {
std::string data_path(const char* name) { return std::string(MOPROX_DATA_DIR) + "/" + name; }
}  // namespace

TEST_CASE("bundled problem files load and validate") {
    const char* files[] = {
        "cuberoot.json",         "cuberoot_sum_2d.json",         "cuberoot_oscillation_pair.json",
        "parabola_cuberoot_biobj.json", "scalar_abs_prox.json", "scalar_square_prox.json",
        "biobj_quadratics.json", "cuberoot_box.json",
    };
    for (const char* f : files) {
        auto pf = load_problem(data_path(f));
        CHECK(pf.version == kSchemaVersion);
        CHECK(pf.F.objectives() >= 1);
        for (const auto& comp : pf.F.components) CHECK(validate(comp).empty());
    }
}

TEST_CASE("loaded functions evaluate like the built-in corpus") {
    auto pf = load_problem(data_path("parabola_cuberoot_biobj.json"));
    auto native_f1 = fnlib::parabola_shift(-1.0);
    auto native_f2 = fnlib::cuberoot_or_parabola();
    Rng rng(0x10ad);
    for (int k = 0; k < 500; ++k) {
        double x = rng.uniform(-3.0, 3.0);
        CHECK(evaluate(pf.F.components[0], x) == evaluate(native_f1, x));
        CHECK(evaluate(pf.F.components[1], x) == evaluate(native_f2, x));
    }
    REQUIRE(pf.regularization.has_value());
    auto rp = pf.regularized();
    CHECK(rp.in_level_set(Vec{-1.0}));
}

TEST_CASE("problem round-trip preserves semantics") {
    for (const char* name : {"parabola_cuberoot_biobj.json", "cuberoot_box.json",
                             "cuberoot_oscillation_pair.json"}) {
        auto pf = load_problem(data_path(name));
        auto j = problem_to_json(pf);
        auto back = problem_from_json(j);
        CHECK(back.name == pf.name);
        CHECK(back.dimension == pf.dimension);
        CHECK(back.omega.kind() == pf.omega.kind());
        Rng rng(0x707);
        for (int k = 0; k < 200; ++k) {
            Vec x(pf.dimension);
            for (auto& c : x) c = rng.uniform(-2.0, 2.0);
            for (int i = 0; i < pf.F.objectives(); ++i) {
                double a = evaluate(pf.F.components[i], x);
                double b = evaluate(back.F.components[i], x);
                if (std::isfinite(a) || std::isfinite(b)) CHECK(a == b);
            }
        }
    }
}

TEST_CASE("expression round-trip covers every node kind") {
    auto e = expr::sum(
        {expr::scale(0.5, expr::oscillation(Vec{1.0}, 0.0)),
         expr::max_of({expr::abs(expr::coord(0, 1)), expr::constant(0.25)}),
         expr::min_of({expr::sqnorm_shift(Vec{1.0}), expr::power(Vec{2.0}, -1.0, Rational(1, 3))}),
         expr::sin_of(expr::affine(Vec{3.0}, 0.5)), expr::square(expr::coord(0, 1))});
    auto j = expr_to_json(*e);
    auto back = expr_from_json(j, 1);
    Rng rng(0xe0);
    for (int k = 0; k < 300; ++k) {
        Vec x{rng.uniform(-2.0, 2.0)};
        CHECK(evaluate(e, x) == evaluate(back, x));
    }
}

TEST_CASE("parse failures carry diagnostics") {
    CHECK_THROWS_AS(load_problem(data_path("missing.json")), ParseError);
    CHECK_THROWS_AS(problem_from_json(json{{"version", "0"}}), ParseError);
    CHECK_THROWS_AS(problem_from_json(json{{"version", "1"}}), ParseError);  // no dimension
    json p = {{"version", "1"},
              {"dimension", 1},
              {"objectives",
               json::array({{{"name", "f"},
                             {"pieces", json::array({{{"body", {{"op", "nosuch"}}}}})}}})}};
    CHECK_THROWS_AS(problem_from_json(p), ParseError);
    json bad_guard = {{"version", "1"},
                      {"dimension", 1},
                      {"objectives",
                       json::array({{{"name", "f"},
                                     {"pieces",
                                      json::array({{{"guard",
                                                     json::array({{{"a", {1.0, 2.0}}, {"b", 0.0}}})},
                                                    {"body", {{"op", "const"}, {"value", 1.0}}}}})}}})}};
    CHECK_THROWS_AS(problem_from_json(bad_guard), ParseError);
    // overlapping interiors are rejected at load time
    json overlap = {{"version", "1"},
                    {"dimension", 1},
                    {"objectives",
                     json::array({{{"name", "f"},
                                   {"pieces",
                                    json::array({{{"body", {{"op", "const"}, {"value", 0.0}}}},
                                                 {{"body", {{"op", "const"}, {"value", 1.0}}}}})}}})}};
    CHECK_THROWS_AS(problem_from_json(overlap), ParseError);
}

TEST_CASE("run reports round-trip without loss") {
    RunReport rep;
    rep.command = "pareto";
    rep.inputs_digest = digest_hex("some input bytes");
    rep.outputs = {{"count", 501}, {"hull_lo", -1.0}, {"hull_hi", -0.5}};
    rep.wall_time_s = 0.125;
    rep.seed = 0x5eed;
    auto j = rep.to_json();
    auto back = RunReport::from_json(json::parse(j.dump()));
    CHECK(back == rep);
}

TEST_CASE("digest is stable and input-sensitive") {
    CHECK(digest_hex("abc") == digest_hex("abc"));
    CHECK(digest_hex("abc") != digest_hex("abd"));
    CHECK(digest_hex("").size() == 16);
}

TEST_CASE("atomic write replaces the target in one step") {
    std::string path = "io_test_report.json";
    atomic_write(path, "{\"a\":1}\n");
    atomic_write(path, "{\"a\":2}\n");
    std::ifstream in(path);
    json j;
    in >> j;
    CHECK(j.at("a") == 2);
    std::remove(path.c_str());
}

TEST_CASE("realset serialization") {
    auto s = RealSet1D::ray_up(0.0).union_with(RealSet1D::point(-2.0));
    auto j = realset_to_json(s);
    REQUIRE(j.size() == 2);
    CHECK(j[0].at("lo") == -2.0);
    CHECK(j[1].at("hi") == "inf");
}
