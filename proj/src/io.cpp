#include "moprox/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace moprox {

namespace {

json number_or_inf(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
}

double inf_or_number(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ParseError("expected a number or \"inf\"/\"-inf\", got \"" + s + "\"");
    }
    if (j.is_null()) return kInf;
    if (!j.is_number()) throw ParseError("expected a number");
    return j.get<double>();
}

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of numbers");
    Vec v;
    for (const auto& e : j) v.push_back(inf_or_number(e));
    return v;
}

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (double c : v) a.push_back(number_or_inf(c));
    return a;
}

}  // namespace

json expr_to_json(const Expr& e) {
    json j;
    switch (e.op) {
        case Expr::Op::Constant:
            j["op"] = "const";
            j["value"] = e.value;
            break;
        case Expr::Op::Affine:
            j["op"] = "affine";
            j["a"] = vec_to_json(e.coeffs);
            j["b"] = e.offset;
            break;
        case Expr::Op::Power:
            j["op"] = "power";
            j["a"] = vec_to_json(e.coeffs);
            j["b"] = e.offset;
            j["num"] = e.exponent.num;
            j["den"] = e.exponent.den;
            break;
        case Expr::Op::Abs:
            j["op"] = "abs";
            j["arg"] = expr_to_json(*e.args[0]);
            break;
        case Expr::Op::Square:
            j["op"] = "square";
            j["arg"] = expr_to_json(*e.args[0]);
            break;
        case Expr::Op::SqNormShift:
            j["op"] = "sqnorm";
            j["center"] = vec_to_json(e.coeffs);
            break;
        case Expr::Op::Sum:
            j["op"] = "sum";
            j["args"] = json::array();
            for (const auto& a : e.args) j["args"].push_back(expr_to_json(*a));
            break;
        case Expr::Op::Scale:
            j["op"] = "scale";
            j["c"] = e.value;
            j["arg"] = expr_to_json(*e.args[0]);
            break;
        case Expr::Op::Max:
        case Expr::Op::Min:
            j["op"] = e.op == Expr::Op::Max ? "max" : "min";
            j["args"] = json::array();
            for (const auto& a : e.args) j["args"].push_back(expr_to_json(*a));
            break;
        case Expr::Op::Sin:
            j["op"] = "sin";
            j["arg"] = expr_to_json(*e.args[0]);
            break;
        case Expr::Op::Oscillation:
            j["op"] = "oscillation";
            j["a"] = vec_to_json(e.coeffs);
            j["b"] = e.offset;
            break;
    }
    return j;
}

ExprPtr expr_from_json(const json& j, int dim) {
    if (!j.is_object() || !j.contains("op")) throw ParseError("expression node must carry \"op\"");
    const std::string op = j.at("op").get<std::string>();
    auto need = [&](const char* k) -> const json& {
        if (!j.contains(k)) throw ParseError("expression \"" + op + "\" missing field \"" + k + "\"");
        return j.at(k);
    };
    auto check_dim = [&](const Vec& v, const char* what) {
        if (static_cast<int>(v.size()) != dim)
            throw ParseError(std::string(what) + " has dimension " + std::to_string(v.size()) +
                             ", expected " + std::to_string(dim));
    };
    if (op == "const") return expr::constant(need("value").get<double>());
    if (op == "affine") {
        Vec a = vec_from_json(need("a"));
        check_dim(a, "affine coefficient vector");
        return expr::affine(std::move(a), j.value("b", 0.0));
    }
    if (op == "power") {
        Vec a = vec_from_json(need("a"));
        check_dim(a, "power base");
        long long num = need("num").get<long long>();
        long long den = need("den").get<long long>();
        return expr::power(std::move(a), j.value("b", 0.0), Rational(num, den));
    }
    if (op == "abs") return expr::abs(expr_from_json(need("arg"), dim));
    if (op == "square") return expr::square(expr_from_json(need("arg"), dim));
    if (op == "sqnorm") {
        Vec c = vec_from_json(need("center"));
        check_dim(c, "sqnorm center");
        return expr::sqnorm_shift(std::move(c));
    }
    if (op == "sum" || op == "max" || op == "min") {
        std::vector<ExprPtr> args;
        for (const auto& a : need("args")) args.push_back(expr_from_json(a, dim));
        if (args.empty()) throw ParseError("\"" + op + "\" needs at least one argument");
        if (op == "sum") return expr::sum(std::move(args));
        if (op == "max") return expr::max_of(std::move(args));
        return expr::min_of(std::move(args));
    }
    if (op == "scale") return expr::scale(need("c").get<double>(), expr_from_json(need("arg"), dim));
    if (op == "sin") return expr::sin_of(expr_from_json(need("arg"), dim));
    if (op == "oscillation") {
        Vec a = vec_from_json(need("a"));
        check_dim(a, "oscillation base");
        return expr::oscillation(std::move(a), j.value("b", 0.0));
    }
    throw ParseError("unknown expression op \"" + op + "\"");
}

json function_to_json(const PiecewiseFunction& f) {
    json j;
    j["name"] = f.name;
    j["continuous"] = f.declared_continuous;
    j["pieces"] = json::array();
    for (const auto& p : f.pieces) {
        json pj;
        pj["guard"] = json::array();
        for (const auto& g : p.guard) {
            json gj;
            gj["a"] = vec_to_json(g.a);
            gj["b"] = g.b;
            if (g.strict) gj["strict"] = true;
            pj["guard"].push_back(gj);
        }
        pj["body"] = expr_to_json(*p.body);
        j["pieces"].push_back(pj);
    }
    return j;
}

PiecewiseFunction function_from_json(const json& j, int dim) {
    PiecewiseFunction f;
    f.dim = dim;
    f.name = j.value("name", "");
    f.declared_continuous = j.value("continuous", false);
    if (!j.contains("pieces") || !j.at("pieces").is_array() || j.at("pieces").empty())
        throw ParseError("objective \"" + f.name + "\" needs a nonempty \"pieces\" array");
    for (const auto& pj : j.at("pieces")) {
        Piece p;
        if (pj.contains("guard")) {
            for (const auto& gj : pj.at("guard")) {
                AffineIneq g;
                g.a = vec_from_json(gj.at("a"));
                if (static_cast<int>(g.a.size()) != dim)
                    throw ParseError("guard row dimension mismatch in \"" + f.name + "\"");
                g.b = gj.at("b").get<double>();
                g.strict = gj.value("strict", false);
                p.guard.push_back(std::move(g));
            }
        }
        p.body = expr_from_json(pj.at("body"), dim);
        f.pieces.push_back(std::move(p));
    }
    auto issues = validate(f);
    if (!issues.empty())
        throw ParseError("objective \"" + f.name + "\" failed validation: " + issues.front().message);
    return f;
}

json constraint_to_json(const ConstraintSet& c) {
    json j;
    switch (c.kind()) {
        case ConstraintSet::Kind::WholeSpace:
            j["kind"] = "all";
            break;
        case ConstraintSet::Kind::Box:
            j["kind"] = "box";
            j["lo"] = vec_to_json(c.lower());
            j["hi"] = vec_to_json(c.upper());
            break;
        case ConstraintSet::Kind::Polyhedron: {
            j["kind"] = "polyhedron";
            j["rows"] = json::array();
            for (const auto& r : c.rows()) {
                json rj;
                rj["a"] = vec_to_json(r.a);
                rj["b"] = r.b;
                j["rows"].push_back(rj);
            }
            break;
        }
    }
    return j;
}

ConstraintSet constraint_from_json(const json& j, int dim) {
    const std::string kind = j.value("kind", "all");
    if (kind == "all") return ConstraintSet::whole_space(dim);
    if (kind == "box") {
        Vec lo = vec_from_json(j.at("lo"));
        Vec hi = vec_from_json(j.at("hi"));
        for (auto& v : lo)
            if (v == kInf) v = -kInf;  // "inf"/null in lo means unbounded below
        if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
            throw ParseError("box bounds dimension mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (lo[i] > hi[i]) throw ParseError("box lower bound exceeds upper bound");
        return ConstraintSet::box(std::move(lo), std::move(hi));
    }
    if (kind == "polyhedron") {
        std::vector<ConstraintSet::Row> rows;
        for (const auto& rj : j.at("rows"))
            rows.push_back({vec_from_json(rj.at("a")), rj.at("b").get<double>()});
        Vec fp = vec_from_json(j.at("feasible_point"));
        return ConstraintSet::polyhedron(dim, std::move(rows), std::move(fp));
    }
    throw ParseError("unknown constraint kind \"" + kind + "\"");
}

json realset_to_json(const RealSet1D& s) {
    json j = json::array();
    for (const auto& piece : s.convex_pieces()) {
        json pj;
        pj["lo"] = number_or_inf(piece.lo);
        pj["hi"] = number_or_inf(piece.hi);
        j.push_back(pj);
    }
    return j;
}

RegularizedProblem ProblemFile::regularized() const {
    if (!regularization) throw ParseError("problem \"" + name + "\" has no regularization block");
    return RegularizedProblem::make(problem(), regularization->center, regularization->lambda,
                                    regularization->upsilon);
}

ProblemFile problem_from_json(const json& j) {
    ProblemFile p;
    p.version = j.value("version", "");
    if (p.version != kSchemaVersion)
        throw ParseError("unsupported problem schema version \"" + p.version + "\" (expected \"" +
                         kSchemaVersion + "\")");
    p.name = j.value("name", "");
    if (!j.contains("dimension")) throw ParseError("problem file missing \"dimension\"");
    p.dimension = j.at("dimension").get<int>();
    if (p.dimension < 1) throw ParseError("dimension must be >= 1");
    if (!j.contains("objectives") || !j.at("objectives").is_array() || j.at("objectives").empty())
        throw ParseError("problem file needs a nonempty \"objectives\" array");
    for (const auto& fj : j.at("objectives"))
        p.F.components.push_back(function_from_json(fj, p.dimension));
    p.omega = j.contains("constraint") ? constraint_from_json(j.at("constraint"), p.dimension)
                                       : ConstraintSet::whole_space(p.dimension);
    if (j.contains("regularization")) {
        const auto& rj = j.at("regularization");
        Regularization reg;
        reg.center = vec_from_json(rj.at("center"));
        reg.lambda = rj.at("lambda").get<double>();
        reg.upsilon = vec_from_json(rj.at("upsilon"));
        if (static_cast<int>(reg.center.size()) != p.dimension)
            throw ParseError("regularization center dimension mismatch");
        if (reg.upsilon.size() != p.F.components.size())
            throw ParseError("regularization upsilon must have one entry per objective");
        p.regularization = std::move(reg);
    }
    if (j.contains("expected")) p.expected = j.at("expected");
    return p;
}

json problem_to_json(const ProblemFile& p) {
    json j;
    j["version"] = p.version;
    j["name"] = p.name;
    j["dimension"] = p.dimension;
    j["objectives"] = json::array();
    for (const auto& f : p.F.components) j["objectives"].push_back(function_to_json(f));
    j["constraint"] = constraint_to_json(p.omega);
    if (p.regularization) {
        json rj;
        rj["center"] = vec_to_json(p.regularization->center);
        rj["lambda"] = p.regularization->lambda;
        rj["upsilon"] = vec_to_json(p.regularization->upsilon);
        j["regularization"] = rj;
    }
    if (!p.expected.is_null()) j["expected"] = p.expected;
    return j;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("problem file " + path + " is not valid JSON: " + e.what());
    }
    try {
        return problem_from_json(j);
    } catch (const json::exception& e) {
        throw ParseError("problem file " + path + ": " + e.what());
    }
}

json RunReport::to_json() const {
    json j;
    j["command"] = command;
    j["inputs_digest"] = inputs_digest;
    j["outputs"] = outputs;
    j["wall_time_s"] = wall_time_s;
    j["tool_version"] = tool_version;
    j["seed"] = seed;
    return j;
}

RunReport RunReport::from_json(const json& j) {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.inputs_digest = j.at("inputs_digest").get<std::string>();
    r.outputs = j.at("outputs");
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void atomic_write(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << contents;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace moprox
