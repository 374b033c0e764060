#ifndef MOPROX_FUNCTION_HPP
#define MOPROX_FUNCTION_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "moprox/core.hpp"

namespace moprox {

/// Expression-tree node for extended-real-valued functions on R^n.
/// Evaluation is total on the declared domain and returns +inf outside it.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Op {
        Constant,     // value
        Affine,       // coeffs . x + offset
        Power,        // rational_pow(affine base, exponent)
        Abs,          // |args[0]|
        Square,       // args[0]^2
        SqNormShift,  // ||x - center||^2, center in coeffs
        Sum,          // args[0] + ... + args[k]
        Scale,        // value * args[0]
        Max,          // max(args...)
        Min,          // min(args...)
        Sin,          // sin(args[0])
        Oscillation,  // u * sin(1/u) with u = affine base (0 at u = 0)
    };

    Op op = Op::Constant;
    double value = 0.0;           // Constant value or Scale coefficient
    Vec coeffs;                   // Affine/Power/Oscillation base coefficients, SqNormShift center
    double offset = 0.0;          // Affine/Power/Oscillation base offset
    Rational exponent;            // Power
    std::vector<ExprPtr> args;
};

namespace expr {
ExprPtr constant(double c);
ExprPtr affine(Vec a, double b);
ExprPtr coord(int i, int dim);                       // x_i
ExprPtr power(Vec base_a, double base_b, Rational r);
ExprPtr power_coord(int i, int dim, Rational r);     // x_i^(p/q)
ExprPtr abs(ExprPtr e);
ExprPtr square(ExprPtr e);                           // canonicalizes powers
ExprPtr sqnorm_shift(Vec center);
ExprPtr sum(std::vector<ExprPtr> es);
ExprPtr scale(double c, ExprPtr e);
ExprPtr max_of(std::vector<ExprPtr> es);
ExprPtr min_of(std::vector<ExprPtr> es);
ExprPtr sin_of(ExprPtr e);
ExprPtr oscillation(Vec base_a, double base_b);
}  // namespace expr

double evaluate(const Expr& e, const Vec& x);
inline double evaluate(const ExprPtr& e, const Vec& x) { return evaluate(*e, x); }

/// Reads an expression as c0 + c1*x + c2*x^2 in one variable, when possible.
struct Quadratic1D {
    double c0 = 0, c1 = 0, c2 = 0;
};
std::optional<Quadratic1D> as_quadratic_1d(const Expr& e);

/// One affine inequality a.x <= b (or strict a.x < b) of a piece guard.
struct AffineIneq {
    Vec a;
    double b = 0.0;
    bool strict = false;
};

/// Guarded expression piece. Guards are conjunctions of affine inequalities;
/// an empty guard means the whole space.
struct Piece {
    std::vector<AffineIneq> guard;
    ExprPtr body;
};

struct PiecewiseFunction {
    int dim = 1;
    std::vector<Piece> pieces;
    bool declared_continuous = false;
    std::string name;
};

/// Value of the first piece whose guard holds at x; +inf outside the domain.
double evaluate(const PiecewiseFunction& f, const Vec& x);
double evaluate(const PiecewiseFunction& f, double x);  // 1-D shorthand

bool guard_holds(const std::vector<AffineIneq>& guard, const Vec& x);

/// 1-D piece domain as an interval with open/closed endpoint flags.
struct Interval1D {
    double lo = -kInf, hi = kInf;
    bool lo_open = false, hi_open = false;
    bool empty = false;
};
Interval1D piece_interval_1d(const Piece& p);

/// Construction-time validation: guard arities, 1-D interior disjointness,
/// and (when declared) continuity across sampled piece boundaries.
struct ValidationIssue {
    std::string message;
};
std::vector<ValidationIssue> validate(const PiecewiseFunction& f, double continuity_tol = 1e-12);

enum class CombineKind { Sum, Max };

/// Pointwise sum or max over the common refinement of the piece partitions.
/// Max splits along switching surfaces it can resolve (1-D affine/quadratic
/// bodies); otherwise the body keeps a max node.
PiecewiseFunction combine(CombineKind kind, const std::vector<PiecewiseFunction>& fs);

struct VectorFunction {
    std::vector<PiecewiseFunction> components;

    int dim() const { return components.empty() ? 0 : components.front().dim; }
    int objectives() const { return static_cast<int>(components.size()); }
};

Vec evaluate(const VectorFunction& F, const Vec& x);

/// Proximal regularization Psi with psi_i(x) = f_i(x) + lambda*||x-center||^2 * upsilon_i.
/// Requires lambda > 0, all upsilon_i > 0, ||upsilon|| = 1 within 1e-12, and
/// center in the domain of every component.
VectorFunction build_prox_objective(const VectorFunction& F, const Vec& center, double lambda,
                                    const Vec& upsilon);

// -- convenience builders used across tests and the bundled corpus --
namespace fnlib {
PiecewiseFunction from_expr(ExprPtr body, int dim, std::string name = "");
PiecewiseFunction abs_x();                       // |x| as a two-piece function
PiecewiseFunction abs_x_atom();                  // |x| as the single abs-node piece
PiecewiseFunction square_x();                    // x^2
PiecewiseFunction cube_root();                   // x^(1/3)
PiecewiseFunction neg_cube_root();               // -x^(1/3)
PiecewiseFunction abs_cube_root(double sign);    // sign*|x|^(1/3)
PiecewiseFunction cube_root_sum(int n);          // sum_i x_i^(1/3)
PiecewiseFunction oscillation_pair_component();  // x>0: x/2*sin(1/x);  x<=0: -x
PiecewiseFunction parabola_shift(double c);      // (x - c)^2
PiecewiseFunction cuberoot_or_parabola();        // x>0: x^(1/3);  x<=0: x^2+x
PiecewiseFunction min_x_zero();                  // min(x, 0) resolved into pieces
}  // namespace fnlib

}  // namespace moprox

#endif
