#ifndef MOPROX_CORE_HPP
#define MOPROX_CORE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace moprox {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

inline Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec+: dimension mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec-: dimension mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(double c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Rational exponent kept in lowest terms with positive denominator.
struct Rational {
    long long num = 1;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool odd_denominator() const { return den % 2 != 0; }
    bool is_integer() const { return den == 1; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// Signed real power s^(p/q). Odd denominators use the real signed root so
/// that e.g. (-8)^(1/3) = -2; even denominators are restricted to s >= 0
/// (returns +inf outside the domain, matching the (-inf,inf] codomain).
inline double rational_pow(double s, const Rational& r) {
    if (r.num == 0) return 1.0;
    if (s == 0.0) return r.num > 0 ? 0.0 : kInf;
    double mag = std::abs(s);
    double sign_factor = 1.0;
    if (s < 0.0) {
        if (!r.odd_denominator()) return kInf;  // outside domain
        sign_factor = (r.num % 2 != 0) ? -1.0 : 1.0;
    }
    double root;
    switch (r.den) {
        case 1: root = mag; break;
        case 2: root = std::sqrt(mag); break;
        case 3: root = std::cbrt(mag); break;
        default: root = std::pow(mag, 1.0 / static_cast<double>(r.den)); break;
    }
    double p = static_cast<double>(r.num < 0 ? -r.num : r.num);
    double v = std::pow(root, p);
    if (r.num < 0) v = 1.0 / v;
    return sign_factor * v;
}

}  // namespace moprox

#endif
