#pragma once

// Self-contained reference implementations used to cross-check the library.
// Nothing here calls into rfbmlab: quadrature, special functions, and
// finite differences are written from scratch so a bug in the library cannot
// hide in its own oracle.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

namespace detail {

inline double simpson(const Fn& f, double a, double fa, double b, double fb, double m,
                      double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double quad_rec(const Fn& f, double a, double fa, double b, double fb, double m,
                       double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    // roundoff floor: the panel no longer subdivides meaningfully
    if (depth <= 0 || b - a <= 64.0 * std::fabs(m) * 2.220446049250313e-16 || lm <= a ||
        rm >= b)
        return left + right + delta / 15.0;
    return quad_rec(f, a, fa, m, fm, lm, flm, left, std::fmax(0.5 * tol, 1e-17), depth - 1) +
           quad_rec(f, m, fm, b, fb, rm, frm, right, std::fmax(0.5 * tol, 1e-17), depth - 1);
}

}  // namespace detail

// adaptive Simpson with Richardson acceptance
inline double quad(const Fn& f, double a, double b, double tol, int depth = 50) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::quad_rec(f, a, fa, b, fb, m, fm, whole, tol, depth);
}

// integral of f over (0, b] when f(x) ~ x^p near zero, p > -1; substitutes
// x = b tau^r with r = 2 / (1 + p) so the transformed integrand vanishes
// linearly at tau = 0
inline double power_integral(const Fn& f, double b, double p, double tol) {
    if (!(p > -1.0)) throw std::invalid_argument("oracle power_integral: need p > -1");
    const double r = 2.0 / (1.0 + p);
    auto g = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        const double x = b * std::pow(tau, r);
        return f(x) * b * r * std::pow(tau, r - 1.0);
    };
    return quad(g, 0.0, 1.0, tol);
}

// Gauss hypergeometric by the Euler integral
//   2F1(a,b;c;z) = Gamma(c) / (Gamma(b) Gamma(c-b))
//                  int_0^1 t^(b-1) (1-t)^(c-b-1) (1-zt)^(-a) dt
// for c > b > 0 and z < 1. The two halves are substituted (t = u^2 and
// t = 1 - v^2) so the endpoint powers stay integrable for b >= 1/2 and
// c - b >= 1/2.
inline double hyp2f1_euler(double a, double b, double c, double z, double tol = 1e-11) {
    if (!(c > b && b > 0.0)) throw std::invalid_argument("oracle hyp2f1: need c > b > 0");
    if (!(z < 1.0)) throw std::invalid_argument("oracle hyp2f1: need z < 1");
    auto left = [&](double u) {
        const double t = u * u;
        return 2.0 * std::pow(u, 2.0 * b - 1.0) * std::pow(1.0 - t, c - b - 1.0) *
               std::pow(1.0 - z * t, -a);
    };
    auto right = [&](double v) {
        const double t = 1.0 - v * v;
        return 2.0 * std::pow(v, 2.0 * (c - b) - 1.0) * std::pow(t, b - 1.0) *
               std::pow(1.0 - z * t, -a);
    };
    const double integral =
        quad(left, 0.0, std::sqrt(0.5), tol) + quad(right, 0.0, std::sqrt(0.5), tol);
    const double prefactor =
        std::exp(std::lgamma(c) - std::lgamma(b) - std::lgamma(c - b));
    return prefactor * integral;
}

inline double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Richardson-extrapolated central difference
inline double deriv(const Fn& f, double x, double h = 1e-5) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// compensated (Kahan) sum, reference reduction for determinism checks
inline double ksum(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace oracle
