#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace wapprox {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b].
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-10, int max_depth = 52) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, tol, max_depth);
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Integral over [a, infinity) for integrands with fast decay: widens panels
/// geometrically until a panel contributes less than the tolerance.
template <typename F>
double integrate_to_infinity(const F& f, double a, double tol = 1e-10,
                             double initial_width = 1.0, int max_panels = 200) {
    double total = 0.0;
    double lo = a, width = initial_width;
    for (int k = 0; k < max_panels; ++k) {
        const double hi = lo + width;
        const double panel = integrate(f, lo, hi, tol * 0.25);
        total += panel;
        if (std::abs(panel) < tol * (1.0 + std::abs(total)) && k > 2) return total;
        lo = hi;
        width *= 2.0;
    }
    throw std::runtime_error("integrate_to_infinity: no convergence (slow decay?)");
}

}  // namespace wapprox
