#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wapprox/quadrature.hpp"

namespace wapprox {

/// Physicists' Hermite polynomial H_k by the three-term recurrence
/// H_{k+1}(x) = 2x H_k(x) - 2k H_{k-1}(x).
inline double hermite_polynomial(int k, double x) {
    if (k < 0) throw std::domain_error("hermite_polynomial: order must be nonnegative");
    double h0 = 1.0;
    if (k == 0) return h0;
    double h1 = 2.0 * x;
    for (int j = 1; j < k; ++j) {
        const double h2 = 2.0 * x * h1 - 2.0 * static_cast<double>(j) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

/// Eigenfunctions of -4 y'' + x^2 y = gamma y on [0, inf) with y(0) = 0:
/// psi_k(x) = (2^k k!)^{-1/2} (2/pi)^{1/4} H_k(x/sqrt 2) exp(-x^2/4) for odd k,
/// with eigenvalue gamma_k = 2(2k+1). Even k violates the boundary condition.
inline double hermite_psi(int k, double x) {
    if (k < 1 || k % 2 == 0)
        throw std::domain_error("hermite_psi: order must be odd and positive");
    double norm = 1.0;
    for (int j = 1; j <= k; ++j) norm *= 2.0 * static_cast<double>(j);  // 2^k k!
    return std::pow(2.0 / M_PI, 0.25) / std::sqrt(norm) *
           hermite_polynomial(k, x * M_SQRT1_2) * std::exp(-0.25 * x * x);
}

inline double oscillator_eigenvalue(int k) { return 2.0 * (2.0 * k + 1.0); }

/// Lowest eigenpairs of the finite-difference discretization of
/// -4 y'' + x^2 y = gamma y on [0, L], y(0) = y(L) = 0.
struct EigenSolution {
    double domain_cutoff = 0.0;
    std::size_t grid_size = 0;  // number of cells n; h = L/n
    double step = 0.0;
    std::vector<double> eigenvalues;                 // ascending
    std::vector<std::vector<double>> eigenvectors;   // n+1 values incl. boundary zeros,
                                                     // unit discrete L2 norm
    std::vector<std::string> warnings;
};

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag, off)
/// strictly below lambda, by the Sturm sequence of the LDL^T pivots.
inline std::size_t sturm_count(const std::vector<double>& diag, double off_sq,
                               double lambda) {
    std::size_t count = 0;
    double d_prev = 0.0;
    bool first = true;
    for (const double a : diag) {
        double d = a - lambda;
        if (!first) d -= off_sq / (d_prev != 0.0 ? d_prev : 1e-300);
        first = false;
        if (d < 0.0) ++count;
        if (d == 0.0) d = -1e-300;
        d_prev = d;
    }
    return count;
}

/// Tridiagonal solve (Thomas with a fixed tiny-pivot guard), for inverse
/// iteration; diag is (a_i - shift), off is constant.
inline void tridiag_solve(std::vector<double> diag, double off, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(diag[i - 1]) < 1e-300) diag[i - 1] = 1e-300;
        const double m = off / diag[i - 1];
        diag[i] -= m * off;
        rhs[i] -= m * rhs[i - 1];
    }
    if (std::abs(diag[n - 1]) < 1e-300) diag[n - 1] = 1e-300;
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off * rhs[i + 1]) / diag[i];
}

}  // namespace detail

inline EigenSolution solve_sturm_liouville(double L, std::size_t n, std::size_t m) {
    if (!(L > 0.0)) throw std::invalid_argument("sturm_liouville: cutoff must be positive");
    if (n < 16) throw std::invalid_argument("sturm_liouville: grid too coarse");
    if (m < 1 || m > 6) throw std::invalid_argument("sturm_liouville: 1 <= m <= 6 eigenpairs");

    EigenSolution sol;
    sol.domain_cutoff = L;
    sol.grid_size = n;
    const double h = L / static_cast<double>(n);
    sol.step = h;
    if (n < 1000) sol.warnings.push_back("grid may be too coarse for quoted accuracies (n < 1000)");
    if (L < 10.0) sol.warnings.push_back("domain cutoff below 10; eigenfunction tails may be clipped");

    // interior points x_i = i h, i = 1..n-1
    const std::size_t dim = n - 1;
    std::vector<double> diag(dim);
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t i = 0; i < dim; ++i) {
        const double x = h * static_cast<double>(i + 1);
        diag[i] = 8.0 * inv_h2 + x * x;
    }
    const double off = -4.0 * inv_h2;
    const double off_sq = off * off;

    // Gershgorin upper bound for bisection
    double upper = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        upper = std::max(upper, diag[i] + 2.0 * std::abs(off));

    sol.eigenvalues.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lo = 0.0, hi = upper;
        while (hi - lo > 1e-12 * (1.0 + std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            if (detail::sturm_count(diag, off_sq, mid) >= k + 1)
                hi = mid;
            else
                lo = mid;
        }
        sol.eigenvalues[k] = 0.5 * (lo + hi);
    }

    // inverse iteration per eigenvalue
    sol.eigenvectors.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double shift = sol.eigenvalues[k] * (1.0 + 1e-11) + 1e-11;
        std::vector<double> shifted(dim);
        for (std::size_t i = 0; i < dim; ++i) shifted[i] = diag[i] - shift;
        std::vector<double> v(dim, 1.0);
        for (std::size_t i = 0; i < dim; ++i)
            v[i] = std::sin(static_cast<double>((k + 1) * (i + 1)) * M_PI /
                            static_cast<double>(dim + 1));
        for (int it = 0; it < 6; ++it) {
            detail::tridiag_solve(shifted, off, v);
            double norm = 0.0;
            for (const double c : v) norm += c * c;
            norm = std::sqrt(norm);
            for (double& c : v) c /= norm;
        }
        // discrete L2 normalization and sign convention
        double norm = 0.0;
        for (const double c : v) norm += c * c * h;
        norm = std::sqrt(norm);
        double sign = 1.0;
        for (const double c : v)
            if (std::abs(c) > 1e-12) {
                sign = c > 0.0 ? 1.0 : -1.0;
                break;
            }
        std::vector<double> full(n + 1, 0.0);
        for (std::size_t i = 0; i < dim; ++i) full[i + 1] = sign * v[i] / norm;
        if (std::abs(full[n - 1]) > 1e-6 * std::abs(full[dim / 2]))
            sol.warnings.push_back("eigenfunction tail not negligible at the cutoff");
        sol.eigenvectors[k] = std::move(full);
    }
    return sol;
}

/// Quadratic form G(y, z) = int (4 y' z' + x^2 y z) dx on a uniform grid
/// x_i = i h: difference quotients per cell plus trapezoid weights.
inline double quadratic_form_g(const std::vector<double>& y, const std::vector<double>& z,
                               double h) {
    if (y.size() != z.size() || y.size() < 2)
        throw std::domain_error("quadratic_form_g: grids must match");
    if (!(h > 0.0)) throw std::domain_error("quadratic_form_g: need positive step");
    double grad = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i)
        grad += (y[i] - y[i - 1]) * (z[i] - z[i - 1]);
    grad *= 4.0 / h;
    double pot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = h * static_cast<double>(i);
        const double w = (i == 0 || i + 1 == y.size()) ? 0.5 : 1.0;
        pot += w * x * x * y[i] * z[i];
    }
    return grad + pot * h;
}

/// Density candidate for the energy-rate functional. `derivative` may be
/// empty; central differences with step 1e-5 are used then.
struct DensityCandidate {
    std::function<double(double)> p;
    std::function<double(double)> derivative;  // optional
    double support_hint = 12.0;                // where the mass has decayed
};

/// Energy-rate functional J(p) = int (p'^2/p + x^2 p) dx over (0, inf), with
/// the integrand extended by 0 where p vanishes. Returns nullopt when the
/// integral diverges near 0 (probed on a shrinking sequence of lower ends)
/// or exceeds 1e6.
inline std::optional<double> j_functional(const DensityCandidate& cand) {
    const auto dp = [&](double x) {
        if (cand.derivative) return cand.derivative(x);
        const double step = std::min(1e-5, 0.5 * x);  // stay inside (0, 2x) near zero
        return (cand.p(x + step) - cand.p(x - step)) / (2.0 * step);
    };
    const auto integrand = [&](double x) {
        const double px = cand.p(x);
        if (px <= 0.0) return 0.0;
        const double d = dp(x);
        return d * d / px + x * x * px;
    };

    // upper part, expanding cutoff
    double hi = std::max(cand.support_hint, 1.0);
    double total = integrate(integrand, 1e-2, hi, 1e-10);
    double width = hi;
    for (int k = 0; k < 60; ++k) {
        const double panel = integrate(integrand, hi, hi + width, 1e-11);
        total += panel;
        hi += width;
        width *= 2.0;
        if (panel < 1e-11 * (1.0 + total)) break;
        if (total > 1e6) return std::nullopt;
    }

    // lower strips 1e-4..1e-2, 1e-6..1e-4, ...: convergent integrands decay
    // geometrically here; logarithmic divergence keeps the strips flat
    double prev_strip = -1.0;
    double lo = 1e-2;
    for (int k = 0; k < 5; ++k) {
        const double next = lo * 1e-2;
        const double strip = integrate(integrand, next, lo, 1e-12);
        total += strip;
        if (total > 1e6) return std::nullopt;
        if (prev_strip >= 0.0 && strip > 1e-9 && strip > 0.5 * prev_strip)
            return std::nullopt;  // non-shrinking strips: divergent at 0
        prev_strip = strip;
        lo = next;
    }
    return total;
}

}  // namespace wapprox
