#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wapprox/polyline.hpp"
#include "wapprox/sample_path.hpp"

namespace wapprox {

struct oracle_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QpOptions {
    double objective_tol = 1e-12;  // relative objective change per sweep
    double kkt_tol = 1e-10;
    std::size_t max_sweeps = 500000;
    double omega = 1.9;  // projected SOR relaxation
};

/// Independent optimality oracle for the unilateral approximation problem:
/// minimizes sum (h_{i+1}-h_i)^2/dt_i subject to h_0 = r and h_i >= w_i,
/// by projected SOR (coordinate descent with over-relaxation). Intended for
/// small instances (<= 200 knots); used to cross-check the hull construction.
inline EnergyValue qp_oracle_min_energy(const SamplePath& path, double r,
                                        const QpOptions& opt = QpOptions{}) {
    path.validate();
    const std::size_t n = path.size();
    if (n > 200)
        throw std::invalid_argument("qp oracle: instance too large (max 200 knots)");
    if (!(r > path.values.front()))
        throw std::invalid_argument("qp oracle: need r > path(0)");

    std::vector<double> dt(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) dt[i] = path.times[i + 1] - path.times[i];

    // start from the feasible constant-then-clipped profile
    std::vector<double> h(n);
    h[0] = r;
    for (std::size_t i = 1; i < n; ++i) h[i] = std::max(r, path.values[i]);

    const auto objective = [&] {
        double e = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dy = h[i + 1] - h[i];
            e += dy * dy / dt[i];
        }
        return e;
    };

    // projected unconstrained coordinate minimizer of h_i given its neighbors
    const auto projected_target = [&](std::size_t i) {
        double target;
        if (i + 1 < n) {
            const double wl = 1.0 / dt[i - 1], wr = 1.0 / dt[i];
            target = (h[i - 1] * wl + h[i + 1] * wr) / (wl + wr);
        } else {
            target = h[i - 1];
        }
        return std::max(target, path.values[i]);
    };

    double prev_obj = objective();
    double scale = 1.0 + std::abs(r);
    for (double v : h) scale = std::max(scale, std::abs(v));
    for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        for (std::size_t i = 1; i < n; ++i) {
            const double target = projected_target(i);
            const double relaxed = h[i] + opt.omega * (target - h[i]);
            h[i] = std::max(relaxed, path.values[i]);
        }
        const double obj = objective();
        if (std::abs(prev_obj - obj) <= opt.objective_tol * (1.0 + obj)) {
            // fixed-point residual of the projected coordinate map; this is
            // scale-invariant in time (unlike the raw gradient on grids with
            // widely varying cell widths)
            double residual = 0.0;
            for (std::size_t i = 1; i < n; ++i)
                residual = std::max(residual, std::abs(h[i] - projected_target(i)));
            if (residual <= opt.kkt_tol * scale) return EnergyValue{obj};
        }
        prev_obj = obj;
    }
    throw oracle_failure("qp oracle: projected SOR did not converge");
}

}  // namespace wapprox
