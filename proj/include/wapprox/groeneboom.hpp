#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wapprox/grid.hpp"
#include "wapprox/majorant.hpp"
#include "wapprox/normal.hpp"
#include "wapprox/polyline.hpp"
#include "wapprox/quadrature.hpp"
#include "wapprox/rng.hpp"
#include "wapprox/sample_path.hpp"
#include "wapprox/wiener.hpp"

namespace wapprox {

/// Last time the tilted path W(t) - t/a attains its maximum over the knots.
/// `truncated` is set when the argmax falls into the final 10% of the
/// simulated horizon, i.e. the global argmax may have been censored.
struct TauSample {
    double a = 1.0;
    double tau = 0.0;
    bool truncated = false;
};

inline TauSample tau(const SamplePath& path, double a) {
    path.validate();
    if (!(a > 0.0)) throw std::invalid_argument("tau: a must be positive");
    if (path.times.front() != 0.0) throw std::invalid_argument("tau: path must start at 0");
    std::size_t best = 0;
    double best_v = path.values[0];  // tilted value at t = 0
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double v = path.values[i] - path.times[i] / a;
        if (v >= best_v) {  // >= keeps the last argmax
            best_v = v;
            best = i;
        }
    }
    const double t = path.times[best];
    return TauSample{a, t, t > 0.9 * path.times.back()};
}

/// Density of tau(a)/a^2: q(t) = 2 E(X/sqrt(t) - 1)_+ for standard normal X;
/// in closed form 2 (phi(s)/s - (1 - Phi(s))) with s = sqrt(t).
inline double q_density(double t) {
    if (!(t > 0.0)) throw std::domain_error("q_density: t must be positive");
    const double s = std::sqrt(t);
    return 2.0 * (normal_pdf(s) / s - normal_sf(s));
}

/// CDF of tau(a)/a^2 by adaptive quadrature of q_density on [0, t].
/// Integrated in the variable s = sqrt(t), where the integrand
/// 2 s q(s^2) = 4 (phi(s) - s (1 - Phi(s))) is smooth at 0 (q itself has an
/// integrable t^{-1/2} singularity).
inline double q_cdf(double t) {
    if (t < 0.0) throw std::domain_error("q_cdf: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double s_hi = std::sqrt(std::min(t, 400.0));  // tail beyond is < 1e-16
    const double v = integrate(
        [](double s) { return 4.0 * (normal_pdf(s) - s * normal_sf(s)); }, 0.0, s_hi,
        1e-12);
    return std::min(v, 1.0);
}

struct TauGridOptions {
    double horizon_factor = 40.0;   // horizon = factor * a^2; tail mass < 1e-8
    double first_cell_frac = 1e-5;  // first cell = frac * a^2 (q concentrates near 0)
    double ratio = 1.01;
};

inline GridSpec make_tau_grid(double a, const TauGridOptions& opt = TauGridOptions{}) {
    if (!(a > 0.0)) throw std::invalid_argument("make_tau_grid: a must be positive");
    return GridSpec::geometric_from_first_cell(opt.horizon_factor * a * a,
                                               opt.first_cell_frac * a * a, opt.ratio);
}

/// Energy of a concave majorant accumulated between two times:
/// the exact integral of the squared hull slope over [a, b] (partial
/// segments pro-rated). Additive: L(a,b) + L(b,c) = L(a,c) on a fixed hull.
struct LValue {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
};

inline LValue majorant_energy_between(const PolylineFunction& hull, double t1, double t2) {
    hull.validate();
    if (!(t1 <= t2) || t1 < hull.times.front() || t2 > hull.times.back())
        throw std::domain_error("majorant_energy_between: times out of range");
    double e = 0.0;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const double lo = std::max(hull.times[i - 1], t1);
        const double hi = std::min(hull.times[i], t2);
        if (hi <= lo) continue;
        const double slope =
            (hull.values[i] - hull.values[i - 1]) / (hull.times[i] - hull.times[i - 1]);
        e += slope * slope * (hi - lo);
    }
    return LValue{t1, t2, e};
}

/// Streams a Wiener path over `times` directly into a concave hull builder.
/// Memory stays proportional to the hull size, not the knot count.
inline ConcaveHullBuilder build_wiener_hull(const std::vector<double>& times,
                                            RngStream& stream) {
    ConcaveHullBuilder b;
    b.push(times[0], 0.0);
    double w = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        w += stream.gaussian() * std::sqrt(times[i] - times[i - 1]);
        b.push(times[i], w);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Strong-law experiment for L(1, V) / log V
// ---------------------------------------------------------------------------

struct SllnOptions {
    double horizon_factor = 40.0;
    double first_cell = 1e-5;
    // Finer than the tau grids: the hull of a sampled path is flatter than
    // the true majorant, which biases L low by roughly 0.7 sqrt(ratio - 1)
    // per e-fold. 1.0003 keeps the bias near 1%.
    double ratio = 1.0003;
};

struct SllnPoint {
    double v = 0.0;
    double mean_ratio = 0.0;  // mean of L(1,V)/log V
    double std_ratio = 0.0;
    std::size_t count = 0;
    double censored_fraction = 0.0;
};

struct SllnReport {
    std::vector<SllnPoint> points;
    double increment_lag1_correlation = std::numeric_limits<double>::quiet_NaN();
};

/// For each V, Monte Carlo statistics of L(1, V)/log V over independent
/// replications (per-replication streams derived from the master seed).
/// Also reports the lag-1 correlation of consecutive e-fold increments of
/// the energy process as a soft independence diagnostic.
inline SllnReport slln_experiment(const std::vector<double>& v_list,
                                  std::size_t replications, std::uint64_t master_seed,
                                  const SllnOptions& opt = SllnOptions{}) {
    SllnReport report;
    if (v_list.empty() || replications == 0) return report;
    for (std::size_t i = 0; i < v_list.size(); ++i) {
        if (!(v_list[i] > 1.0))
            throw std::invalid_argument("slln_experiment: V values must exceed 1");
        if (i > 0 && !(v_list[i] > v_list[i - 1]))
            throw std::invalid_argument("slln_experiment: V_list must be increasing");
    }

    const double v_max = v_list.back();
    const GridSpec grid = GridSpec::geometric_from_first_cell(
        opt.horizon_factor * v_max * v_max, opt.first_cell, opt.ratio);
    const std::vector<double> times = grid.times();
    const double horizon = times.back();

    const std::size_t m = v_list.size();
    std::vector<double> sum(m, 0.0), sumsq(m, 0.0);
    std::vector<std::size_t> censored(m, 0);
    // e-fold increments for the independence diagnostic
    double inc_xy = 0.0, inc_x = 0.0, inc_y = 0.0, inc_xx = 0.0, inc_yy = 0.0;
    std::size_t inc_n = 0;

    for (std::size_t rep = 0; rep < replications; ++rep) {
        RngStream stream(master_seed, rep);
        const ConcaveHullBuilder hull = build_wiener_hull(times, stream);
        const std::size_t i1 = hull.tilted_argmax_index(1.0);
        std::vector<double> lvals(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t iv = hull.tilted_argmax_index(v_list[k]);
            lvals[k] = hull.energy_between_vertices(std::min(i1, iv), std::max(i1, iv));
            if (hull.times()[iv] > 0.9 * horizon) ++censored[k];
            const double ratio = lvals[k] / std::log(v_list[k]);
            sum[k] += ratio;
            sumsq[k] += ratio * ratio;
        }
        for (std::size_t k = 2; k < m; ++k) {
            const double x = lvals[k - 1] - lvals[k - 2];
            const double y = lvals[k] - lvals[k - 1];
            inc_x += x;
            inc_y += y;
            inc_xx += x * x;
            inc_yy += y * y;
            inc_xy += x * y;
            ++inc_n;
        }
    }

    const double n = static_cast<double>(replications);
    for (std::size_t k = 0; k < m; ++k) {
        SllnPoint p;
        p.v = v_list[k];
        p.mean_ratio = sum[k] / n;
        const double var = std::max(0.0, sumsq[k] / n - p.mean_ratio * p.mean_ratio);
        p.std_ratio = std::sqrt(var * n / std::max(1.0, n - 1.0));
        p.count = replications;
        p.censored_fraction = static_cast<double>(censored[k]) / n;
        report.points.push_back(p);
    }
    if (inc_n > 1) {
        const double nn = static_cast<double>(inc_n);
        const double cov = inc_xy / nn - (inc_x / nn) * (inc_y / nn);
        const double vx = inc_xx / nn - (inc_x / nn) * (inc_x / nn);
        const double vy = inc_yy / nn - (inc_y / nn) * (inc_y / nn);
        if (vx > 0 && vy > 0) report.increment_lag1_correlation = cov / std::sqrt(vx * vy);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Sandwich experiment for tau(T^{1/2+delta}) > T > tau(T^{1/2-delta})
// ---------------------------------------------------------------------------

struct SandwichPoint {
    double T = 0.0;
    double frequency = 0.0;
    std::size_t count = 0;
    double censored_fraction = 0.0;
};

struct SandwichReport {
    double delta = 0.0;
    std::vector<SandwichPoint> points;
};

inline SandwichReport tau_sandwich_experiment(const std::vector<double>& t_list,
                                              double delta, std::size_t replications,
                                              std::uint64_t master_seed,
                                              const TauGridOptions& opt = TauGridOptions{}) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("tau_sandwich_experiment: delta must lie in (0, 1/2)");
    SandwichReport report;
    report.delta = delta;
    if (t_list.empty() || replications == 0) return report;

    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
        const double T = t_list[ti];
        if (!(T > 1.0)) throw std::invalid_argument("tau_sandwich_experiment: T must exceed 1");
        const double a_hi = std::pow(T, 0.5 + delta);
        const double a_lo = std::pow(T, 0.5 - delta);
        const GridSpec grid = GridSpec::geometric_from_first_cell(
            opt.horizon_factor * a_hi * a_hi, opt.first_cell_frac * a_lo * a_lo, opt.ratio);
        const std::vector<double> times = grid.times();
        const double horizon = times.back();

        std::size_t hits = 0, censored = 0;
        for (std::size_t rep = 0; rep < replications; ++rep) {
            RngStream stream(master_seed, ti * replications + rep);
            const ConcaveHullBuilder hull = build_wiener_hull(times, stream);
            const double tau_hi = hull.times()[hull.tilted_argmax_index(a_hi)];
            const double tau_lo = hull.times()[hull.tilted_argmax_index(a_lo)];
            if (tau_hi > T && T > tau_lo) ++hits;
            if (tau_hi > 0.9 * horizon) ++censored;
        }
        SandwichPoint p;
        p.T = T;
        p.frequency = static_cast<double>(hits) / static_cast<double>(replications);
        p.count = replications;
        p.censored_fraction = static_cast<double>(censored) / static_cast<double>(replications);
        report.points.push_back(p);
    }
    return report;
}

}  // namespace wapprox
