#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "wapprox/grid.hpp"
#include "wapprox/normal.hpp"
#include "wapprox/quadrature.hpp"
#include "wapprox/rng.hpp"
#include "wapprox/sample_path.hpp"
#include "wapprox/wiener.hpp"

namespace wapprox {

struct integration_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_stationary_density : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Diffusion pursuit strategy. `b` is the drift of the gap diffusion in
/// Ornstein-Uhlenbeck coordinates, dZ = b(Z) dtau - dW; `b_tilde(x) = b(x) + x/2`
/// is the original-coordinate shift, h'(t) = b_tilde((h-W)/sqrt(t)) / sqrt(t).
/// `scale_free` marks shifts with b_tilde(x/s)/s == b_tilde(x) (degree -1
/// homogeneity); for those the strategy is also time-homogeneous and may be
/// integrated from t = 0.
struct StrategyDrift {
    std::function<double(double)> b;
    std::function<double(double)> b_tilde;
    std::string name;
    bool scale_free = false;
};

/// The optimal shift within the diffusion class: b(x) = 1/x - x/2,
/// b_tilde(x) = 1/x, i.e. h'(t) = 1/(h(t) - W(t)).
inline StrategyDrift optimal_drift() {
    StrategyDrift d;
    d.b = [](double x) { return 1.0 / x - 0.5 * x; };
    d.b_tilde = [](double x) { return 1.0 / x; };
    d.name = "optimal";
    d.scale_free = true;
    return d;
}

/// Strategy built from an OU-coordinate drift; b_tilde derived as b + x/2.
inline StrategyDrift drift_from_b(std::function<double(double)> b, std::string name,
                                  bool scale_free = false) {
    StrategyDrift d;
    d.b = b;
    d.b_tilde = [b](double x) { return b(x) + 0.5 * x; };
    d.name = std::move(name);
    d.scale_free = scale_free;
    return d;
}

/// Inadmissible example: constant original-coordinate shift.
inline StrategyDrift constant_gap_drift(double c) {
    StrategyDrift d;
    d.b_tilde = [c](double) { return c; };
    d.b = [c](double x) { return c - 0.5 * x; };
    d.name = "constant";
    d.scale_free = false;
    return d;
}

/// Admissibility probe: the shift must blow up as the gap closes
/// (b_tilde(x) -> infinity as x -> 0), otherwise the pursuit can be overrun.
inline bool drift_is_admissible(const StrategyDrift& drift) {
    double prev = drift.b_tilde(1e-2);
    for (double x : {1e-4, 1e-6, 1e-8}) {
        const double v = drift.b_tilde(x);
        if (!(v > prev) || !(v > 0.0)) return false;
        prev = v;
    }
    return prev > 1e3;
}

/// Time series of a pursuit run: in original coordinates `w`/`position` hold
/// W(t) and h(t) and `gap` their difference; in OU coordinates (gap
/// diffusions) they hold U(tau), z(tau) and Z(tau) = z - U.
struct PursuitTrace {
    std::vector<double> times;
    std::vector<double> w;
    std::vector<double> position;
    std::vector<double> gap;
    std::vector<double> cum_energy;
};

struct PursuitOptions {
    double max_gap_change = 0.25;  // relative gap change per accepted sub-step
    double gap_floor = 1e-12;
    int max_halvings = 48;
};

namespace detail {

/// One explicit sub-step of h' = rate(t, gap) over [t0, t1] against a linear
/// W segment; recursive halving keeps the relative gap change bounded.
/// Energy is accumulated as rate(left)^2 * dt (left-endpoint rule).
template <typename Rate>
void pursuit_substep(const Rate& rate, double t0, double h0, double w0, double t1,
                     double w1, const PursuitOptions& opt, int depth, double& h_out,
                     double& energy_out) {
    const double gap0 = h0 - w0;
    if (gap0 <= opt.gap_floor)
        throw integration_failure("pursuit: gap fell below the hard floor");
    const double dt = t1 - t0;
    const double wslope = (w1 - w0) / dt;
    const auto w_at = [&](double t) { return w0 + wslope * (t - t0); };
    const auto f = [&](double t, double h) { return rate(t, h - w_at(t)); };

    // classic RK4 on the drift ODE; W is linear inside the cell
    const double k1 = f(t0, h0);
    const double k2 = f(t0 + 0.5 * dt, h0 + 0.5 * dt * k1);
    const double k3 = f(t0 + 0.5 * dt, h0 + 0.5 * dt * k2);
    const double k4 = f(t1, h0 + dt * k3);
    const double h1 = h0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double gap1 = h1 - w1;

    if (std::abs(gap1 - gap0) > opt.max_gap_change * gap0 || gap1 <= 0.0 ||
        !std::isfinite(h1)) {
        if (depth >= opt.max_halvings)
            throw integration_failure("pursuit: sub-step refinement exhausted");
        const double tm = 0.5 * (t0 + t1);
        const double wm = w_at(tm);
        double hm = 0.0, em = 0.0;
        pursuit_substep(rate, t0, h0, w0, tm, wm, opt, depth + 1, hm, em);
        double hf = 0.0, ef = 0.0;
        pursuit_substep(rate, tm, hm, wm, t1, w1, opt, depth + 1, hf, ef);
        h_out = hf;
        energy_out = em + ef;
        return;
    }
    h_out = h1;
    energy_out = k1 * k1 * dt;
}

}  // namespace detail

/// Integrates the pursuit h'(t) = b_tilde((h - W)/sqrt(t))/sqrt(t) along a
/// sampled Wiener path, starting with gap r at the first knot. Scale-free
/// strategies reduce to h' = b_tilde(h - W) and may start at t = 0; other
/// strategies need a path with times.front() > 0.
inline PursuitTrace simulate_pursuit(const SamplePath& path, double r,
                                     const StrategyDrift& drift,
                                     const PursuitOptions& opt = PursuitOptions{}) {
    path.validate();
    if (!(r > 0.0)) throw std::invalid_argument("simulate_pursuit: need gap r > 0");
    if (!drift_is_admissible(drift))
        throw std::invalid_argument("simulate_pursuit: inadmissible drift (shift must blow up at gap 0)");
    if (!drift.scale_free && !(path.times.front() > 0.0))
        throw std::invalid_argument("simulate_pursuit: this strategy needs a start time > 0");

    const auto rate = [&drift](double t, double gap) {
        if (drift.scale_free) return drift.b_tilde(gap);
        const double s = std::sqrt(t);
        return drift.b_tilde(gap / s) / s;
    };

    PursuitTrace trace;
    const std::size_t n = path.size();
    trace.times = path.times;
    trace.w = path.values;
    trace.position.resize(n);
    trace.gap.resize(n);
    trace.cum_energy.resize(n);

    double h = path.values.front() + r;
    double acc = 0.0;
    trace.position[0] = h;
    trace.gap[0] = r;
    trace.cum_energy[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        double h1 = 0.0, e = 0.0;
        detail::pursuit_substep(rate, path.times[i - 1], h, path.values[i - 1],
                                path.times[i], path.values[i], opt, 0, h1, e);
        h = h1;
        acc += e;
        trace.position[i] = h;
        trace.gap[i] = h - path.values[i];
        trace.cum_energy[i] = acc;
    }
    return trace;
}

/// Euler-Maruyama simulation of the OU-coordinate gap diffusion
/// dZ = b(Z) dtau - dW. Oversized steps are split by conditioning the
/// Brownian increment on its midpoint (bridge), which preserves the law.
/// The OU path U (same driving noise, U(0) = 0) is co-evolved so the trace
/// carries z = Z + U as the position; energy integrand is (b(Z) + Z/2)^2.
inline PursuitTrace simulate_gap_diffusion(const StrategyDrift& drift, double z0,
                                           double tau_max, double dt, RngStream& stream,
                                           const PursuitOptions& opt = PursuitOptions{}) {
    if (!(z0 > 0.0)) throw std::invalid_argument("simulate_gap_diffusion: need z0 > 0");
    if (!(dt > 0.0) || !(tau_max > 0.0))
        throw std::invalid_argument("simulate_gap_diffusion: need positive dt, tau_max");

    const std::size_t steps = static_cast<std::size_t>(std::ceil(tau_max / dt));
    PursuitTrace trace;
    trace.times.reserve(steps + 1);
    trace.w.reserve(steps + 1);
    trace.position.reserve(steps + 1);
    trace.gap.reserve(steps + 1);
    trace.cum_energy.reserve(steps + 1);

    double z = z0, u = 0.0, acc = 0.0, tau = 0.0;
    trace.times.push_back(0.0);
    trace.w.push_back(u);
    trace.position.push_back(z + u);
    trace.gap.push_back(z);
    trace.cum_energy.push_back(0.0);

    // recursive step: commit dw over [0, step]; split via bridge if the gap
    // would move more than the allowed fraction
    const std::function<void(double, double, int)> advance = [&](double step, double dw,
                                                                 int depth) {
        if (z <= opt.gap_floor)
            throw integration_failure("gap diffusion: gap fell below the hard floor");
        const double drift_term = drift.b(z) * step;
        const double dz = drift_term - dw;
        if ((std::abs(dz) > opt.max_gap_change * z || z + dz <= 0.0) &&
            depth < opt.max_halvings) {
            const double mid = 0.5 * dw + stream.gaussian() * std::sqrt(0.25 * step);
            advance(0.5 * step, mid, depth + 1);
            advance(0.5 * step, dw - mid, depth + 1);
            return;
        }
        if (z + dz <= 0.0)
            throw integration_failure("gap diffusion: sub-step refinement exhausted");
        const double rate = drift.b(z) + 0.5 * z;
        acc += rate * rate * step;
        u += -0.5 * u * step + dw;
        z += dz;
        tau += step;
    };

    for (std::size_t k = 0; k < steps; ++k) {
        const double step = std::min(dt, tau_max - static_cast<double>(k) * dt);
        if (step <= 0.0) break;
        const double dw = stream.gaussian() * std::sqrt(step);
        advance(step, dw, 0);
        trace.times.push_back(tau);
        trace.w.push_back(u);
        trace.position.push_back(z + u);
        trace.gap.push_back(z);
        trace.cum_energy.push_back(acc);
    }
    return trace;
}

inline PursuitTrace simulate_gap_diffusion(const StrategyDrift& drift, double z0,
                                           double tau_max, double dt, std::uint64_t seed,
                                           const PursuitOptions& opt = PursuitOptions{}) {
    RngStream stream(seed);
    return simulate_gap_diffusion(drift, z0, tau_max, dt, stream, opt);
}

// ---------------------------------------------------------------------------
// Stationary density of the gap diffusion
// ---------------------------------------------------------------------------

/// Stationary law p(x) = p0(x)/Q with p0 = exp(B), B(x) = 2 int b. The
/// antiderivative is anchored at x = 1; the anchor cancels in p. Both the
/// density and its CDF are table-backed (log-space grid).
struct StationaryDensity {
    std::function<double(double)> log_p0;
    std::function<double(double)> cdf_fn;
    double normalizer = 1.0;  // Q = int_0^inf p0
    double upper_cutoff = 0.0;

    double p0(double x) const { return std::exp(log_p0(x)); }
    double p(double x) const {
        if (x <= 0.0) return 0.0;
        return p0(x) / normalizer;
    }
    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        return cdf_fn(x);
    }
};

/// Closed-form stationary density of the optimal strategy,
/// p(x) = sqrt(2/pi) x^2 exp(-x^2/2) (Maxwell law), and its CDF.
inline double maxwell_pdf(double x) {
    if (x <= 0.0) return 0.0;
    return std::sqrt(2.0 / M_PI) * x * x * std::exp(-0.5 * x * x);
}

inline double maxwell_cdf(double x) {
    if (x <= 0.0) return 0.0;
    return 2.0 * normal_cdf(x) - 1.0 - std::sqrt(2.0 / M_PI) * x * std::exp(-0.5 * x * x);
}

enum class BoundaryClassification { entrance, not_entrance, indeterminate };

namespace detail {

/// Tabulated antiderivative B(x) = 2 int_1^x b(u) du on a uniform grid in
/// y = log x, where the integrand 2 b(e^y) e^y is smooth even for shifts
/// singular like 1/u. Values come from per-interval Simpson, evaluation uses
/// cubic Hermite interpolation (the derivative is known exactly at nodes).
/// Nested adaptive quadrature through p0 would be prohibitively slow.
class BTable {
public:
    BTable(const StrategyDrift& drift, double y_lo, double y_hi, double dy = 1e-3)
        : y_lo_(y_lo), dy_(dy) {
        const std::size_t n =
            static_cast<std::size_t>(std::ceil((y_hi - y_lo) / dy)) + 1;
        const auto g = [&drift](double y) {
            const double u = std::exp(y);
            return 2.0 * drift.b(u) * u;
        };
        b_.resize(n);
        d_.resize(n);
        d_[0] = g(y_lo_);
        // anchor B(1) = 0 afterwards; accumulate first
        b_[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double y0 = y_lo_ + dy_ * static_cast<double>(i - 1);
            const double y1 = y0 + dy_;
            d_[i] = g(y1);
            const double mid = g(0.5 * (y0 + y1));
            b_[i] = b_[i - 1] + dy_ / 6.0 * (d_[i - 1] + 4.0 * mid + d_[i]);
        }
        const double at_one = value(0.0);
        for (double& v : b_) v -= at_one;
    }

    double y_lo() const { return y_lo_; }
    double y_hi() const { return y_lo_ + dy_ * static_cast<double>(b_.size() - 1); }

    /// B at y = log x; linear extrapolation outside the table.
    double value(double y) const {
        if (y <= y_lo_) return b_.front() + (y - y_lo_) * d_.front();
        const double y_top = y_hi();
        if (y >= y_top) return b_.back() + (y - y_top) * d_.back();
        const double s = (y - y_lo_) / dy_;
        std::size_t i = static_cast<std::size_t>(s);
        if (i + 1 >= b_.size()) i = b_.size() - 2;
        const double t = s - static_cast<double>(i);
        const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        const double h10 = t * (1.0 - t) * (1.0 - t);
        const double h01 = t * t * (3.0 - 2.0 * t);
        const double h11 = t * t * (t - 1.0);
        return h00 * b_[i] + h10 * dy_ * d_[i] + h01 * b_[i + 1] + h11 * dy_ * d_[i + 1];
    }

private:
    double y_lo_, dy_;
    std::vector<double> b_, d_;
};

}  // namespace detail

/// Numerical probe of the entrance-boundary (no-exit) condition
/// int_0 dx / p0(x) = infinity: evaluates I(eps) = int_eps^1 dx/p0 on a
/// shrinking sequence of eps. Divergence (growing I, non-shrinking
/// increments) classifies 0 as an entrance boundary; a Cauchy-converging
/// sequence classifies it as reachable; anything else is indeterminate.
inline BoundaryClassification entrance_boundary_check(const StrategyDrift& drift) {
    const detail::BTable table(drift, std::log(1e-10) - 0.1, 0.1);
    const auto inv_p0_log = [&](double y) {
        // integrand of int dx/p0 after x = e^y
        return std::exp(y - table.value(y));
    };
    const std::vector<double> eps = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
    std::vector<double> I;
    double total = integrate(inv_p0_log, std::log(eps[0]), 0.0, 1e-10);
    I.push_back(total);
    for (std::size_t k = 1; k < eps.size(); ++k) {
        const double rough = std::abs(total) + 1.0;
        total += integrate(inv_p0_log, std::log(eps[k]), std::log(eps[k - 1]), 1e-9 * rough);
        I.push_back(total);
    }
    bool cauchy = true, growing = true;
    for (std::size_t k = 1; k < I.size(); ++k) {
        const double diff = I[k] - I[k - 1];
        if (diff > 1e-6 * (1.0 + std::abs(I[k]))) cauchy = false;
    }
    if (cauchy) return BoundaryClassification::not_entrance;
    // growing without apparent bound: increments do not shrink geometrically
    // (covers both power-law and logarithmic divergence)
    for (std::size_t k = 2; k < I.size(); ++k) {
        const double d_prev = I[k - 1] - I[k - 2];
        const double d_cur = I[k] - I[k - 1];
        if (d_cur < 0.9 * d_prev) growing = false;
    }
    if (growing) return BoundaryClassification::entrance;
    return BoundaryClassification::indeterminate;
}

/// Normalized stationary density of the gap diffusion. Requires the
/// entrance-boundary condition and an integrable p0; throws
/// no_stationary_density otherwise.
inline StationaryDensity stationary_density(const StrategyDrift& drift) {
    if (entrance_boundary_check(drift) != BoundaryClassification::entrance)
        throw no_stationary_density("stationary_density: 0 is not an entrance boundary");

    // grow the log-space table until the mass density e^{y + B(y)} has
    // decayed from its peak; no decay by y = log(1e8) means no finite Q
    const double y_lo = std::log(1e-10) - 0.1;
    double y_hi = std::log(64.0);
    std::shared_ptr<detail::BTable> table;
    for (;;) {
        table = std::make_shared<detail::BTable>(drift, y_lo, y_hi);
        const auto s = [&](double y) { return y + table->value(y); };
        double peak = s(y_lo);
        for (double y = y_lo; y <= y_hi; y += 0.05) peak = std::max(peak, s(y));
        if (s(y_hi) < peak - 60.0) break;
        if (y_hi > std::log(1e8))
            throw no_stationary_density("stationary_density: p0 not integrable at infinity");
        y_hi += std::log(16.0);
    }

    // cumulative mass M(y) = int e^{u + B(u)} du on the same grid
    const double dy = 5e-4;
    const std::size_t n = static_cast<std::size_t>(std::ceil((y_hi - y_lo) / dy)) + 1;
    auto ys = std::make_shared<std::vector<double>>(n);
    auto mass = std::make_shared<std::vector<double>>(n);
    const auto f = [&](double y) { return std::exp(y + table->value(y)); };
    (*ys)[0] = y_lo;
    (*mass)[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double y0 = y_lo + dy * static_cast<double>(i - 1);
        const double y1 = y0 + dy;
        (*ys)[i] = y1;
        (*mass)[i] =
            (*mass)[i - 1] + dy / 6.0 * (f(y0) + 4.0 * f(0.5 * (y0 + y1)) + f(y1));
    }
    const double q = mass->back();
    if (!(q > 0.0) || !std::isfinite(q))
        throw no_stationary_density("stationary_density: p0 not integrable");

    StationaryDensity sd;
    sd.normalizer = q;
    sd.upper_cutoff = std::exp(y_hi);
    sd.log_p0 = [table](double x) {
        if (!(x > 0.0)) throw std::domain_error("log_p0: x must be positive");
        return table->value(std::log(x));
    };
    sd.cdf_fn = [ys, mass, q, y_lo, dy](double x) {
        if (x <= 0.0) return 0.0;
        const double y = std::log(x);
        if (y <= y_lo) return 0.0;
        const double s = (y - y_lo) / dy;
        if (s >= static_cast<double>(mass->size() - 1)) return 1.0;
        const std::size_t i = static_cast<std::size_t>(s);
        const double t = s - static_cast<double>(i);
        const double m = (*mass)[i] * (1.0 - t) + (*mass)[i + 1] * t;
        return std::min(m / q, 1.0);
    };
    return sd;
}

// ---------------------------------------------------------------------------
// Energy-slope experiment for the adaptive strategy
// ---------------------------------------------------------------------------

struct AdaptiveSlopeOptions {
    double first_cell = 1e-4;
    double ratio = 1.002;
};

struct AdaptiveSlopePoint {
    double T = 0.0;
    double mean_energy = 0.0;
    double std_energy = 0.0;
    std::size_t count = 0;
    double control_energy = 0.0;      // integrator with noise off
    double control_closed_form = 0.0; // 0.5 log(1 + 2T/r^2)
};

struct AdaptiveSlopeReport {
    std::vector<AdaptiveSlopePoint> points;
    double control_max_rel_err = 0.0;  // integrator state vs sqrt(r^2 + 2t)
};

/// Mean cumulative pursuit energy of the optimal strategy at each horizon in
/// T_list (one trajectory per replication, checkpointed at the horizons),
/// plus a noise-off control run compared against the closed form.
inline AdaptiveSlopeReport adaptive_energy_slope_experiment(
    const std::vector<double>& t_list, double r, std::size_t replications,
    std::uint64_t master_seed, const AdaptiveSlopeOptions& opt = AdaptiveSlopeOptions{}) {
    AdaptiveSlopeReport report;
    if (t_list.empty() || replications == 0) return report;
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] > 0.0))
            throw std::invalid_argument("adaptive slope: T values must be positive");
        if (i > 0 && !(t_list[i] > t_list[i - 1]))
            throw std::invalid_argument("adaptive slope: T_list must be increasing");
    }
    if (!(r > 0.0)) throw std::invalid_argument("adaptive slope: need r > 0");

    // geometric grid over [0, T_max] with the checkpoints merged in
    const double t_max = t_list.back();
    GridSpec grid = GridSpec::geometric_from_first_cell(
        t_max, std::min(opt.first_cell * r * r, t_max * 0.5), opt.ratio);
    std::vector<double> times = grid.times();
    for (double T : t_list) {
        const auto it = std::lower_bound(times.begin(), times.end(), T);
        if (it == times.end() || *it != T) times.insert(it, T);
    }
    std::vector<std::size_t> checkpoint(t_list.size());
    for (std::size_t k = 0; k < t_list.size(); ++k)
        checkpoint[k] = static_cast<std::size_t>(
            std::lower_bound(times.begin(), times.end(), t_list[k]) - times.begin());

    const StrategyDrift drift = optimal_drift();
    const std::size_t m = t_list.size();
    std::vector<double> sum(m, 0.0), sumsq(m, 0.0);

    for (std::size_t rep = 0; rep < replications; ++rep) {
        RngStream stream(master_seed, rep);
        const SamplePath path = sample_wiener(times, stream);
        const PursuitTrace trace = simulate_pursuit(path, r, drift);
        for (std::size_t k = 0; k < m; ++k) {
            const double e = trace.cum_energy[checkpoint[k]];
            sum[k] += e;
            sumsq[k] += e * e;
        }
    }

    // noise-off control on the same grid
    SamplePath flat;
    flat.times = times;
    flat.values.assign(times.size(), 0.0);
    const PursuitTrace control = simulate_pursuit(flat, r, drift);
    double max_rel = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double exact = std::sqrt(r * r + 2.0 * times[i]);
        max_rel = std::max(max_rel, std::abs(control.position[i] - exact) / exact);
    }
    report.control_max_rel_err = max_rel;

    const double n = static_cast<double>(replications);
    for (std::size_t k = 0; k < m; ++k) {
        AdaptiveSlopePoint p;
        p.T = t_list[k];
        p.mean_energy = sum[k] / n;
        const double var = std::max(0.0, sumsq[k] / n - p.mean_energy * p.mean_energy);
        p.std_energy = std::sqrt(var * n / std::max(1.0, n - 1.0));
        p.count = replications;
        p.control_energy = control.cum_energy[checkpoint[k]];
        p.control_closed_form = 0.5 * std::log1p(2.0 * t_list[k] / (r * r));
        report.points.push_back(p);
    }
    return report;
}

}  // namespace wapprox
