#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wapprox/grid.hpp"
#include "wapprox/groeneboom.hpp"
#include "wapprox/majorant.hpp"
#include "wapprox/oscillator.hpp"
#include "wapprox/pursuit.hpp"
#include "wapprox/report.hpp"
#include "wapprox/rng.hpp"
#include "wapprox/stats.hpp"
#include "wapprox/wiener.hpp"

namespace wapprox {

enum class ExperimentName {
    main_theorem,
    mcm_energy,
    slln,
    tau_sandwich,
    tau_ks,
    adaptive_slope,
    stationary_fit,
    oscillator,
    variational,
};

inline const char* to_string(ExperimentName name) {
    switch (name) {
        case ExperimentName::main_theorem: return "main-theorem";
        case ExperimentName::mcm_energy: return "mcm-energy";
        case ExperimentName::slln: return "slln";
        case ExperimentName::tau_sandwich: return "tau-sandwich";
        case ExperimentName::tau_ks: return "tau-ks";
        case ExperimentName::adaptive_slope: return "adaptive-slope";
        case ExperimentName::stationary_fit: return "stationary-fit";
        case ExperimentName::oscillator: return "oscillator";
        case ExperimentName::variational: return "variational";
    }
    throw std::logic_error("unreachable experiment name");
}

inline ExperimentName parse_experiment_name(const std::string& s) {
    for (ExperimentName n :
         {ExperimentName::main_theorem, ExperimentName::mcm_energy, ExperimentName::slln,
          ExperimentName::tau_sandwich, ExperimentName::tau_ks,
          ExperimentName::adaptive_slope, ExperimentName::stationary_fit,
          ExperimentName::oscillator, ExperimentName::variational}) {
        if (s == to_string(n)) return n;
    }
    throw std::invalid_argument("unknown experiment name: " + s);
}

/// Resolved configuration of one experiment run. Round-trips losslessly
/// through JSON; unknown names or out-of-range values throw invalid_argument.
struct ExperimentConfig {
    ExperimentName name = ExperimentName::oscillator;
    std::uint64_t master_seed = 1;
    std::size_t replications = 0;

    std::vector<double> t_list;  // horizons (main-theorem, sandwich, adaptive)
    std::vector<double> v_list;  // slln slopes-parameter list
    double delta = 0.25;
    double r = 1.0;
    double tau_a = 1.0;

    std::size_t grid_points = std::size_t{1} << 22;
    double grid_ratio = 0.0;       // 0 = per-experiment default
    double first_cell = 1e-5;      // times r^2 or a^2 where applicable
    double horizon_factor = 40.0;  // horizon = factor * (scale)^2

    double dt = 1e-3;       // gap-diffusion step
    double tau_max = 1e4;   // gap-diffusion horizon
    double z0 = M_SQRT2;    // gap-diffusion start
    double burn_in = 100.0;
    std::size_t sample_count = 10000;

    double sl_cutoff = 14.0;   // oscillator domain cutoff L
    std::size_t sl_grid = 8000;
    std::size_t sl_modes = 3;

    bool scaled_route = false;     // main-theorem via unit-interval scaling
    bool assess_grid_bias = true;  // main-theorem refinement pair

    std::string out_path;  // base path; .json/.csv appended

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["experiment"] = to_string(name);
        j["master_seed"] = master_seed;
        j["replications"] = replications;
        j["T_list"] = t_list;
        j["V_list"] = v_list;
        j["delta"] = delta;
        j["r"] = r;
        j["tau_a"] = tau_a;
        j["grid_points"] = grid_points;
        j["grid_ratio"] = grid_ratio;
        j["first_cell"] = first_cell;
        j["horizon_factor"] = horizon_factor;
        j["dt"] = dt;
        j["tau_max"] = tau_max;
        j["z0"] = z0;
        j["burn_in"] = burn_in;
        j["sample_count"] = sample_count;
        j["sl_cutoff"] = sl_cutoff;
        j["sl_grid"] = sl_grid;
        j["sl_modes"] = sl_modes;
        j["scaled_route"] = scaled_route;
        j["assess_grid_bias"] = assess_grid_bias;
        j["out_path"] = out_path;
        return j;
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig c;
        c.name = parse_experiment_name(j.at("experiment").get<std::string>());
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
        c.replications = j.at("replications").get<std::size_t>();
        c.t_list = j.at("T_list").get<std::vector<double>>();
        c.v_list = j.at("V_list").get<std::vector<double>>();
        c.delta = j.at("delta").get<double>();
        c.r = j.at("r").get<double>();
        c.tau_a = j.at("tau_a").get<double>();
        c.grid_points = j.at("grid_points").get<std::size_t>();
        c.grid_ratio = j.at("grid_ratio").get<double>();
        c.first_cell = j.at("first_cell").get<double>();
        c.horizon_factor = j.at("horizon_factor").get<double>();
        c.dt = j.at("dt").get<double>();
        c.tau_max = j.at("tau_max").get<double>();
        c.z0 = j.at("z0").get<double>();
        c.burn_in = j.at("burn_in").get<double>();
        c.sample_count = j.at("sample_count").get<std::size_t>();
        c.sl_cutoff = j.at("sl_cutoff").get<double>();
        c.sl_grid = j.at("sl_grid").get<std::size_t>();
        c.sl_modes = j.at("sl_modes").get<std::size_t>();
        c.scaled_route = j.at("scaled_route").get<bool>();
        c.assess_grid_bias = j.at("assess_grid_bias").get<bool>();
        c.out_path = j.at("out_path").get<std::string>();
        return c;
    }

    void validate() const {
        if (!(r > 0.0)) throw std::invalid_argument("config: r must be positive");
        if (!(first_cell > 0.0)) throw std::invalid_argument("config: first_cell must be positive");
        if (!(horizon_factor >= 1.0)) throw std::invalid_argument("config: horizon_factor must be >= 1");
        if (grid_ratio != 0.0 && !(grid_ratio > 1.0))
            throw std::invalid_argument("config: grid_ratio must exceed 1");
        if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("config: delta must lie in (0, 1/2)");
        for (std::size_t i = 1; i < t_list.size(); ++i)
            if (!(t_list[i] > t_list[i - 1]))
                throw std::invalid_argument("config: T_list must be increasing");
        for (std::size_t i = 1; i < v_list.size(); ++i)
            if (!(v_list[i] > v_list[i - 1]))
                throw std::invalid_argument("config: V_list must be increasing");
        if (!(dt > 0.0) || !(tau_max > 0.0) || !(z0 > 0.0))
            throw std::invalid_argument("config: diffusion parameters must be positive");
    }
};

namespace detail {

/// Streaming evaluator of the optimal unilateral majorant energy over path
/// prefixes: feeds knots into a concave hull and tracks the running first
/// argmax; the optimal energy for a given start height is then a scan over
/// the (small) hull stack.
class PrefixMajorantScanner {
public:
    void push(double t, double y) {
        if (empty_ || y > max_value_) {
            max_value_ = y;
            max_time_ = t;
            empty_ = false;
        }
        hull_.push(t, y);
    }

    double max_value() const { return max_value_; }

    /// Energy of the optimal majorant with start height `r` over the pushed
    /// prefix; 0 when r dominates the prefix maximum.
    double optimal_energy(double r) const {
        if (r >= max_value_) return 0.0;
        const auto& ts = hull_.times();
        const auto& ys = hull_.values();
        const auto& ce = hull_.cum_energy();
        double best_slope = -std::numeric_limits<double>::infinity();
        std::size_t touch = 0;
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const double s = (ys[i] - r) / ts[i];
            if (s >= best_slope) {
                best_slope = s;
                touch = i;
            }
        }
        const std::size_t peak = static_cast<std::size_t>(
            std::lower_bound(ts.begin(), ts.end(), max_time_) - ts.begin());
        const std::size_t from = std::min(touch, peak);
        return best_slope * best_slope * ts[from] + (ce[peak] - ce[from]);
    }

private:
    ConcaveHullBuilder hull_;
    double max_value_ = 0.0;
    double max_time_ = 0.0;
    bool empty_ = true;
};

/// Energy of the global majorant started from height r, restricted to [0, T]
/// (tangent segment plus hull energy up to T, partial segments pro-rated).
inline double global_majorant_energy(const ConcaveHullBuilder& hull, double r, double T) {
    const auto& ts = hull.times();
    const auto& ys = hull.values();
    const auto& ce = hull.cum_energy();
    double maxv = -std::numeric_limits<double>::infinity();
    for (double y : ys) maxv = std::max(maxv, y);
    if (r >= maxv) return 0.0;

    double best_slope = -std::numeric_limits<double>::infinity();
    std::size_t touch = 0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double s = (ys[i] - r) / ts[i];
        if (s >= best_slope) {
            best_slope = s;
            touch = i;
        }
    }
    if (T <= ts[touch]) return best_slope * best_slope * T;

    // segment containing T
    std::size_t seg = static_cast<std::size_t>(
        std::upper_bound(ts.begin(), ts.end(), T) - ts.begin());
    seg = std::min(seg - 1, ts.size() - 1);
    double e = best_slope * best_slope * ts[touch] + (ce[seg] - ce[touch]);
    if (seg + 1 < ts.size() && T > ts[seg]) {
        const double slope = (ys[seg + 1] - ys[seg]) / (ts[seg + 1] - ts[seg]);
        e += slope * slope * (T - ts[seg]);
    }
    return e;
}

inline std::vector<double> merged_checkpoint_times(const GridSpec& grid,
                                                   const std::vector<double>& checkpoints) {
    std::vector<double> times = grid.times();
    for (double T : checkpoints) {
        const auto it = std::lower_bound(times.begin(), times.end(), T);
        if (it == times.end() || *it != T) times.insert(it, T);
    }
    return times;
}

struct Accumulator {
    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double stddev() const {
        if (n < 2) return 0.0;
        const double m = mean();
        const double var = std::max(0.0, sumsq / static_cast<double>(n) - m * m);
        return std::sqrt(var * static_cast<double>(n) / static_cast<double>(n - 1));
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Individual experiments
// ---------------------------------------------------------------------------

/// Optimal unilateral approximation energy I_W(T, r) per horizon, one pass
/// per replication with prefix checkpoints. The scaled route simulates on the
/// unit interval instead and queries with r/sqrt(T) (same law by Brownian
/// scaling); the refinement pair re-runs with half the knots and reports the
/// slope difference as a grid-bias estimate.
inline ExperimentReport run_main_theorem(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    if (cfg.t_list.empty() || cfg.replications == 0) return rep;
    for (double T : cfg.t_list)
        if (!(T > 1.0)) throw std::invalid_argument("main-theorem: horizons must exceed 1");

    const double t_max = cfg.t_list.back();
    const std::size_t m = cfg.t_list.size();

    const auto run_pass = [&](std::size_t points, std::uint64_t stream_offset,
                              std::vector<detail::Accumulator>& acc) {
        if (cfg.scaled_route) {
            const GridSpec grid = GridSpec::geometric_fit(
                1.0, cfg.first_cell * cfg.r * cfg.r / t_max, points);
            const std::vector<double> times = grid.times();
            for (std::size_t r_i = 0; r_i < cfg.replications; ++r_i) {
                RngStream stream(cfg.master_seed, stream_offset + r_i);
                detail::PrefixMajorantScanner scan;
                scan.push(0.0, 0.0);
                double w = 0.0;
                for (std::size_t i = 1; i < times.size(); ++i) {
                    w += stream.gaussian() * std::sqrt(times[i] - times[i - 1]);
                    scan.push(times[i], w);
                }
                for (std::size_t k = 0; k < m; ++k)
                    acc[k].add(scan.optimal_energy(cfg.r / std::sqrt(cfg.t_list[k])));
            }
            return;
        }
        const GridSpec grid =
            GridSpec::geometric_fit(t_max, cfg.first_cell * cfg.r * cfg.r, points);
        const std::vector<double> times = detail::merged_checkpoint_times(grid, cfg.t_list);
        std::vector<std::size_t> checkpoint(m);
        for (std::size_t k = 0; k < m; ++k)
            checkpoint[k] = static_cast<std::size_t>(
                std::lower_bound(times.begin(), times.end(), cfg.t_list[k]) - times.begin());
        for (std::size_t r_i = 0; r_i < cfg.replications; ++r_i) {
            RngStream stream(cfg.master_seed, stream_offset + r_i);
            detail::PrefixMajorantScanner scan;
            scan.push(0.0, 0.0);
            double w = 0.0;
            std::size_t next = 0;
            for (std::size_t i = 1; i < times.size(); ++i) {
                w += stream.gaussian() * std::sqrt(times[i] - times[i - 1]);
                scan.push(times[i], w);
                while (next < m && checkpoint[next] == i) {
                    acc[next].add(scan.optimal_energy(cfg.r));
                    ++next;
                }
            }
        }
    };

    std::vector<detail::Accumulator> acc(m);
    run_pass(cfg.grid_points, 0, acc);

    std::vector<std::pair<double, double>> fit_points;
    for (std::size_t k = 0; k < m; ++k) {
        PointStat p;
        p.parameter = "T";
        p.value = cfg.t_list[k];
        p.count = acc[k].n;
        p.stats = {{"mean_energy", acc[k].mean()}, {"std_energy", acc[k].stddev()}};
        rep.points.push_back(p);
        fit_points.push_back({cfg.t_list[k], acc[k].mean()});
    }
    if (m >= 3) rep.fit = fit_log_slope(fit_points);

    if (cfg.assess_grid_bias && cfg.grid_points >= 8) {
        std::vector<detail::Accumulator> coarse(m);
        run_pass(cfg.grid_points / 2, cfg.replications, coarse);
        double max_diff = 0.0;
        std::vector<std::pair<double, double>> coarse_points;
        for (std::size_t k = 0; k < m; ++k) {
            max_diff = std::max(max_diff, std::abs(coarse[k].mean() - acc[k].mean()));
            coarse_points.push_back({cfg.t_list[k], coarse[k].mean()});
        }
        rep.metrics.push_back({"grid_bias_max_mean_diff", max_diff});
        if (m >= 3)
            rep.metrics.push_back(
                {"grid_bias_slope_diff",
                 fit_log_slope(coarse_points).slope - (rep.fit ? rep.fit->slope : 0.0)});
    }
    return rep;
}

/// Energy of the global majorant started from height r, restricted to each
/// horizon in T_list; the path is simulated out to horizon_factor * T_max so
/// the global hull has settled over [0, T_max].
inline ExperimentReport run_mcm_energy(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    if (cfg.t_list.empty() || cfg.replications == 0) return rep;
    for (double T : cfg.t_list)
        if (!(T > 1.0)) throw std::invalid_argument("mcm-energy: horizons must exceed 1");

    const double horizon = cfg.horizon_factor * cfg.t_list.back();
    const GridSpec grid =
        GridSpec::geometric_fit(horizon, cfg.first_cell * cfg.r * cfg.r, cfg.grid_points);
    const std::vector<double> times = grid.times();

    const std::size_t m = cfg.t_list.size();
    std::vector<detail::Accumulator> acc(m);
    for (std::size_t r_i = 0; r_i < cfg.replications; ++r_i) {
        RngStream stream(cfg.master_seed, r_i);
        const ConcaveHullBuilder hull = build_wiener_hull(times, stream);
        for (std::size_t k = 0; k < m; ++k)
            acc[k].add(detail::global_majorant_energy(hull, cfg.r, cfg.t_list[k]));
    }

    std::vector<std::pair<double, double>> fit_points;
    for (std::size_t k = 0; k < m; ++k) {
        PointStat p;
        p.parameter = "T";
        p.value = cfg.t_list[k];
        p.count = acc[k].n;
        p.stats = {{"mean_energy", acc[k].mean()}, {"std_energy", acc[k].stddev()}};
        rep.points.push_back(p);
        fit_points.push_back({cfg.t_list[k], acc[k].mean()});
    }
    if (m >= 3) rep.fit = fit_log_slope(fit_points);
    return rep;
}

inline ExperimentReport run_slln(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    SllnOptions opt;
    opt.horizon_factor = cfg.horizon_factor;
    opt.first_cell = cfg.first_cell;
    if (cfg.grid_ratio != 0.0) opt.ratio = cfg.grid_ratio;
    const SllnReport slln =
        slln_experiment(cfg.v_list, cfg.replications, cfg.master_seed, opt);
    for (const auto& pt : slln.points) {
        PointStat p;
        p.parameter = "V";
        p.value = pt.v;
        p.count = pt.count;
        p.censored_fraction = pt.censored_fraction;
        p.stats = {{"mean_ratio", pt.mean_ratio}, {"std_ratio", pt.std_ratio}};
        rep.points.push_back(p);
    }
    if (!std::isnan(slln.increment_lag1_correlation))
        rep.metrics.push_back({"increment_lag1_correlation", slln.increment_lag1_correlation});
    return rep;
}

inline ExperimentReport run_tau_sandwich(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    TauGridOptions opt;
    opt.horizon_factor = cfg.horizon_factor;
    opt.first_cell_frac = cfg.first_cell;
    if (cfg.grid_ratio != 0.0) opt.ratio = cfg.grid_ratio;
    const SandwichReport sw = tau_sandwich_experiment(cfg.t_list, cfg.delta,
                                                      cfg.replications, cfg.master_seed, opt);
    for (const auto& pt : sw.points) {
        PointStat p;
        p.parameter = "T";
        p.value = pt.T;
        p.count = pt.count;
        p.censored_fraction = pt.censored_fraction;
        p.stats = {{"frequency", pt.frequency}};
        rep.points.push_back(p);
    }
    return rep;
}

/// Samples of tau(a) (last argmax of the tilted path) against the reference
/// law: KS distance of tau(a)/a^2 to the q CDF.
inline ExperimentReport run_tau_ks(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    if (cfg.replications == 0) return rep;
    const double a = cfg.tau_a;
    TauGridOptions opt;
    opt.horizon_factor = cfg.horizon_factor;
    opt.first_cell_frac = cfg.first_cell;
    if (cfg.grid_ratio != 0.0) opt.ratio = cfg.grid_ratio;
    const GridSpec grid = make_tau_grid(a, opt);
    const std::vector<double> times = grid.times();

    std::vector<double> scaled;
    scaled.reserve(cfg.replications);
    std::size_t censored = 0;
    detail::Accumulator acc;
    for (std::size_t r_i = 0; r_i < cfg.replications; ++r_i) {
        RngStream stream(cfg.master_seed, r_i);
        const ConcaveHullBuilder hull = build_wiener_hull(times, stream);
        const double t = hull.times()[hull.tilted_argmax_index(a)];
        if (t > 0.9 * times.back()) ++censored;
        scaled.push_back(t / (a * a));
        acc.add(t / (a * a));
    }
    const double ks = ks_statistic(scaled, [](double t) { return q_cdf(t); });

    PointStat p;
    p.parameter = "a";
    p.value = a;
    p.count = cfg.replications;
    p.censored_fraction = static_cast<double>(censored) / static_cast<double>(cfg.replications);
    p.stats = {{"ks_distance", ks}, {"mean_scaled_tau", acc.mean()},
               {"std_scaled_tau", acc.stddev()}};
    rep.points.push_back(p);
    rep.metrics.push_back({"ks_distance", ks});
    return rep;
}

inline ExperimentReport run_adaptive_slope(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    AdaptiveSlopeOptions opt;
    opt.first_cell = cfg.first_cell;
    if (cfg.grid_ratio != 0.0) opt.ratio = cfg.grid_ratio;
    const AdaptiveSlopeReport ad = adaptive_energy_slope_experiment(
        cfg.t_list, cfg.r, cfg.replications, cfg.master_seed, opt);
    std::vector<std::pair<double, double>> fit_points, control_points;
    double control_energy_err = 0.0;
    for (const auto& pt : ad.points) {
        PointStat p;
        p.parameter = "T";
        p.value = pt.T;
        p.count = pt.count;
        p.stats = {{"mean_energy", pt.mean_energy},
                   {"std_energy", pt.std_energy},
                   {"control_energy", pt.control_energy},
                   {"control_closed_form", pt.control_closed_form}};
        rep.points.push_back(p);
        fit_points.push_back({pt.T, pt.mean_energy});
        control_points.push_back({pt.T, pt.control_energy});
        control_energy_err = std::max(
            control_energy_err, std::abs(pt.control_energy - pt.control_closed_form) /
                                    std::max(1.0, pt.control_closed_form));
    }
    if (ad.points.size() >= 3) {
        rep.fit = fit_log_slope(fit_points);
        rep.metrics.push_back({"control_slope", fit_log_slope(control_points).slope});
    }
    if (!ad.points.empty()) {
        rep.metrics.push_back({"control_state_max_rel_err", ad.control_max_rel_err});
        rep.metrics.push_back({"control_energy_max_rel_err", control_energy_err});
    }
    return rep;
}

/// Long-run gap diffusion against its stationary law: KS distance of the
/// thinned post-burn-in gap samples to the Maxwell CDF, and the empirical
/// second moment.
inline ExperimentReport run_stationary_fit(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    if (cfg.sample_count == 0) return rep;

    const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.tau_max / cfg.dt));
    const std::size_t stride = std::max<std::size_t>(1, steps / cfg.sample_count);

    RngStream stream(cfg.master_seed, 0);
    const PursuitTrace trace = simulate_gap_diffusion(optimal_drift(), cfg.z0, cfg.tau_max,
                                                      cfg.dt, stream);
    std::vector<double> samples;
    detail::Accumulator zsq;
    for (std::size_t i = stride; i < trace.times.size(); i += stride) {
        if (trace.times[i] <= cfg.burn_in) continue;
        samples.push_back(trace.gap[i]);
        zsq.add(trace.gap[i] * trace.gap[i]);
    }
    if (samples.empty()) return rep;
    const double ks = ks_statistic(samples, [](double x) { return maxwell_cdf(x); });

    PointStat p;
    p.parameter = "tau_max";
    p.value = cfg.tau_max;
    p.count = samples.size();
    p.stats = {{"ks_distance", ks}, {"mean_gap_sq", zsq.mean()}, {"std_gap_sq", zsq.stddev()}};
    rep.points.push_back(p);
    rep.metrics.push_back({"ks_distance", ks});
    rep.metrics.push_back({"mean_gap_sq", zsq.mean()});
    return rep;
}

inline ExperimentReport run_oscillator(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();
    const EigenSolution sol = solve_sturm_liouville(cfg.sl_cutoff, cfg.sl_grid, cfg.sl_modes);
    for (std::size_t k = 0; k < sol.eigenvalues.size(); ++k) {
        PointStat p;
        p.parameter = "mode";
        p.value = static_cast<double>(k + 1);
        p.count = 1;
        p.stats = {{"eigenvalue", sol.eigenvalues[k]},
                   {"reference", oscillator_eigenvalue(2 * static_cast<int>(k) + 1)}};
        rep.points.push_back(p);
    }
    rep.metrics.push_back({"gamma1", sol.eigenvalues.front()});
    rep.metrics.push_back({"gamma1_abs_error", std::abs(sol.eigenvalues.front() - 6.0)});

    // first eigenvector against the closed-form eigenfunction
    double max_dev = 0.0;
    const auto& v = sol.eigenvectors.front();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = sol.step * static_cast<double>(i);
        max_dev = std::max(max_dev, std::abs(v[i] - hermite_psi(1, x)));
    }
    rep.metrics.push_back({"psi1_max_abs_dev", max_dev});
    rep.metrics.push_back({"warning_count", static_cast<double>(sol.warnings.size())});
    return rep;
}

/// Variational side: J at the optimizer and at a test density, consistency
/// with the quadratic form, and the Rayleigh bound over random admissible
/// functions y(0) = 0 (replications controls how many).
inline ExperimentReport run_variational(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = to_string(cfg.name);
    rep.config_echo = cfg.to_json();

    DensityCandidate opt_density;
    opt_density.p = [](double x) { return maxwell_pdf(x); };
    opt_density.derivative = [](double x) {
        return std::sqrt(2.0 / M_PI) * (2.0 * x - x * x * x) * std::exp(-0.5 * x * x);
    };
    const auto j_opt = j_functional(opt_density);

    DensityCandidate gamma_density;  // p(x) = x^2 e^{-x} / 2
    gamma_density.p = [](double x) { return x <= 0.0 ? 0.0 : 0.5 * x * x * std::exp(-x); };
    gamma_density.derivative = [](double x) {
        return x <= 0.0 ? 0.0 : 0.5 * (2.0 * x - x * x) * std::exp(-x);
    };
    gamma_density.support_hint = 60.0;
    const auto j_gamma = j_functional(gamma_density);

    rep.metrics.push_back({"j_optimal", j_opt.value_or(std::numeric_limits<double>::infinity())});
    rep.metrics.push_back({"j_gamma_shape", j_gamma.value_or(std::numeric_limits<double>::infinity())});

    // consistency with the quadratic form: J(p) == G(sqrt p, sqrt p) for unit mass
    const std::size_t n = 2 * cfg.sl_grid;
    const double h = cfg.sl_cutoff / static_cast<double>(n);
    std::vector<double> y(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        y[i] = std::sqrt(maxwell_pdf(h * static_cast<double>(i)));
    const double g_opt = quadratic_form_g(y, y, h);
    rep.metrics.push_back({"j_vs_g_gap", std::abs(g_opt - j_opt.value_or(0.0))});

    // Rayleigh bound on random admissible test functions
    const std::size_t trials = cfg.replications == 0 ? 100 : cfg.replications;
    RngStream stream(cfg.master_seed, 0);
    double min_gap = std::numeric_limits<double>::infinity();
    std::vector<double> f(n + 1);
    for (std::size_t t = 0; t < trials; ++t) {
        double c[4];
        for (double& ck : c) ck = 2.0 * stream.uniform01() - 1.0;
        double norm_sq = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = h * static_cast<double>(i);
            const double poly = c[0] + x * (c[1] + x * (c[2] + x * c[3]));
            f[i] = x * std::exp(-0.25 * x * x) * poly;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            norm_sq += w * f[i] * f[i] * h;
        }
        if (norm_sq < 1e-12) continue;
        const double g = quadratic_form_g(f, f, h);
        min_gap = std::min(min_gap, g - 6.0 * norm_sq);
    }
    rep.metrics.push_back({"rayleigh_min_gap", min_gap});
    rep.metrics.push_back({"rayleigh_trials", static_cast<double>(trials)});
    return rep;
}

// ---------------------------------------------------------------------------

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    switch (cfg.name) {
        case ExperimentName::main_theorem: rep = run_main_theorem(cfg); break;
        case ExperimentName::mcm_energy: rep = run_mcm_energy(cfg); break;
        case ExperimentName::slln: rep = run_slln(cfg); break;
        case ExperimentName::tau_sandwich: rep = run_tau_sandwich(cfg); break;
        case ExperimentName::tau_ks: rep = run_tau_ks(cfg); break;
        case ExperimentName::adaptive_slope: rep = run_adaptive_slope(cfg); break;
        case ExperimentName::stationary_fit: rep = run_stationary_fit(cfg); break;
        case ExperimentName::oscillator: rep = run_oscillator(cfg); break;
        case ExperimentName::variational: rep = run_variational(cfg); break;
    }
    rep.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!cfg.out_path.empty()) {
        std::ofstream js(cfg.out_path + ".json");
        if (!js) throw std::invalid_argument("cannot write to " + cfg.out_path + ".json");
        js << rep.to_json().dump(2) << '\n';
        std::ofstream cs(cfg.out_path + ".csv");
        if (!cs) throw std::invalid_argument("cannot write to " + cfg.out_path + ".csv");
        cs << rep.to_csv();
    }
    return rep;
}

}  // namespace wapprox
