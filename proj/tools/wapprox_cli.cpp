// Experiment runner for the Wiener-approximation library: one subcommand per
// experiment, deterministic given --seed, reports written as JSON + CSV.

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wapprox/experiments.hpp"
#include "wapprox/qp_oracle.hpp"

namespace {

std::vector<double> dyadic_range(int lo_exp, int hi_exp) {
    std::vector<double> v;
    for (int k = lo_exp; k <= hi_exp; ++k) v.push_back(std::ldexp(1.0, k));
    return v;
}

struct CliState {
    wapprox::ExperimentConfig cfg;
    bool dry_run = false;
};

void add_common_options(CLI::App* sub, CliState& st) {
    sub->add_option("--seed", st.cfg.master_seed, "master seed");
    sub->add_option("--reps", st.cfg.replications, "replication count");
    sub->add_option("--out", st.cfg.out_path, "output base path (.json/.csv appended)");
    sub->add_flag("--dry-run", st.dry_run, "print the resolved config and exit");
    sub->add_option("--grid-points", st.cfg.grid_points, "knots per simulated path");
    sub->add_option("--grid-ratio", st.cfg.grid_ratio,
                    "geometric cell growth (0 = per-experiment default)");
    sub->add_option("--first-cell", st.cfg.first_cell,
                    "first grid cell (times r^2 or a^2 where applicable)");
    sub->add_option("--horizon-factor", st.cfg.horizon_factor,
                    "simulation horizon as a multiple of the relevant scale^2");
}

int run(const CliState& st) {
    if (st.dry_run) {
        std::cout << st.cfg.to_json().dump(2) << '\n';
        return 0;
    }
    const wapprox::ExperimentReport rep = wapprox::run_experiment(st.cfg);
    if (st.cfg.out_path.empty()) std::cout << rep.to_json().dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wapprox: energy-saving unilateral approximation experiments"};
    app.require_subcommand(1);

    CliState st;
    using wapprox::ExperimentName;

    auto* main_th = app.add_subcommand(
        "main-theorem", "optimal majorant energy I_W(T, r) vs log T");
    std::vector<double> t_override, v_override;
    main_th->add_option("--T-list", t_override, "horizons");
    main_th->add_option("--r", st.cfg.r, "start height");
    main_th->add_flag("--scaled", st.cfg.scaled_route,
                      "simulate on the unit interval and rescale (cross-validation route)");
    main_th->add_flag("--assess-grid-bias", st.cfg.assess_grid_bias,
                      "re-run with half the knots and report the slope difference");
    add_common_options(main_th, st);

    auto* mcm = app.add_subcommand("mcm-energy",
                                   "global majorant energy restricted to [0, T]");
    mcm->add_option("--T-list", t_override, "horizons");
    mcm->add_option("--r", st.cfg.r, "start height");
    add_common_options(mcm, st);

    auto* slln = app.add_subcommand("slln", "strong law for L(1, V) / log V");
    slln->add_option("--V-list", v_override, "V values (each > 1, increasing)");
    add_common_options(slln, st);

    auto* sandwich = app.add_subcommand(
        "tau-sandwich", "frequency of tau(T^{1/2+d}) > T > tau(T^{1/2-d})");
    sandwich->add_option("--T-list", t_override, "horizons");
    sandwich->add_option("--delta", st.cfg.delta, "exponent offset in (0, 1/2)");
    add_common_options(sandwich, st);

    auto* tau_ks = app.add_subcommand("tau-ks",
                                      "KS fit of tau(a)/a^2 against its density");
    tau_ks->add_option("--a", st.cfg.tau_a, "tilt parameter a");
    add_common_options(tau_ks, st);

    auto* adaptive = app.add_subcommand("adaptive-slope",
                                        "adaptive pursuit energy vs log T");
    adaptive->add_option("--T-list", t_override, "horizons");
    adaptive->add_option("--r", st.cfg.r, "initial gap");
    add_common_options(adaptive, st);

    auto* stationary = app.add_subcommand("stationary-fit",
                                          "gap diffusion vs stationary law");
    stationary->add_option("--dt", st.cfg.dt, "Euler step");
    stationary->add_option("--tau-max", st.cfg.tau_max, "diffusion horizon");
    stationary->add_option("--z0", st.cfg.z0, "initial gap");
    stationary->add_option("--burn-in", st.cfg.burn_in, "discarded initial stretch");
    stationary->add_option("--samples", st.cfg.sample_count, "thinned sample count");
    add_common_options(stationary, st);

    auto* osc = app.add_subcommand("oscillator",
                                   "Sturm-Liouville eigenvalues -4y'' + x^2 y = g y");
    osc->add_option("--cutoff", st.cfg.sl_cutoff, "domain cutoff L");
    osc->add_option("--grid", st.cfg.sl_grid, "grid cells");
    osc->add_option("--modes", st.cfg.sl_modes, "eigenpairs to compute");
    add_common_options(osc, st);

    auto* vari = app.add_subcommand("variational",
                                    "energy-rate functional J and Rayleigh bound");
    vari->add_option("--cutoff", st.cfg.sl_cutoff, "domain cutoff L");
    vari->add_option("--grid", st.cfg.sl_grid, "grid cells (doubled internally)");
    add_common_options(vari, st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (main_th->parsed()) st.cfg.name = ExperimentName::main_theorem;
        if (mcm->parsed()) st.cfg.name = ExperimentName::mcm_energy;
        if (slln->parsed()) st.cfg.name = ExperimentName::slln;
        if (sandwich->parsed()) st.cfg.name = ExperimentName::tau_sandwich;
        if (tau_ks->parsed()) st.cfg.name = ExperimentName::tau_ks;
        if (adaptive->parsed()) st.cfg.name = ExperimentName::adaptive_slope;
        if (stationary->parsed()) st.cfg.name = ExperimentName::stationary_fit;
        if (osc->parsed()) st.cfg.name = ExperimentName::oscillator;
        if (vari->parsed()) st.cfg.name = ExperimentName::variational;

        if (!t_override.empty()) st.cfg.t_list = t_override;
        if (!v_override.empty()) st.cfg.v_list = v_override;

        // per-experiment defaults when the user did not pass lists/counts
        switch (st.cfg.name) {
            case ExperimentName::main_theorem:
            case ExperimentName::mcm_energy:
                if (st.cfg.t_list.empty()) st.cfg.t_list = dyadic_range(10, 24);
                if (st.cfg.replications == 0) st.cfg.replications = 200;
                break;
            case ExperimentName::slln:
                if (st.cfg.v_list.empty())
                    st.cfg.v_list = {std::exp(1.0), std::exp(2.0), std::exp(3.0), std::exp(4.0)};
                if (st.cfg.replications == 0) st.cfg.replications = 10000;
                break;
            case ExperimentName::tau_sandwich:
                if (st.cfg.t_list.empty()) st.cfg.t_list = {1e4, 1e5, 1e6};
                if (st.cfg.replications == 0) st.cfg.replications = 2000;
                break;
            case ExperimentName::tau_ks:
                if (st.cfg.replications == 0) st.cfg.replications = 2000;
                break;
            case ExperimentName::adaptive_slope:
                if (st.cfg.t_list.empty()) st.cfg.t_list = dyadic_range(10, 20);
                if (st.cfg.replications == 0) st.cfg.replications = 200;
                break;
            case ExperimentName::variational:
                if (st.cfg.replications == 0) st.cfg.replications = 100;
                break;
            default: break;
        }
        return run(st);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const wapprox::integration_failure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const wapprox::oracle_failure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
