#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "wapprox/experiments.hpp"
#include "wapprox/stats.hpp"

using namespace wapprox;

TEST_CASE("ks statistic: formula cases") {
    CHECK(ks_statistic({0.5}, [](double x) { return x; }) == Catch::Approx(0.5));

    const std::size_t n = 50;
    std::vector<double> quantiles;
    for (std::size_t i = 1; i <= n; ++i)
        quantiles.push_back((static_cast<double>(i) - 0.5) / static_cast<double>(n));
    CHECK(ks_statistic(quantiles, [](double x) { return x; }) ==
          Catch::Approx(0.5 / static_cast<double>(n)));

    CHECK_THROWS_AS(ks_statistic({}, [](double x) { return x; }), std::domain_error);

    // n = 2000 inverse-CDF draws from the reference law itself stay under the
    // 1% Kolmogorov critical value for nearly all seeds
    std::size_t hits = 0;
    const std::size_t trials = 200;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        RngStream stream(321, seed);
        std::vector<double> s;
        for (int i = 0; i < 2000; ++i) s.push_back(stream.uniform01());
        if (ks_statistic(s, [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); }) <
            1.63 / std::sqrt(2000.0))
            ++hits;
    }
    CHECK(hits >= trials * 99 / 100);
}

TEST_CASE("log-slope fit: exact and noisy cases") {
    const LogSlopeFit f1 = fit_log_slope(
        {{std::exp(1.0), 0.5}, {std::exp(2.0), 1.0}, {std::exp(3.0), 1.5}});
    CHECK(f1.slope == Catch::Approx(0.5).margin(1e-12));
    CHECK(f1.intercept == Catch::Approx(0.0).margin(1e-12));
    CHECK(f1.r_squared == Catch::Approx(1.0));

    const LogSlopeFit f2 =
        fit_log_slope({{std::exp(1.0), 1.0}, {std::exp(2.0), 2.0}, {std::exp(3.0), 3.0}});
    CHECK(f2.slope == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(fit_log_slope({{2.0, 1.0}, {3.0, 2.0}}), std::domain_error);
    CHECK_THROWS_AS(fit_log_slope({{2.0, 1.0}, {2.0, 2.0}, {2.0, 3.0}}), std::domain_error);

    // OLS sampling distribution around the true slope 0.5
    std::size_t in_band = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RngStream stream(17, seed);
        std::vector<std::pair<double, double>> pts;
        for (int k = 1; k <= 10; ++k) {
            const double t = std::exp(static_cast<double>(k));
            pts.push_back({t, 0.5 * std::log(t) + 0.01 * stream.gaussian()});
        }
        const double slope = fit_log_slope(pts).slope;
        if (slope > 0.45 && slope < 0.55) ++in_band;
    }
    CHECK(in_band == 100);
}

TEST_CASE("experiment config round-trips through json") {
    ExperimentConfig cfg;
    cfg.name = ExperimentName::tau_sandwich;
    cfg.master_seed = 987654321;
    cfg.replications = 123;
    cfg.t_list = {10.0, 100.5};
    cfg.v_list = {2.5};
    cfg.delta = 0.31;
    cfg.r = 1.75;
    cfg.tau_a = 0.5;
    cfg.grid_points = 4096;
    cfg.grid_ratio = 1.007;
    cfg.first_cell = 2e-6;
    cfg.horizon_factor = 35.0;
    cfg.dt = 5e-4;
    cfg.tau_max = 123.0;
    cfg.z0 = 0.9;
    cfg.burn_in = 7.0;
    cfg.sample_count = 321;
    cfg.sl_cutoff = 12.5;
    cfg.sl_grid = 2048;
    cfg.sl_modes = 2;
    cfg.scaled_route = true;
    cfg.assess_grid_bias = false;
    cfg.out_path = "/tmp/some_report";

    const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());

    CHECK_THROWS_AS(parse_experiment_name("not-an-experiment"), std::invalid_argument);
    ExperimentConfig bad = cfg;
    bad.delta = 0.7;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("zero replications produce an empty report with success") {
    for (ExperimentName name : {ExperimentName::main_theorem, ExperimentName::slln,
                                ExperimentName::tau_sandwich, ExperimentName::tau_ks,
                                ExperimentName::adaptive_slope}) {
        ExperimentConfig cfg;
        cfg.name = name;
        cfg.replications = 0;
        cfg.t_list = {16.0, 64.0, 256.0};
        cfg.v_list = {4.0};
        const ExperimentReport rep = run_experiment(cfg);
        CHECK(rep.points.empty());
        CHECK(rep.experiment == to_string(name));
    }
}

TEST_CASE("reports serialize deterministically; wall clock only in json") {
    ExperimentConfig cfg;
    cfg.name = ExperimentName::slln;
    cfg.master_seed = 2718;
    cfg.replications = 40;
    cfg.v_list = {std::exp(1.0), std::exp(2.0)};
    cfg.grid_ratio = 1.01;

    const ExperimentReport a = run_experiment(cfg);
    const ExperimentReport b = run_experiment(cfg);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_json(false) == b.to_json(false));
    CHECK(a.to_csv().find("wall_clock") == std::string::npos);

    const std::string csv = a.to_csv();
    CHECK(csv.rfind("experiment,parameter,value,statistic,result,count,censored_fraction\n", 0) == 0);
    CHECK(csv.find("slln,V,") != std::string::npos);
    CHECK(csv.find("mean_ratio") != std::string::npos);

    const auto js = a.to_json();
    CHECK(js.at("version").get<std::string>() == std::string(library_version));
    CHECK(js.at("experiment").get<std::string>() == "slln");
    CHECK(js.contains("wall_clock_seconds"));
    CHECK(ExperimentConfig::from_json(js.at("config")).master_seed == 2718);
}

TEST_CASE("run_experiment writes json and csv files") {
    ExperimentConfig cfg;
    cfg.name = ExperimentName::oscillator;
    cfg.sl_grid = 1200;
    cfg.sl_modes = 1;
    cfg.out_path = "/tmp/wapprox_test_report";
    const ExperimentReport rep = run_experiment(cfg);

    std::ifstream js("/tmp/wapprox_test_report.json");
    REQUIRE(js.good());
    nlohmann::json parsed;
    js >> parsed;
    CHECK(parsed.at("experiment") == "oscillator");
    std::ifstream cs("/tmp/wapprox_test_report.csv");
    REQUIRE(cs.good());
    std::stringstream buf;
    buf << cs.rdbuf();
    CHECK(buf.str() == rep.to_csv());
    std::remove("/tmp/wapprox_test_report.json");
    std::remove("/tmp/wapprox_test_report.csv");

    ExperimentConfig bad = cfg;
    bad.out_path = "/nonexistent_dir/report";
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
}

TEST_CASE("main-theorem cross-validation: direct vs scaled route") {
    ExperimentConfig direct;
    direct.name = ExperimentName::main_theorem;
    direct.master_seed = 12;
    direct.replications = 80;
    direct.grid_points = std::size_t{1} << 17;
    direct.assess_grid_bias = false;
    for (int k = 10; k <= 17; ++k) direct.t_list.push_back(std::ldexp(1.0, k));

    ExperimentConfig scaled = direct;
    scaled.master_seed = 13;
    scaled.scaled_route = true;

    const ExperimentReport rd = run_experiment(direct);
    const ExperimentReport rs = run_experiment(scaled);
    REQUIRE(rd.fit.has_value());
    REQUIRE(rs.fit.has_value());
    CHECK(std::abs(rd.fit->slope - rs.fit->slope) < 0.05);
}

TEST_CASE("mcm-energy slope sits near one half at moderate scale") {
    ExperimentConfig cfg;
    cfg.name = ExperimentName::mcm_energy;
    cfg.master_seed = 5;
    cfg.replications = 60;
    cfg.grid_points = std::size_t{1} << 18;
    for (int k = 10; k <= 18; ++k) cfg.t_list.push_back(std::ldexp(1.0, k));
    const ExperimentReport rep = run_experiment(cfg);
    REQUIRE(rep.fit.has_value());
    CHECK(rep.fit->slope > 0.3);
    CHECK(rep.fit->slope < 0.7);
}

TEST_CASE("censoring fractions are reported by tau experiments") {
    ExperimentConfig cfg;
    cfg.name = ExperimentName::tau_ks;
    cfg.master_seed = 31;
    cfg.replications = 300;
    const ExperimentReport rep = run_experiment(cfg);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].censored_fraction < 0.01);
    CHECK(rep.points[0].stats[0].first == "ks_distance");
}
