#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wapprox/stats.hpp"
#include "wapprox/version.hpp"

namespace wapprox {

/// Deterministic shortest-faithful double formatting for CSV output.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

/// Statistics attached to one parameter point of an experiment.
struct PointStat {
    std::string parameter;  // e.g. "T" or "V"
    double value = 0.0;
    std::vector<std::pair<std::string, double>> stats;
    std::size_t count = 0;
    double censored_fraction = 0.0;
};

/// Serialized result of one experiment run. The CSV view carries the
/// per-point table and scalar metrics; wall clock lives only in the JSON
/// view so CSV re-runs are byte-identical.
struct ExperimentReport {
    std::string experiment;
    nlohmann::ordered_json config_echo;
    std::vector<PointStat> points;
    std::vector<std::pair<std::string, double>> metrics;
    std::optional<LogSlopeFit> fit;
    double wall_clock_seconds = 0.0;

    nlohmann::ordered_json to_json(bool include_wall_clock = true) const {
        nlohmann::ordered_json j;
        j["version"] = library_version;
        j["experiment"] = experiment;
        j["config"] = config_echo;
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (const auto& p : points) {
            nlohmann::ordered_json jp;
            jp["parameter"] = p.parameter;
            jp["value"] = p.value;
            nlohmann::ordered_json st;
            for (const auto& [k, v] : p.stats) st[k] = v;
            jp["statistics"] = st;
            jp["count"] = p.count;
            jp["censored_fraction"] = p.censored_fraction;
            pts.push_back(jp);
        }
        j["points"] = pts;
        nlohmann::ordered_json jm;
        for (const auto& [k, v] : metrics) jm[k] = v;
        j["metrics"] = jm;
        if (fit) {
            j["fit"] = {{"slope", fit->slope},
                        {"intercept", fit->intercept},
                        {"r_squared", fit->r_squared}};
        }
        if (include_wall_clock) j["wall_clock_seconds"] = wall_clock_seconds;
        return j;
    }

    std::string to_csv() const {
        std::string out = "experiment,parameter,value,statistic,result,count,censored_fraction\n";
        for (const auto& p : points) {
            for (const auto& [k, v] : p.stats) {
                out += experiment + ',' + p.parameter + ',' + format_double(p.value) + ',' +
                       k + ',' + format_double(v) + ',' + std::to_string(p.count) + ',' +
                       format_double(p.censored_fraction) + '\n';
            }
        }
        if (fit) {
            out += experiment + ",fit,,slope," + format_double(fit->slope) + ",,\n";
            out += experiment + ",fit,,intercept," + format_double(fit->intercept) + ",,\n";
            out += experiment + ",fit,,r_squared," + format_double(fit->r_squared) + ",,\n";
        }
        for (const auto& [k, v] : metrics)
            out += experiment + ",metric,," + k + ',' + format_double(v) + ",,\n";
        return out;
    }
};

}  // namespace wapprox
