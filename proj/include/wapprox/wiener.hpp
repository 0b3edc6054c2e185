#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wapprox/grid.hpp"
#include "wapprox/rng.hpp"
#include "wapprox/sample_path.hpp"

namespace wapprox {

/// Standard Wiener path on the given knot times (times[0] must be 0).
/// Increments are generated directly per cell with variance equal to the
/// cell width, so geometric grids with huge horizons stay O(n).
inline SamplePath sample_wiener(const std::vector<double>& times, RngStream& stream) {
    if (times.size() < 2 || times.front() != 0.0)
        throw std::invalid_argument("wiener: need times starting at 0");
    SamplePath path;
    path.times = times;
    path.values.resize(times.size());
    path.values[0] = 0.0;
    double w = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        if (!(dt > 0.0))
            throw std::invalid_argument("wiener: times must be strictly increasing");
        w += stream.gaussian() * std::sqrt(dt);
        path.values[i] = w;
    }
    return path;
}

inline SamplePath sample_wiener(const GridSpec& grid, RngStream& stream) {
    grid.validate();
    return sample_wiener(grid.times(), stream);
}

inline SamplePath sample_wiener(const GridSpec& grid, std::uint64_t seed) {
    RngStream stream(seed);
    return sample_wiener(grid, stream);
}

/// Ornstein-Uhlenbeck transform U(tau) = e^{-tau/2} W(e^tau): keeps the
/// sub-path with t >= 1 and maps each knot (t, w) to (log t, w / sqrt(t)).
inline SamplePath to_ou(const SamplePath& path) {
    path.validate();
    SamplePath out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path.times[i] < 1.0) continue;
        out.times.push_back(std::log(path.times[i]));
        out.values.push_back(path.values[i] / std::sqrt(path.times[i]));
    }
    if (out.times.size() < 2)
        throw std::domain_error("to_ou: path has no usable sub-path with t >= 1");
    return out;
}

/// Brownian scaling (t, w) -> (t/c, w/sqrt(c)); energy of any polyline is
/// invariant under this map.
inline SamplePath brownian_scaling(const SamplePath& path, double c) {
    if (!(c > 0.0)) throw std::domain_error("brownian_scaling: c must be positive");
    path.validate();
    SamplePath out;
    out.times.resize(path.size());
    out.values.resize(path.size());
    const double inv_sqrt_c = 1.0 / std::sqrt(c);
    for (std::size_t i = 0; i < path.size(); ++i) {
        out.times[i] = path.times[i] / c;
        out.values[i] = path.values[i] * inv_sqrt_c;
    }
    return out;
}

}  // namespace wapprox
