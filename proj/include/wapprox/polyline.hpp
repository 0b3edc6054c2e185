#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wapprox/sample_path.hpp"

namespace wapprox {

/// Piecewise-linear function given by its knots. Closed under concave-hull
/// and tangent operations, and carries an exact energy (sum of squared
/// slopes times cell widths).
struct PolylineFunction {
    std::vector<double> times;
    std::vector<double> values;
    bool concave = false;  // set by hull constructors; assertable via slopes_nonincreasing

    std::size_t size() const { return times.size(); }

    void validate() const {
        if (times.size() < 2)
            throw std::invalid_argument("polyline: need at least two knots");
        if (times.size() != values.size())
            throw std::invalid_argument("polyline: times/values size mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("polyline: duplicate or decreasing time knots");
    }

    double value_at(double t) const {
        if (t < times.front() || t > times.back())
            throw std::domain_error("polyline: evaluation outside domain");
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (times[mid] <= t ? lo : hi) = mid;
        }
        const double w = (t - times[lo]) / (times[hi] - times[lo]);
        return values[lo] + w * (values[hi] - values[lo]);
    }

    static PolylineFunction from_path(const SamplePath& p) {
        p.validate();
        return PolylineFunction{p.times, p.values, false};
    }
};

/// Kinetic energy of an absolutely continuous function, here exact for
/// polylines: sum of (dy)^2/dt over segments.
struct EnergyValue {
    double value = 0.0;
};

inline EnergyValue energy(const PolylineFunction& f) {
    f.validate();
    double e = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double dy = f.values[i] - f.values[i - 1];
        const double dt = f.times[i] - f.times[i - 1];
        e += dy * dy / dt;
    }
    return EnergyValue{e};
}

inline bool slopes_nonincreasing(const PolylineFunction& f, double tol = 0.0) {
    for (std::size_t i = 2; i < f.size(); ++i) {
        const double s1 = (f.values[i - 1] - f.values[i - 2]) / (f.times[i - 1] - f.times[i - 2]);
        const double s2 = (f.values[i] - f.values[i - 1]) / (f.times[i] - f.times[i - 1]);
        if (s2 > s1 + tol) return false;
    }
    return true;
}

}  // namespace wapprox
