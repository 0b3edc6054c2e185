#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wapprox {

/// Discretized continuous function: strictly increasing time knots with one
/// value per knot. Wiener paths, Ornstein-Uhlenbeck paths and majorants all
/// use this representation; evaluation between knots is linear.
struct SamplePath {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const { return times.size(); }

    void validate() const {
        if (times.size() < 2)
            throw std::invalid_argument("sample path: need at least two knots");
        if (times.size() != values.size())
            throw std::invalid_argument("sample path: times/values size mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("sample path: times must be strictly increasing");
    }

    /// Linear interpolation; t must lie within [times.front(), times.back()].
    double value_at(double t) const {
        if (t < times.front() || t > times.back())
            throw std::domain_error("sample path: evaluation outside domain");
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (times[mid] <= t ? lo : hi) = mid;
        }
        const double w = (t - times[lo]) / (times[hi] - times[lo]);
        return values[lo] + w * (values[hi] - values[lo]);
    }
};

}  // namespace wapprox
