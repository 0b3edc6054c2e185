#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wapprox {

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF:
/// sup over the sorted sample of max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|).
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(std::abs(hi), std::abs(lo)));
    }
    return d;
}

struct LogSlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

/// Ordinary least squares of y against log T over points (T, y).
inline LogSlopeFit fit_log_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::domain_error("fit_log_slope: need at least 3 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& [t, y] : points) {
        if (!(t > 1.0)) throw std::domain_error("fit_log_slope: T values must exceed 1");
        const double x = std::log(t);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    if (!(det > 1e-12 * n * sxx))
        throw std::domain_error("fit_log_slope: degenerate abscissas");
    LogSlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (const auto& [t, y] : points) {
        const double pred = fit.intercept + fit.slope * std::log(t);
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - ybar) * (y - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

inline double sample_mean(const std::vector<double>& v) {
    if (v.empty()) throw std::domain_error("sample_mean: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Inverts a monotone CDF by bisection; used for quantile fixtures and
/// inverse-CDF sampling in tests.
inline double invert_monotone_cdf(const std::function<double(double)>& cdf, double prob,
                                  double lo, double hi, double tol = 1e-12) {
    if (!(prob >= 0.0 && prob <= 1.0))
        throw std::domain_error("invert_monotone_cdf: probability out of range");
    for (int it = 0; it < 200 && hi - lo > tol * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < prob ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace wapprox
