#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wapprox {

enum class GridKind { uniform, geometric };

/// Time grid on [0, horizon]. Geometric grids have cell widths growing by
/// `geometric_ratio` per cell; the first cell size is implied by
/// (horizon, point_count, ratio). Uniform step is horizon/(point_count-1).
struct GridSpec {
    GridKind kind = GridKind::uniform;
    double horizon = 1.0;
    std::size_t point_count = 2;
    double geometric_ratio = 0.0;  // > 1 for geometric grids

    static GridSpec uniform(double horizon, std::size_t point_count) {
        GridSpec g{GridKind::uniform, horizon, point_count, 0.0};
        g.validate();
        return g;
    }

    static GridSpec geometric(double horizon, std::size_t point_count, double ratio) {
        GridSpec g{GridKind::geometric, horizon, point_count, ratio};
        g.validate();
        return g;
    }

    /// Geometric grid whose first cell is (approximately) `first_cell`;
    /// the point count is derived. Used where resolution near t = 0 matters.
    static GridSpec geometric_from_first_cell(double horizon, double first_cell,
                                              double ratio) {
        if (!(horizon > 0.0) || !(first_cell > 0.0) || first_cell >= horizon)
            throw std::invalid_argument("grid: need 0 < first_cell < horizon");
        if (!(ratio > 1.0))
            throw std::invalid_argument("grid: geometric ratio must be > 1");
        const double cells =
            std::log1p(horizon / first_cell * (ratio - 1.0)) / std::log(ratio);
        const std::size_t n = static_cast<std::size_t>(std::ceil(cells)) + 1;
        return geometric(horizon, n < 2 ? 2 : n, ratio);
    }

    /// Geometric grid with a prescribed point count AND first cell: the ratio
    /// is solved for. Used by experiments that pin the knot budget.
    static GridSpec geometric_fit(double horizon, double first_cell,
                                  std::size_t point_count) {
        if (!(horizon > 0.0) || !(first_cell > 0.0) || first_cell >= horizon)
            throw std::invalid_argument("grid: need 0 < first_cell < horizon");
        if (point_count < 3)
            throw std::invalid_argument("grid: geometric_fit needs at least 3 points");
        const double n1 = static_cast<double>(point_count - 1);
        if (first_cell * n1 >= horizon)
            throw std::invalid_argument("grid: point budget already covers the horizon uniformly");
        // solve first_cell * (rho^{n-1} - 1)/(rho - 1) = horizon for rho > 1
        double lo = 1.0 + 1e-14, hi = 2.0;
        const auto span = [&](double rho) {
            return first_cell * std::expm1(n1 * std::log(rho)) / (rho - 1.0);
        };
        while (span(hi) < horizon) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (span(mid) < horizon ? lo : hi) = mid;
        }
        return geometric(horizon, point_count, 0.5 * (lo + hi));
    }

    void validate() const {
        if (!(horizon > 0.0))
            throw std::invalid_argument("grid: horizon must be positive");
        if (point_count < 2)
            throw std::invalid_argument("grid: need at least two points");
        if (kind == GridKind::geometric && !(geometric_ratio > 1.0))
            throw std::invalid_argument("grid: geometric ratio must be > 1");
    }

    double first_cell() const {
        if (kind == GridKind::uniform) return horizon / static_cast<double>(point_count - 1);
        const double n1 = static_cast<double>(point_count - 1);
        return horizon * (geometric_ratio - 1.0) / (std::pow(geometric_ratio, n1) - 1.0);
    }

    /// Knot times; times[0] = 0 and times[point_count-1] = horizon exactly.
    std::vector<double> times() const {
        validate();
        std::vector<double> t(point_count);
        t[0] = 0.0;
        if (kind == GridKind::uniform) {
            const double step = horizon / static_cast<double>(point_count - 1);
            for (std::size_t i = 1; i + 1 < point_count; ++i)
                t[i] = step * static_cast<double>(i);
        } else {
            const double delta = first_cell();
            double cell = delta;
            double acc = 0.0;
            for (std::size_t i = 1; i + 1 < point_count; ++i) {
                acc += cell;
                cell *= geometric_ratio;
                t[i] = acc;
            }
            acc += cell;
            // Rescale interior knots so the accumulated rounding drift does
            // not push the last cell negative; the end knot is pinned anyway.
            const double scale = horizon / acc;
            for (std::size_t i = 1; i + 1 < point_count; ++i) t[i] *= scale;
        }
        t[point_count - 1] = horizon;
        return t;
    }
};

}  // namespace wapprox
