#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wapprox/polyline.hpp"
#include "wapprox/sample_path.hpp"

namespace wapprox {

/// Incremental upper concave hull (minimal concave majorant of the knot set).
/// Knots are pushed in time order; the current stack is the hull of the
/// prefix, with strictly decreasing segment slopes. cum_energy[i] is the hull
/// energy accumulated from the first vertex up to vertex i, so energies of
/// hull sections are O(1) lookups.
class ConcaveHullBuilder {
public:
    void push(double t, double y) {
        if (!ts_.empty() && !(t > ts_.back()))
            throw std::invalid_argument("hull: times must be strictly increasing");
        while (ts_.size() >= 2) {
            const std::size_t m = ts_.size();
            // pop the last vertex when it no longer makes a strict right turn:
            // slope(prev,last) <= slope(last,new), compared cross-multiplied
            const double lhs = (ys_[m - 1] - ys_[m - 2]) * (t - ts_[m - 1]);
            const double rhs = (y - ys_[m - 1]) * (ts_[m - 1] - ts_[m - 2]);
            if (lhs <= rhs) {
                ts_.pop_back();
                ys_.pop_back();
                ce_.pop_back();
            } else {
                break;
            }
        }
        double e = 0.0;
        if (!ts_.empty()) {
            const double dy = y - ys_.back();
            e = ce_.back() + dy * dy / (t - ts_.back());
        }
        ts_.push_back(t);
        ys_.push_back(y);
        ce_.push_back(e);
    }

    std::size_t size() const { return ts_.size(); }
    const std::vector<double>& times() const { return ts_; }
    const std::vector<double>& values() const { return ys_; }
    const std::vector<double>& cum_energy() const { return ce_; }

    PolylineFunction hull() const {
        if (ts_.size() < 2) throw std::logic_error("hull: fewer than two vertices");
        return PolylineFunction{ts_, ys_, true};
    }

    /// Index of the last vertex whose tilted value y - t/a is maximal
    /// (the hull vertex realizing the last argmax of W(t) - t/a over knots).
    std::size_t tilted_argmax_index(double a) const {
        if (!(a > 0.0)) throw std::invalid_argument("tilted_argmax: a must be positive");
        std::size_t best = 0;
        double best_v = ys_[0] - ts_[0] / a;
        for (std::size_t i = 1; i < ts_.size(); ++i) {
            const double v = ys_[i] - ts_[i] / a;
            if (v >= best_v) {
                best_v = v;
                best = i;
            }
        }
        return best;
    }

    /// Hull energy between two vertex indices (exact; uses cached prefix sums).
    double energy_between_vertices(std::size_t i, std::size_t j) const {
        if (i > j || j >= ts_.size()) throw std::invalid_argument("energy_between_vertices: bad indices");
        return ce_[j] - ce_[i];
    }

private:
    std::vector<double> ts_, ys_, ce_;
};

/// Minimal concave majorant of a sampled path: the upper concave hull of its
/// knots. Output knots are a subset of input knots; slopes strictly decrease.
inline PolylineFunction concave_majorant(const SamplePath& path) {
    path.validate();
    ConcaveHullBuilder b;
    for (std::size_t i = 0; i < path.size(); ++i) b.push(path.times[i], path.values[i]);
    return b.hull();
}

inline PolylineFunction concave_majorant(const PolylineFunction& f) {
    f.validate();
    ConcaveHullBuilder b;
    for (std::size_t i = 0; i < f.size(); ++i) b.push(f.times[i], f.values[i]);
    return b.hull();
}

struct TangentLine {
    double slope = 0.0;
    double touch_time = 0.0;
};

/// Tangent to a concave hull from the exterior point (0, r), with
/// hull(0) < r < max hull value. Returns the minimal-slope line through
/// (0, r) that dominates the hull; it touches the hull at a knot. Ties in
/// slope pick the latest touch time (maximal affine segment). Returns
/// nullopt when r >= max hull value (constant case of the optimal majorant).
inline std::optional<TangentLine> tangent_from_point(const PolylineFunction& hull, double r) {
    hull.validate();
    if (hull.times.front() != 0.0)
        throw std::invalid_argument("tangent_from_point: hull must start at t = 0");
    if (!(r > hull.values.front()))
        throw std::invalid_argument("tangent_from_point: need r > hull(0)");
    double maxv = hull.values.front();
    for (double v : hull.values) maxv = std::max(maxv, v);
    if (r >= maxv) return std::nullopt;

    // minimal dominating slope = max over knots of the chord slope from (0, r)
    double best_slope = -std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const double s = (hull.values[i] - r) / hull.times[i];
        if (s >= best_slope) {
            best_slope = s;
            best_t = hull.times[i];
        }
    }
    return TangentLine{best_slope, best_t};
}

enum class MajorantCase { constant, three_segment };

/// Optimal energy-saving unilateral majorant of a sampled path: the unique
/// minimizer of the kinetic energy among functions h >= path with h(0) = r.
/// Either constant (r at least the path maximum) or: affine tangent from
/// (0, r) on [0, tangent_end], the minimal concave majorant on
/// [tangent_end, max_time], constant after max_time (first argmax of the path).
struct MajorantDecomposition {
    PolylineFunction chi;
    MajorantCase kind = MajorantCase::constant;
    double tangent_end = 0.0;  // theta(r); meaningful in the three_segment case
    double max_time = 0.0;     // first argmax time of the path
    EnergyValue energy{0.0};
};

inline MajorantDecomposition optimal_unilateral_majorant(const SamplePath& path, double r) {
    path.validate();
    if (!(r > path.values.front()))
        throw std::invalid_argument("optimal_unilateral_majorant: need r > path(0)");

    double maxv = path.values.front();
    double t_max = path.times.front();
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path.values[i] > maxv) {  // first argmax: strict improvement only
            maxv = path.values[i];
            t_max = path.times[i];
        }
    }

    MajorantDecomposition d;
    if (r >= maxv) {
        d.kind = MajorantCase::constant;
        d.chi = PolylineFunction{{path.times.front(), path.times.back()}, {r, r}, true};
        d.tangent_end = path.times.front();
        d.max_time = path.times.front();
        d.energy = EnergyValue{0.0};
        return d;
    }

    const PolylineFunction hull = concave_majorant(path);
    const auto tangent = tangent_from_point(hull, r);
    if (!tangent) throw std::logic_error("optimal_unilateral_majorant: tangent must exist when r < max");

    d.kind = MajorantCase::three_segment;
    d.tangent_end = tangent->touch_time;
    d.max_time = t_max;

    d.chi.times = {path.times.front()};
    d.chi.values = {r};
    for (std::size_t i = 0; i < hull.size(); ++i) {
        if (hull.times[i] >= tangent->touch_time && hull.times[i] <= t_max) {
            d.chi.times.push_back(hull.times[i]);
            d.chi.values.push_back(hull.values[i]);
        }
    }
    if (d.chi.times.back() < path.times.back()) {
        d.chi.times.push_back(path.times.back());
        d.chi.values.push_back(maxv);
    }
    d.chi.concave = true;
    d.energy = energy(d.chi);
    return d;
}

}  // namespace wapprox
