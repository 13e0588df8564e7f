#pragma once

#include <vector>

namespace stochuc {

struct Quadratic {
    double constant = 0.0, linear = 0.0, quad = 0.0;
    [[nodiscard]] double operator()(double x) const { return constant + linear * x + quad * x * x; }
};

/// Chordal interpolation of a convex function through ordered breakpoints.
struct PiecewiseCurve {
    std::vector<double> x;
    std::vector<double> y;

    [[nodiscard]] double x_min() const { return x.front(); }
    [[nodiscard]] double x_max() const { return x.back(); }
    [[nodiscard]] int segments() const { return static_cast<int>(x.size()) - 1; }
    [[nodiscard]] double width(int k) const { return x[static_cast<std::size_t>(k) + 1] - x[static_cast<std::size_t>(k)]; }
    [[nodiscard]] double slope(int k) const;
    /// Linear interpolation; throws std::out_of_range outside [x_min, x_max] (1e-9 slack).
    [[nodiscard]] double evaluate(double v) const;
};

/// Uniform-breakpoint chord approximation of a convex quadratic on [x_min, x_max].
/// A degenerate domain yields a single breakpoint and zero segments.
/// Throws std::invalid_argument if quad < 0, segments < 1 or x_min > x_max.
[[nodiscard]] PiecewiseCurve linearize_quadratic(const Quadratic& q, double x_min, double x_max, int segments);

/// Maximum chord error quad * w^2 / 4 for segment width w = (x_max - x_min) / segments.
[[nodiscard]] double chord_error_bound(double quad, double x_min, double x_max, int segments);

}  // namespace stochuc
