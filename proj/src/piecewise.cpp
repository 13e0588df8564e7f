#include "stochuc/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochuc {

double PiecewiseCurve::slope(int k) const {
    const double w = width(k);
    return w > 0.0 ? (y[static_cast<std::size_t>(k) + 1] - y[static_cast<std::size_t>(k)]) / w : 0.0;
}

double PiecewiseCurve::evaluate(double v) const {
    const double slack = 1e-9 * (1.0 + std::max(std::abs(x_min()), std::abs(x_max())));
    if (v < x_min() - slack || v > x_max() + slack) throw std::out_of_range("piecewise curve evaluated outside its domain");
    if (segments() == 0) return y.front();
    v = std::clamp(v, x_min(), x_max());
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    auto k = static_cast<std::size_t>(std::distance(x.begin(), it));
    k = std::clamp<std::size_t>(k, 1, x.size() - 1) - 1;
    const double t = (v - x[k]) / (x[k + 1] - x[k]);
    return y[k] + t * (y[k + 1] - y[k]);
}

PiecewiseCurve linearize_quadratic(const Quadratic& q, double x_min, double x_max, int segments) {
    if (q.quad < 0.0) throw std::invalid_argument("linearize_quadratic: non-convex quadratic");
    if (segments < 1) throw std::invalid_argument("linearize_quadratic: segments must be >= 1");
    if (x_min > x_max) throw std::invalid_argument("linearize_quadratic: empty domain");
    PiecewiseCurve c;
    if (x_min == x_max) {
        c.x = {x_min};
        c.y = {q(x_min)};
        return c;
    }
    const double w = (x_max - x_min) / segments;
    for (int k = 0; k <= segments; ++k) {
        const double xk = (k == segments) ? x_max : x_min + k * w;
        c.x.push_back(xk);
        c.y.push_back(q(xk));
    }
    return c;
}

double chord_error_bound(double quad, double x_min, double x_max, int segments) {
    const double w = (x_max - x_min) / segments;
    return quad * w * w / 4.0;
}

}  // namespace stochuc
