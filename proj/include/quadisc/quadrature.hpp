#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "quadisc/numeric.hpp"

namespace quadisc {

/// Integrand for tanh-sinh integration. Receives the abscissa and its
/// distances from both endpoints. Near an endpoint the distance carries full
/// relative accuracy while (x - a) computed from x alone would not, which is
/// what makes inverse-square-root endpoint singularities integrable to 1e-10
/// in doubles.
using endpoint_integrand = std::function<double(double x, double dist_a, double dist_b)>;

/// Tanh-sinh quadrature on (a, b) with level doubling.
/// Converged when successive levels agree to tol * max(1, |I|); throws
/// convergence_error if max_level is exhausted first.
inline double integrate_tanh_sinh(const endpoint_integrand& f, double a, double b,
                                  double tol = 1e-10, int max_level = 12) {
    if (!(b > a)) throw std::invalid_argument("integrate_tanh_sinh: need b > a");

    const double len = b - a;
    const double half = 0.5 * std::numbers::pi;
    // |u| = (pi/2) sinh(t_max) ~ 354 keeps endpoint distances above the
    // denormal range; nodes beyond contribute below 1e-300.
    const double t_max = 6.11;

    // One node's weighted contribution. u = (pi/2) sinh t.
    auto node = [&](double t) -> double {
        const double u = half * std::sinh(t);
        const double eu = std::exp(-2.0 * std::abs(u));
        const double sech = 2.0 * std::exp(-std::abs(u)) / (1.0 + eu);
        const double w = 0.5 * len * half * std::cosh(t) * sech * sech;
        // (1 +- tanh u)/2 in cancellation-free form.
        const double near = len * eu / (1.0 + eu);  // distance from the closer endpoint
        const double far = len / (1.0 + eu);        // distance from the farther one
        double x, da, db;
        if (u >= 0.0) {
            db = near;
            da = far;
            x = b - db;
        } else {
            da = near;
            db = far;
            x = a + da;
        }
        const double v = f(x, da, db);
        if (!std::isfinite(v)) throw convergence_error("integrate_tanh_sinh: integrand not finite");
        return w * v;
    };

    double h = 1.0;
    std::vector<double> terms;
    terms.push_back(node(0.0));
    for (int k = 1; k * h <= t_max; ++k) {
        terms.push_back(node(k * h));
        terms.push_back(node(-k * h));
    }
    double prev = h * pairwise_sum(terms);

    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        terms.clear();
        // Only the odd multiples of the new step are new nodes.
        for (int k = 1; k * h <= t_max; k += 2) {
            terms.push_back(node(k * h));
            terms.push_back(node(-k * h));
        }
        const double cur = 0.5 * prev + h * pairwise_sum(terms);
        if (level >= 2 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    throw convergence_error("integrate_tanh_sinh: no convergence at max_level");
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    if (depth > 60) throw convergence_error("integrate_adaptive_simpson: recursion too deep");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace detail

/// Adaptive Simpson integration for smooth integrands on [a, b].
inline double integrate_adaptive_simpson(const std::function<double(double)>& f, double a,
                                         double b, double tol = 1e-10) {
    if (a == b) return 0.0;
    const double sign = (b > a) ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

/// Composite Simpson on an already tabulated uniform grid (even panel count).
inline double composite_simpson(std::span<const double> values, double h) {
    const std::size_t n = values.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("composite_simpson: need an odd number of samples");
    double acc = values[0] + values[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) acc += values[i] * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace quadisc
