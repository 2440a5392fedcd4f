#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "quadisc/numeric.hpp"
#include "quadisc/point_set.hpp"
#include "quadisc/quadrature.hpp"
#include "quadisc/spectral.hpp"

namespace quadisc {

/// One member of the two-branch instanton family, parameterized by v >= 1.
struct LegoBranchPoint {
    double v = 0.0;
    double y_minus = 0.0; // in (0, 1]
    double y_plus = 0.0;  // in [1, inf)
    double z = 0.0;
    double dz_dv = 0.0;
    double sigma = 0.0;    // rescaled action at the extremum
    double dsigma_dv = 0.0;
    double w_plus = 0.0;
};

/// The two solutions of y - log y = v, i.e. of y e^{-y} = e^{-v}.
/// The lower branch is bisected in t = log y on [-v, 0]: y_minus decays like
/// e^{-v}, and only the log variable keeps its relative accuracy (and the
/// bracket finite) for large v.
inline std::pair<double, double> y_branches(double v) {
    if (!(v >= 1.0)) throw std::invalid_argument("y_branches: v must be >= 1");
    if (v == 1.0) return {1.0, 1.0};

    // f(t) = t - e^t + v, increasing on [-v, 0]; f(-v) < 0 <= f(0).
    double lo = -v, hi = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (mid - std::exp(mid) + v < 0.0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) { // Newton polish; f' = 1 - e^t > 0 here
        const double et = std::exp(t);
        t -= (t - et + v) / (1.0 - et);
    }
    const double y_minus = std::exp(t);

    // g(y) = y - log y - v, increasing on [1, inf); g(1) < 0 <= g(2v+2).
    lo = 1.0;
    hi = 2.0 * v + 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (mid - std::log(mid) - v < 0.0 ? lo : hi) = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) y -= (y - std::log(y) - v) / (1.0 - 1.0 / y);

    return {y_minus, y};
}

namespace detail {

inline double branch_z(double v, double w_plus) {
    const auto [ym, yp] = y_branches(v);
    return 0.5 * (w_plus * yp + (1.0 - w_plus) * ym);
}

} // namespace detail

/// Assembles the branch data at (v, w_plus). The action is computed through
/// two independent routes, the algebraic closed form and the integral form
/// with quadrature of z over [1, v], and they must agree to 1e-8.
///
/// At v = 1 the family degenerates: z = 1/2, sigma = 0, and dz/dv diverges
/// (sign set by w_plus - 1/2; the symmetric case has the finite limit 1/3).
inline LegoBranchPoint branch_point(double v, double w_plus) {
    if (!(w_plus > 0.0 && w_plus < 1.0))
        throw std::invalid_argument("branch_point: w_plus must be in (0,1)");
    if (!(v >= 1.0)) throw std::invalid_argument("branch_point: v must be >= 1");

    LegoBranchPoint bp;
    bp.v = v;
    bp.w_plus = w_plus;
    if (v == 1.0) {
        bp.y_minus = bp.y_plus = 1.0;
        bp.z = 0.5;
        bp.sigma = 0.0;
        bp.dsigma_dv = 0.0;
        if (w_plus < 0.5)
            bp.dz_dv = -std::numeric_limits<double>::infinity();
        else if (w_plus > 0.5)
            bp.dz_dv = std::numeric_limits<double>::infinity();
        else
            bp.dz_dv = 1.0 / 3.0;
        return bp;
    }

    const auto [ym, yp] = y_branches(v);
    bp.y_minus = ym;
    bp.y_plus = yp;
    const double two_z = w_plus * yp + (1.0 - w_plus) * ym;
    bp.z = 0.5 * two_z;
    // dy/dv = y/(y-1) along each branch.
    bp.dz_dv = 0.5 * (w_plus * yp / (yp - 1.0) + (1.0 - w_plus) * ym / (ym - 1.0));

    const double q = w_plus * yp * yp + (1.0 - w_plus) * ym * ym;
    const double direct = bp.z + q / (4.0 * bp.z) - v - std::log(two_z);

    const double integral_z =
        integrate_adaptive_simpson([&](double x) { return detail::branch_z(x, w_plus); }, 1.0, v,
                                   1e-10);
    const double via_integral =
        bp.z + integral_z / bp.z + 1.0 - 1.0 / (4.0 * bp.z) - v - std::log(two_z);
    if (std::abs(direct - via_integral) > 1e-8 * std::max(1.0, std::abs(direct)))
        throw convergence_error("branch_point: action forms disagree beyond 1e-8");

    bp.sigma = direct;
    bp.dsigma_dv =
        -w_plus * (1.0 - w_plus) * (yp - ym) * (yp - ym) / (4.0 * bp.z * bp.z) * bp.dz_dv;
    return bp;
}

/// First v > 1 where 2z(v) climbs back to 1. Below it 2z < 1 throughout, so
/// the scan-then-bisect cannot skip the crossing at the 1e-2 scan step.
inline double find_vc(double w_plus) {
    if (!(w_plus > 0.0 && w_plus < 0.5))
        throw std::invalid_argument("find_vc: w_plus must be in (0, 1/2)");
    const double step = 1e-2;
    double prev = 1.0;
    for (double v = 1.0 + step; v <= 100.0 + 0.5 * step; v += step) {
        if (2.0 * detail::branch_z(v, w_plus) >= 1.0) {
            double lo = prev, hi = v;
            while (hi - lo > 1e-8) {
                const double mid = 0.5 * (lo + hi);
                (2.0 * detail::branch_z(mid, w_plus) < 1.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = v;
    }
    throw convergence_error("find_vc: no 2z = 1 crossing found for v <= 100");
}

/// Real-axis growth threshold of the exact finite-N generating function for a
/// bin of volume w: the all-points-in-one-bin configurations dominate beyond
/// (w/(w-1)) log w.
inline double wall_threshold(double w) {
    if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("wall_threshold: w must be in (0,1)");
    return w / (w - 1.0) * std::log(w);
}

enum class ExtremumKind { minimum, maximum };

struct HessianSpectrum {
    std::vector<double> eigenvalues;
    double det = 0.0;
    ExtremumKind classification = ExtremumKind::minimum;
};

/// Spectrum of the fluctuation matrix a_k delta + b_k b_l at a branch point,
/// with a_k = w_k (1 - y_k) / 2z and b_k = w_k y_k / 2z. The bin whose weight
/// equals bp.w_plus carries y_plus; every other bin carries y_minus. The
/// determinant is computed both through the secular form and through the
/// closed form (prod w / (2z)^{M+1}) (1-y_minus)^{M-2} (2z - y_plus y_minus),
/// and its sign must match sign(dz/dv).
inline HessianSpectrum hessian_spectrum(const LegoBranchPoint& bp, const LegoWeights& w) {
    const std::size_t m = w.bins();
    if (m < 2) throw std::invalid_argument("hessian_spectrum: need at least 2 bins");
    std::size_t plus_idx = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(w[i] - bp.w_plus) <= 1e-12) {
            plus_idx = i;
            break;
        }
    }
    if (plus_idx == m)
        throw std::invalid_argument("hessian_spectrum: no bin carries weight w_plus");

    const double two_z = 2.0 * bp.z;
    RankOneProblem prob;
    prob.eps = 1;
    prob.a.resize(m);
    prob.b.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double y = (i == plus_idx) ? bp.y_plus : bp.y_minus;
        prob.a[i] = w[i] * (1.0 - y) / two_z;
        prob.b[i] = w[i] * y / two_z;
    }

    HessianSpectrum out;
    out.eigenvalues = rank_one_eigenvalues(prob);
    out.det = rank_one_det(prob.a, prob.b, prob.eps);

    double closed = (two_z - bp.y_plus * bp.y_minus);
    for (std::size_t i = 0; i < m; ++i) closed *= w[i] / two_z;
    closed /= two_z;
    for (std::size_t i = 0; i + 2 < m; ++i) closed *= 1.0 - bp.y_minus;
    if (std::abs(out.det - closed) > 1e-10 * std::max(std::abs(out.det), std::abs(closed)))
        throw convergence_error("hessian_spectrum: determinant forms disagree");

    bool all_positive = true;
    for (const double lam : out.eigenvalues) all_positive = all_positive && lam > 0.0;
    out.classification = all_positive ? ExtremumKind::minimum : ExtremumKind::maximum;

    if (bp.v > 1.0 && std::abs(bp.dz_dv) > 1e-10 && out.det != 0.0 &&
        std::signbit(out.det) != std::signbit(bp.dz_dv))
        throw convergence_error("hessian_spectrum: det sign does not match dz/dv sign");
    return out;
}

} // namespace quadisc
