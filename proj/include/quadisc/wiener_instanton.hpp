#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "quadisc/numeric.hpp"
#include "quadisc/quadrature.hpp"

namespace quadisc {

/// Anharmonic well U(phi) = e^phi - phi - 1; the classical motion in it
/// generates the continuum instanton family.
inline double potential_u(double phi) { return std::expm1(phi) - phi; }

/// One instanton: energy, turning points, period integral, first-moment
/// integral, action.
struct EnergyPoint {
    double e = 0.0;
    double phi_minus = 0.0;
    double phi_plus = 0.0;
    double t = 0.0;
    double t1 = 0.0;
    double s = 0.0;
};

/// Solutions of U(phi) = E with phi_minus < 0 < phi_plus, via bisection on
/// the monotone halves plus a Newton polish.
inline std::pair<double, double> turning_points(double e) {
    if (!(e > 0.0)) throw std::invalid_argument("turning_points: e must be > 0");

    auto solve = [&](double lo, double hi, bool left_half) {
        for (int it = 0; it < 200 && hi - lo > 1e-17 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
             ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const bool below = potential_u(mid) < e;
            // U decreases on the left half, increases on the right.
            if (below == left_half)
                hi = mid;
            else
                lo = mid;
        }
        double phi = 0.5 * (lo + hi);
        for (int it = 0; it < 4; ++it) {
            const double du = std::expm1(phi); // U'
            if (du == 0.0) break;
            phi -= (potential_u(phi) - e) / du;
        }
        return phi;
    };

    const double pm = solve(-(e + 1.0), 0.0, true);
    const double pp = solve(0.0, std::log(e + 2.0) + 2.0, false);
    return {pm, pp};
}

namespace detail {

/// E - U evaluated from the distance to a turning point. Both forms are
/// exact identities (E = U at the endpoint), and they keep full relative
/// accuracy where the direct difference E - U(phi) would cancel to nothing.
struct StableWell {
    double e, pm, pp, epm, epp;
    StableWell(double e_, double pm_, double pp_)
        : e(e_), pm(pm_), pp(pp_), epm(std::exp(pm_)), epp(std::exp(pp_)) {}

    double from_minus(double d) const { return d - epm * std::expm1(d); }
    double from_plus(double d) const { return epp * (-std::expm1(-d)) - d; }
    double nearest(double dminus, double dplus) const {
        const double g = dminus <= dplus ? from_minus(dminus) : from_plus(dplus);
        return std::max(g, std::numeric_limits<double>::min());
    }
};

/// Integrates f(phi) / sqrt(E - U) over the full well, split at phi = 0 so
/// each tanh-sinh half owns exactly one inverse-square-root endpoint.
template <typename F>
double well_integral(const StableWell& w, F&& f, double tol) {
    const double left = integrate_tanh_sinh(
        [&](double x, double da, double) {
            return f(x) / std::sqrt(std::max(w.from_minus(da), std::numeric_limits<double>::min()));
        },
        w.pm, 0.0, tol);
    const double right = integrate_tanh_sinh(
        [&](double x, double, double db) {
            return f(x) / std::sqrt(std::max(w.from_plus(db), std::numeric_limits<double>::min()));
        },
        0.0, w.pp, tol);
    return left + right;
}

} // namespace detail

/// Period integral T(E) = int dphi / sqrt(E - U); z = T^2/4.
inline double period_T(double e) {
    const auto [pm, pp] = turning_points(e);
    const detail::StableWell w(e, pm, pp);
    return detail::well_integral(w, [](double) { return 1.0; }, 1e-11);
}

/// First moment T1(E) = int phi dphi / sqrt(E - U); negative for E > 0.
inline double moment_T1(double e) {
    const auto [pm, pp] = turning_points(e);
    const detail::StableWell w(e, pm, pp);
    return detail::well_integral(w, [](double x) { return x; }, 1e-11);
}

/// Action S(E) = E + 2 T1(E) / T(E).
inline double action_S(double e) {
    const auto [pm, pp] = turning_points(e);
    const detail::StableWell w(e, pm, pp);
    const double t = detail::well_integral(w, [](double) { return 1.0; }, 1e-11);
    const double t1 = detail::well_integral(w, [](double x) { return x; }, 1e-11);
    return e + 2.0 * t1 / t;
}

inline EnergyPoint energy_point(double e) {
    const auto [pm, pp] = turning_points(e);
    const detail::StableWell w(e, pm, pp);
    EnergyPoint out;
    out.e = e;
    out.phi_minus = pm;
    out.phi_plus = pp;
    out.t = detail::well_integral(w, [](double) { return 1.0; }, 1e-11);
    out.t1 = detail::well_integral(w, [](double x) { return x; }, 1e-11);
    out.s = e + 2.0 * out.t1 / out.t;
    return out;
}

/// Coefficients of the inverse turning-point map f(v) = sum alpha_n v^n:
/// alpha_1 = 1, alpha_n = -[ (n-1)/2 alpha_{n-1}
///                           + sum_{k=2}^{n-1} k alpha_k alpha_{n+1-k} ] / (n+1).
/// Returned with natural indexing: alpha[n] is alpha_n, alpha[0] = 0.
inline std::vector<double> alpha_coeffs(std::size_t n_max) {
    if (n_max < 1) throw std::invalid_argument("alpha_coeffs: n_max must be >= 1");
    std::vector<double> alpha(n_max + 1, 0.0);
    alpha[1] = 1.0;
    for (std::size_t n = 2; n <= n_max; ++n) {
        double acc = 0.5 * static_cast<double>(n - 1) * alpha[n - 1];
        for (std::size_t k = 2; k + 1 <= n; ++k)
            acc += static_cast<double>(k) * alpha[k] * alpha[n + 1 - k];
        alpha[n] = -acc / static_cast<double>(n + 1);
    }
    return alpha;
}

struct SeriesEval {
    double t = 0.0;
    double t1 = 0.0;
    double s = 0.0;
    bool within_radius = true; // |E| < 2*pi; outside, the sums are asymptotic garbage
};

/// Small-E power series:
///   T  = sum_{n odd} Gamma(1/2) Gamma(n/2) / Gamma((n+1)/2) n alpha_n 2^{n/2} E^{(n-1)/2},
///   T1 integrated term-by-term from dT1/dE = -T/2 - E dT/dE (so T1(0) = 0),
///   S  = E + 2 T1 / T.
inline SeriesEval series_eval(double e, std::size_t n_max) {
    if (n_max < 1) throw std::invalid_argument("series_eval: n_max must be >= 1");
    // n_max counts retained terms; the sum runs over odd indices n = 1, 3, ..., 2*n_max - 1.
    const std::vector<double> alpha = alpha_coeffs(2 * n_max - 1);

    SeriesEval out;
    out.within_radius = std::abs(e) < 2.0 * std::numbers::pi;
    double gamma_ratio = std::sqrt(std::numbers::pi); // Gamma(n/2)/Gamma((n+1)/2) at n = 1
    double epow = 1.0;                                // E^{(n-1)/2}
    double pow2 = std::numbers::sqrt2;                // 2^{n/2}
    for (std::size_t i = 0; i < n_max; ++i) {
        const std::size_t n = 2 * i + 1;
        const double m = static_cast<double>(i);
        const double c = std::sqrt(std::numbers::pi) * gamma_ratio * static_cast<double>(n) *
                         alpha[n] * pow2;
        out.t += c * epow;
        out.t1 -= c * (m + 0.5) / (m + 1.0) * epow * e;
        // Gamma(n/2)/Gamma((n+1)/2) -> multiply by n/(n+1) when n -> n+2.
        gamma_ratio *= static_cast<double>(n) / static_cast<double>(n + 1);
        epow *= e;
        pow2 *= 2.0;
    }
    out.s = e + 2.0 * out.t1 / out.t;
    return out;
}

struct Asymptotics {
    double t_approx = 0.0;
    double t1_bound = 0.0; // an upper bound on T1 (which is negative)
};

/// Large-E closed forms from the piecewise approximation of U:
///   T ~ 2 sqrt(E+1) + (2/sqrt(E)) log(sqrt(E) + sqrt(E-1)),
///   T1 <= -(4/3)(E+1)^{3/2} + (2 log E / sqrt(E)) log(sqrt(E) + sqrt(E-1)).
inline Asymptotics asymptotics(double e) {
    if (!(e > 1.0)) throw std::invalid_argument("asymptotics: e must be > 1");
    const double root = std::log(std::sqrt(e) + std::sqrt(e - 1.0));
    Asymptotics out;
    out.t_approx = 2.0 * std::sqrt(e + 1.0) + 2.0 / std::sqrt(e) * root;
    out.t1_bound = -4.0 / 3.0 * std::pow(e + 1.0, 1.5) + 2.0 * std::log(e) / std::sqrt(e) * root;
    return out;
}

/// A sampled solution of the field equation phi'' = 2z (1 - e^phi) with
/// phi'(0) = phi'(1) = 0 and k interior bending points.
struct InstantonProfile {
    double e = 0.0;
    std::size_t k = 0;
    std::vector<double> xs;
    std::vector<double> phis;
    double residual_max = 0.0;      // max |-phi''/(2z) + 1 - e^phi| over interior nodes
    double z = 0.0;                 // k^2 T^2 / 4
    double normalization_shift = 0.0; // added so the discrete integral of e^phi is 1
};

namespace detail {

/// Inverts x(phi) = (1/T) int_{phi_-}^{phi} dpsi/sqrt(E-U) on the lattice
/// j/grid. The quadrature is anchored on a cosine-clustered table; each
/// lattice value is then Newton-polished against the true map, in the
/// square-root variable inside the outermost table cells (where phi-Newton
/// overshoots) and in phi elsewhere.
class ProfileInverter {
public:
    ProfileInverter(const StableWell& w, double t_period)
        : w_(w), t_(t_period), tphi_(ntab_ + 1), tx_(ntab_ + 1) {
        for (std::size_t i = 0; i <= ntab_; ++i) {
            const double c = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) /
                                                   static_cast<double>(ntab_)));
            tphi_[i] = w_.pm + (w_.pp - w_.pm) * c;
        }
        tphi_[0] = w_.pm;
        tphi_[ntab_] = w_.pp;
        tx_[0] = 0.0;
        for (std::size_t i = 1; i <= ntab_; ++i) tx_[i] = tx_[i - 1] + seg(tphi_[i - 1], tphi_[i]);
    }

    std::vector<double> solve_lattice(std::size_t grid) const {
        std::vector<double> base(grid + 1);
        base[0] = w_.pm;
        base[grid] = w_.pp;
        for (std::size_t j = 1; j < grid; ++j)
            base[j] = invert(static_cast<double>(j) / static_cast<double>(grid));
        return base;
    }

private:
    static constexpr std::size_t ntab_ = 1024;

    // (1/T) integral over [lo, hi], carrying global turning-point distances
    // into the stable E-U forms.
    double seg(double lo, double hi) const {
        if (!(hi > lo)) return 0.0;
        const double off_m = lo - w_.pm;
        const double off_p = w_.pp - hi;
        return integrate_tanh_sinh(
                   [&](double, double da, double db) {
                       return 1.0 / std::sqrt(w_.nearest(off_m + da, off_p + db));
                   },
                   lo, hi, 1e-13) /
               t_;
    }

    double xof(double phi, std::size_t cell) const {
        if (phi >= tphi_[cell]) return tx_[cell] + seg(tphi_[cell], phi);
        return tx_[cell] - seg(phi, tphi_[cell]);
    }

    double invert(double target) const {
        std::size_t cell =
            static_cast<std::size_t>(std::upper_bound(tx_.begin(), tx_.end(), target) -
                                     tx_.begin());
        cell = std::min(std::max<std::size_t>(cell, 1) - 1, ntab_ - 1);

        if (cell == 0) return invert_near_end(target, true);
        if (cell == ntab_ - 1) return invert_near_end(target, false);

        double lo = tphi_[cell], hi = tphi_[cell + 1];
        double phi = lo + (hi - lo) * (target - tx_[cell]) /
                              std::max(tx_[cell + 1] - tx_[cell],
                                       std::numeric_limits<double>::min());
        for (int it = 0; it < 60; ++it) {
            const double f = xof(phi, cell) - target;
            if (std::abs(f) <= 5e-15) return phi;
            (f > 0.0 ? hi : lo) = phi;
            // Quadrature noise in xof floors around 1e-13; once the bracket
            // is tighter than that resolves in phi, the midpoint is as good
            // as it gets.
            if (hi - lo <= 4e-16 * std::max(std::abs(lo), std::abs(hi)))
                return 0.5 * (lo + hi);
            const double g = w_.nearest(phi - w_.pm, w_.pp - phi);
            double next = phi - f * t_ * std::sqrt(g);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            phi = next;
        }
        throw convergence_error("instanton_profile: lattice inversion stalled");
    }

    // Newton in u = sqrt(distance to the turning point): the map is regular
    // in u, so the first lattice points converge without bracket thrashing.
    double invert_near_end(double target, bool left) const {
        const double a = left ? 1.0 - w_.epm : w_.epp - 1.0; // |U'| at the endpoint
        const double s = left ? target : 1.0 - target;
        const std::size_t cell = left ? 0 : ntab_ - 1;
        double u = 0.5 * s * t_ * std::sqrt(a);
        double ulo = 0.0;
        double uhi = std::sqrt(left ? tphi_[1] - w_.pm : w_.pp - tphi_[ntab_ - 1]);
        for (int it = 0; it < 60; ++it) {
            const double phi = left ? w_.pm + u * u : w_.pp - u * u;
            const double f = xof(phi, cell) - target;
            if (std::abs(f) <= 5e-15) return phi;
            const bool high = left ? f > 0.0 : f < 0.0;
            (high ? uhi : ulo) = u;
            // Same noise floor as the interior loop, expressed in u.
            if (uhi - ulo <= 1e-18 + 2e-16 * uhi) {
                const double um = 0.5 * (ulo + uhi);
                return left ? w_.pm + um * um : w_.pp - um * um;
            }
            const double g = w_.nearest(phi - w_.pm, w_.pp - phi);
            double next = left ? u - f * t_ * std::sqrt(g) / (2.0 * u)
                               : u + f * t_ * std::sqrt(g) / (2.0 * u);
            if (!(next > ulo && next < uhi)) next = 0.5 * (ulo + uhi);
            u = next;
        }
        throw convergence_error("instanton_profile: endpoint inversion stalled");
    }

    const StableWell& w_;
    double t_;
    std::vector<double> tphi_, tx_;
};

} // namespace detail

/// Builds the k-bending-point solution at energy E on grid+1 uniform nodes.
///
/// The base half-oscillation is solved once on the lattice; the k-fold
/// profile reads base values through reflections of k*j mod 2*grid (integer
/// arithmetic, so every needed argument is itself a lattice node) and runs at
/// z = k^2 T^2/4. The residual uses a 6th-order seven-point second
/// difference with a stride wide enough that rounding jitter in the nodes
/// stays far below the 1e-6 scale of interest.
inline InstantonProfile instanton_profile(double e, std::size_t k, std::size_t grid) {
    if (!(e > 0.0)) throw std::invalid_argument("instanton_profile: e must be > 0");
    if (k < 1) throw std::invalid_argument("instanton_profile: k must be >= 1");
    if (grid < 16) throw std::invalid_argument("instanton_profile: grid must be >= 16");

    const auto [pm, pp] = turning_points(e);
    const detail::StableWell w(e, pm, pp);
    const double t_period = detail::well_integral(w, [](double) { return 1.0; }, 1e-11);
    const detail::ProfileInverter inverter(w, t_period);
    const std::vector<double> base = inverter.solve_lattice(grid);

    InstantonProfile out;
    out.e = e;
    out.k = k;
    out.z = static_cast<double>(k * k) * t_period * t_period / 4.0;
    out.xs.resize(grid + 1);
    out.phis.resize(grid + 1);
    const std::size_t period2 = 2 * grid;
    for (std::size_t j = 0; j <= grid; ++j) {
        out.xs[j] = static_cast<double>(j) / static_cast<double>(grid);
        std::size_t idx = (k * j) % period2;
        if (idx > grid) idx = period2 - idx;
        out.phis[j] = base[idx];
    }

    std::vector<double> expphi(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j) expphi[j] = std::exp(out.phis[j]);
    const double h = 1.0 / static_cast<double>(grid);
    double integral;
    if (grid % 2 == 0) {
        integral = composite_simpson(expphi, h);
    } else {
        integral = 0.5 * (expphi.front() + expphi.back());
        for (std::size_t j = 1; j < grid; ++j) integral += expphi[j];
        integral *= h;
    }
    out.normalization_shift = -std::log(integral);
    for (double& p : out.phis) p += out.normalization_shift;

    const auto stride = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(1.5e-3 * static_cast<double>(grid) / static_cast<double>(k))));
    const double hs = static_cast<double>(stride) * h;
    static constexpr double stencil[7] = {2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0};
    out.residual_max = 0.0;
    if (grid >= 6 * stride) {
        const auto st = static_cast<std::ptrdiff_t>(stride);
        for (std::size_t j = 3 * stride; j + 3 * stride <= grid; ++j) {
            double acc = 0.0;
            for (std::ptrdiff_t mshift = -3; mshift <= 3; ++mshift)
                acc += stencil[mshift + 3] *
                       out.phis[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j) +
                                                         mshift * st)];
            const double ddphi = acc / (180.0 * hs * hs);
            const double resid = std::abs(-ddphi / (2.0 * out.z) + 1.0 - std::exp(out.phis[j]));
            out.residual_max = std::max(out.residual_max, resid);
        }
    }
    return out;
}

} // namespace quadisc
