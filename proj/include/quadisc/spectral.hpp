#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "quadisc/numeric.hpp"
#include "quadisc/point_set.hpp"

namespace quadisc {

/// Eigenvalue problem for A = diag(a) + eps * b b^T, eps = +-1.
struct RankOneProblem {
    std::vector<double> a;
    std::vector<double> b;
    int eps = 1;
};

/// det A through the secular function: Q(0) * prod a_n with
/// Q(x) = 1 + eps * sum b_n^2 / (a_n - x). Valid for complex data, which is
/// how determinants at complex z are obtained without any eigen-decomposition.
template <typename T>
T rank_one_det(std::span<const T> a, std::span<const T> b, int eps) {
    if (a.size() != b.size()) throw std::invalid_argument("rank_one_det: size mismatch");
    if (eps != 1 && eps != -1) throw std::invalid_argument("rank_one_det: eps must be +-1");
    T prod = T(1);
    T q = T(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        prod *= a[i];
        q += static_cast<double>(eps) * b[i] * b[i] / a[i];
    }
    return q * prod;
}

inline double rank_one_det(const std::vector<double>& a, const std::vector<double>& b, int eps) {
    return rank_one_det<double>(std::span<const double>(a), std::span<const double>(b), eps);
}

inline std::complex<double> rank_one_det(const std::vector<std::complex<double>>& a,
                                         const std::vector<std::complex<double>>& b, int eps) {
    return rank_one_det<std::complex<double>>(std::span<const std::complex<double>>(a),
                                              std::span<const std::complex<double>>(b), eps);
}

/// All M eigenvalues of diag(a) + eps b b^T, ascending.
///
/// Coordinates with b = 0 pass a through unchanged; a d-fold repeated a with
/// active b's keeps d-1 copies and bundles the b-weight into one secular
/// pole. The remaining eigenvalues are the roots of Q interlaced between
/// consecutive poles, plus one root beyond the last pole (eps=+1) or before
/// the first (eps=-1), found by bisection. Duplicates are collapsed by exact
/// comparison: the data are inputs, not rounded computations.
inline std::vector<double> rank_one_eigenvalues(const RankOneProblem& p) {
    const std::size_t m = p.a.size();
    if (p.b.size() != m) throw std::invalid_argument("rank_one_eigenvalues: size mismatch");
    if (p.eps != 1 && p.eps != -1)
        throw std::invalid_argument("rank_one_eigenvalues: eps must be +-1");

    std::vector<double> eig;
    eig.reserve(m);

    struct Pole {
        double a;
        double bb; // combined squared b-weight
    };
    std::vector<Pole> poles;
    {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < m; ++i) {
            if (p.b[i] == 0.0)
                eig.push_back(p.a[i]);
            else
                idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t l, std::size_t r) { return p.a[l] < p.a[r]; });
        for (std::size_t j = 0; j < idx.size();) {
            const double av = p.a[idx[j]];
            double bb = 0.0;
            std::size_t d = 0;
            while (j < idx.size() && p.a[idx[j]] == av) {
                bb += p.b[idx[j]] * p.b[idx[j]];
                ++d;
                ++j;
            }
            for (std::size_t r = 1; r < d; ++r) eig.push_back(av);
            poles.push_back({av, bb});
        }
    }

    if (!poles.empty()) {
        const double esign = static_cast<double>(p.eps);
        auto secular = [&](double x) {
            double s = 0.0;
            for (const auto& pl : poles) s += pl.bb / (pl.a - x);
            return 1.0 + esign * s;
        };
        auto bisect = [&](double lo, double hi) {
            double flo = secular(lo);
            double fhi = secular(hi);
            // Root squeezed into the pole guard band: the guard offset itself
            // bounds the error.
            if ((flo > 0.0) == (fhi > 0.0)) return std::abs(flo) < std::abs(fhi) ? lo : hi;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi)) + 1e-300;
                 ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = secular(mid);
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        };
        auto guard = [](double a) { return 1e-14 * std::max(1.0, std::abs(a)); };

        double total_bb = 0.0;
        for (const auto& pl : poles) total_bb += pl.bb;

        for (std::size_t j = 0; j + 1 < poles.size(); ++j)
            eig.push_back(
                bisect(poles[j].a + guard(poles[j].a), poles[j + 1].a - guard(poles[j + 1].a)));

        if (p.eps == 1) {
            const double lo = poles.back().a + guard(poles.back().a);
            double hi = poles.back().a + total_bb + guard(poles.back().a);
            int grow = 0;
            while (secular(hi) < 0.0 && grow++ < 60) hi += total_bb + 1.0;
            eig.push_back(bisect(lo, hi));
        } else {
            const double hi = poles.front().a - guard(poles.front().a);
            double lo = poles.front().a - total_bb - guard(poles.front().a);
            int grow = 0;
            while (secular(lo) < 0.0 && grow++ < 60) lo -= total_bb + 1.0;
            eig.push_back(bisect(lo, hi));
        }
    }

    std::sort(eig.begin(), eig.end());
    return eig;
}

/// The binned-class kernel A(eps) = (1-2z) w delta + (2z/eps) w w^T together
/// with its closed-form inverse; the identity A * A_inv = I is enforced on
/// construction.
struct LegoPropagator {
    std::complex<double> z;
    double gauge_eps = 1.0; // may be +infinity (diagonal gauge)
    std::size_t m = 0;
    std::vector<std::complex<double>> a;     // row-major M x M
    std::vector<std::complex<double>> a_inv; // row-major M x M
};

inline LegoPropagator lego_propagator(std::complex<double> z, const LegoWeights& w,
                                      double gauge_eps) {
    if (!(gauge_eps > 0.0)) // excludes NaN and the eps<=0 singular family
        throw std::invalid_argument("lego_propagator: gauge_eps must be > 0 (or infinity)");
    const std::complex<double> one_m2z = 1.0 - 2.0 * z;
    if (std::abs(one_m2z) <= 1e-10) throw std::domain_error("lego_propagator: pole at z = 1/2");

    const bool diag_gauge = std::isinf(gauge_eps);
    std::complex<double> corr = 0.0; // 2z / (eps(1-2z) + 2z)
    if (!diag_gauge) {
        const std::complex<double> denom = gauge_eps * one_m2z + 2.0 * z;
        if (std::abs(denom) <= 1e-12)
            throw std::domain_error("lego_propagator: singular gauge, eps(1-2z) + 2z = 0");
        corr = 2.0 * z / denom;
    }

    LegoPropagator out;
    out.z = z;
    out.gauge_eps = gauge_eps;
    out.m = w.bins();
    out.a.assign(out.m * out.m, 0.0);
    out.a_inv.assign(out.m * out.m, 0.0);
    for (std::size_t i = 0; i < out.m; ++i) {
        for (std::size_t j = 0; j < out.m; ++j) {
            std::complex<double> aij = diag_gauge ? 0.0 : (2.0 * z / gauge_eps) * w[i] * w[j];
            std::complex<double> bij = -corr / one_m2z;
            if (i == j) {
                aij += one_m2z * w[i];
                bij += 1.0 / (one_m2z * w[i]);
            }
            out.a[i * out.m + j] = aij;
            out.a_inv[i * out.m + j] = bij;
        }
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < out.m; ++i) {
        for (std::size_t j = 0; j < out.m; ++j) {
            std::complex<double> acc = 0.0;
            for (std::size_t k = 0; k < out.m; ++k)
                acc += out.a[i * out.m + k] * out.a_inv[k * out.m + j];
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    if (worst > 1e-12)
        throw convergence_error("lego_propagator: A * A_inv identity check failed");
    return out;
}

/// Brownian-sheet covariance: product of coordinate-wise minima.
inline double wiener_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("wiener_covariance: dimension mismatch");
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0 || x[i] > 1.0 || y[i] < 0.0 || y[i] > 1.0)
            throw std::invalid_argument("wiener_covariance: coordinates must be in [0,1]");
        prod *= std::min(x[i], y[i]);
    }
    return prod;
}

inline double wiener_covariance(double x, double y) {
    return wiener_covariance(std::span<const double>(&x, 1), std::span<const double>(&y, 1));
}

namespace detail {

inline void check_wiener_args(double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::invalid_argument("wiener_propagator: x, y must be in [0,1]");
}

inline void check_wiener_pole(std::complex<double> two_z, std::size_t kmax) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    // Nearest mode index by real part; a pole can only hide there.
    const double kest = std::sqrt(std::max(1.0, std::abs(two_z)) / pi2);
    for (double k = std::max(1.0, std::floor(kest) - 1.0); k <= kest + 2.0; ++k) {
        const double lam = k * k * pi2;
        if (static_cast<std::size_t>(k) <= kmax && std::abs(two_z - lam) <= 1e-10 * lam)
            throw std::domain_error("wiener_propagator: pole at 2z = (k*pi)^2");
    }
}

} // namespace detail

/// Gauge-fixed Wiener propagator, closed form:
///   G = 1/u^2 - (cos[u(1-|x+y|)] + cos[u(1-|x-y|)]) / (2 u sin u),  u = sqrt(2z).
/// Small |u| switches to the Taylor form of the same expression; the closed
/// form loses all digits to cancellation there while the function itself is
/// regular (z = 0 is not a pole).
inline std::complex<double> wiener_propagator_closed(double x, double y,
                                                     std::complex<double> z) {
    detail::check_wiener_args(x, y);
    detail::check_wiener_pole(2.0 * z, std::numeric_limits<std::size_t>::max());
    const std::complex<double> u = std::sqrt(2.0 * z);
    const double a = 1.0 - std::abs(x + y);
    const double b = 1.0 - std::abs(x - y);
    if (std::abs(u) < 0.05) {
        const double s2 = a * a + b * b;
        const double s4 = a * a * a * a + b * b * b * b;
        const std::complex<double> u2 = u * u;
        return (s2 / 4.0 - 1.0 / 6.0) + u2 * (s2 / 24.0 - s4 / 48.0 - 7.0 / 360.0);
    }
    return 1.0 / (u * u) - (std::cos(u * a) + std::cos(u * b)) / (2.0 * u * std::sin(u));
}

/// Mode-sum form 2 sum_{k<=kmax} cos(k pi x) cos(k pi y) / (k^2 pi^2 - 2z);
/// truncation error ~ 1/kmax.
inline std::complex<double> wiener_propagator_series(double x, double y, std::complex<double> z,
                                                     std::size_t kmax) {
    detail::check_wiener_args(x, y);
    if (kmax < 1) throw std::invalid_argument("wiener_propagator_series: kmax must be >= 1");
    detail::check_wiener_pole(2.0 * z, kmax);
    const double pi = std::numbers::pi;
    std::vector<double> re(kmax), im(kmax);
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double kk = static_cast<double>(k);
        const std::complex<double> term =
            2.0 * std::cos(kk * pi * x) * std::cos(kk * pi * y) / (kk * kk * pi * pi - 2.0 * z);
        re[k - 1] = term.real();
        im[k - 1] = term.imag();
    }
    return {pairwise_sum(re), pairwise_sum(im)};
}

/// Eigenmode sqrt(2) cos(k pi x) with eigenvalue k^2 pi^2 - 2z.
struct WienerMode {
    double u;
    std::complex<double> lambda;
};

inline WienerMode wiener_eigenmode(std::size_t k, double x, std::complex<double> z) {
    if (k < 1) throw std::invalid_argument("wiener_eigenmode: k must be >= 1");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("wiener_eigenmode: x must be in [0,1]");
    const double kpi = static_cast<double>(k) * std::numbers::pi;
    return {std::numbers::sqrt2 * std::cos(kpi * x), kpi * kpi - 2.0 * z};
}

} // namespace quadisc
