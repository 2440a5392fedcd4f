#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "quadisc/discrepancy.hpp"
#include "quadisc/numeric.hpp"
#include "quadisc/point_set.hpp"
#include "quadisc/rng.hpp"

namespace quadisc {

/// Large-M limit of the binned-class generating function: the chi-square MGF
/// with M-1 degrees of freedom, principal branch.
inline std::complex<double> g0_lego(std::complex<double> z, std::size_t m) {
    if (m < 1) throw std::invalid_argument("g0_lego: m must be >= 1");
    const std::complex<double> base = 1.0 - 2.0 * z;
    if (std::abs(base) <= 1e-10) throw std::domain_error("g0_lego: pole at z = 1/2");
    return std::pow(base, -0.5 * static_cast<double>(m - 1));
}

namespace detail {

/// Euler-Maclaurin tails sum_{k>K} k^{-2j}, j = 1..8. Exact to well below
/// double epsilon at this K; avoids the catastrophic cancellation of
/// zeta(2j) minus a partial sum.
inline constexpr std::size_t g0w_factors = 400;

inline const std::array<double, 8>& zeta_tails() {
    static const std::array<double, 8> tails = [] {
        std::array<double, 8> out{};
        const double p = static_cast<double>(g0w_factors) + 1.0;
        for (int j = 1; j <= 8; ++j) {
            const double s = 2.0 * j;
            const double ps = std::pow(p, -s);
            out[j - 1] = p * ps / (s - 1.0) + ps / 2.0 + s * ps / (12.0 * p) -
                         s * (s + 1.0) * (s + 2.0) * ps / (720.0 * p * p * p) +
                         s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * ps /
                             (30240.0 * p * p * p * p * p);
        }
        return out;
    }();
    return tails;
}

} // namespace detail

/// Wiener-class zeroth-order generating function (u/sin u)^{1/2}, u = sqrt(2z).
///
/// Evaluated through the factorized logarithm
///   log G0 = -(1/2) sum_k log(1 - 2z/(k^2 pi^2))
/// (finite product plus a zeta-style tail), never through a pointwise sqrt of
/// sin. The pointwise principal sqrt winds along vertical contours (its
/// argument grows like sqrt|Im z|), whereas each factor here keeps its cut on
/// [k^2 pi^2/2, inf), so the value is analytic on any contour avoiding the
/// positive real branch points.
inline std::complex<double> g0_wiener(std::complex<double> z) {
    using namespace std::complex_literals;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const std::size_t kmax = detail::g0w_factors;
    const double kk = static_cast<double>(kmax + 1) * static_cast<double>(kmax + 1);
    if (std::abs(2.0 * z) >= 0.5 * pi2 * kk)
        throw std::invalid_argument("g0_wiener: |z| beyond the product evaluation range");

    std::complex<double> logsum = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double lam = static_cast<double>(k) * static_cast<double>(k) * pi2;
        const std::complex<double> factor = 1.0 - 2.0 * z / lam;
        if (std::abs(factor) <= 1e-10)
            throw std::domain_error("g0_wiener: pole at 2z = (k*pi)^2");
        logsum -= 0.5 * std::log(factor);
    }
    const std::complex<double> r = 2.0 * z / pi2;
    std::complex<double> rpow = 1.0;
    const auto& tails = detail::zeta_tails();
    for (int j = 1; j <= 8; ++j) {
        rpow *= r;
        logsum += 0.5 * rpow * tails[j - 1] / static_cast<double>(j);
    }
    return std::exp(logsum);
}

/// Exact finite-N generating function of the binned class: the multinomial
/// average of exp(z*D) over all occupation vectors. Compositions are walked
/// in colex order; log-space weights keep N ~ 30 overflow-free.
inline std::complex<double> exact_lego_gf(std::complex<double> z, std::size_t n,
                                          const LegoWeights& w) {
    if (n < 1) throw std::invalid_argument("exact_lego_gf: n must be >= 1");
    const std::size_t m = w.bins();

    double count = 1.0; // C(n+m-1, m-1)
    for (std::size_t i = 1; i < m; ++i) {
        count *= static_cast<double>(n + i) / static_cast<double>(i);
        if (count > 1e7)
            throw std::invalid_argument("exact_lego_gf: composition count exceeds 1e7");
    }

    std::vector<double> lw(m), lgam(n + 1);
    for (std::size_t i = 0; i < m; ++i) lw[i] = std::log(w[i]);
    for (std::size_t s = 0; s <= n; ++s) lgam[s] = std::lgamma(static_cast<double>(s) + 1.0);
    const double dn = static_cast<double>(n);
    const double log_nfact = lgam[n];

    std::vector<std::size_t> s(m, 0);
    s[0] = n;
    std::complex<double> acc = 0.0;
    double comp_re = 0.0, comp_im = 0.0; // Kahan compensation
    for (;;) {
        double logp = log_nfact;
        double chi = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double si = static_cast<double>(s[i]);
            logp += si * lw[i] - lgam[s[i]];
            chi += si * si / w[i];
        }
        const double d = chi / dn - dn;
        const std::complex<double> term = std::exp(logp + z * d);

        double y = term.real() - comp_re;
        double t = acc.real() + y;
        comp_re = (t - acc.real()) - y;
        const double re = t;
        y = term.imag() - comp_im;
        t = acc.imag() + y;
        comp_im = (t - acc.imag()) - y;
        acc = {re, t};

        if (s[m - 1] == n) break;
        std::size_t i = 0;
        while (s[i] == 0) ++i;
        const std::size_t v = s[i];
        s[i] = 0;
        s[0] = v - 1;
        s[i + 1] += 1;
    }
    return acc;
}

/// Which ensemble a Monte Carlo GF estimate draws from.
struct McClass {
    bool is_lego = false;
    std::optional<LegoWeights> w; // set iff is_lego
    std::size_t dim = 1;          // wiener/l2star dimension

    static McClass lego(LegoWeights weights) {
        McClass c;
        c.is_lego = true;
        c.w = std::move(weights);
        return c;
    }
    static McClass wiener(std::size_t dim = 1) {
        McClass c;
        c.dim = dim;
        return c;
    }
};

struct McEstimate {
    std::complex<double> mean;
    double stderr_; // quadrature combination of re/im standard errors
};

/// Sample mean of exp(z * D) over `reps` independent point sets. Replica i
/// uses seed + i, so a parallel split would reproduce the same stream; the
/// reductions are pairwise for the same reason. Meaningful for small |Re z|
/// only (the e^{zD} variance explodes otherwise); no hard guard.
inline McEstimate mc_gf_estimate(std::complex<double> z, std::size_t n, const McClass& cls,
                                 std::size_t reps, std::uint64_t seed) {
    if (reps < 2) throw std::invalid_argument("mc_gf_estimate: reps must be >= 2");
    if (cls.is_lego && !cls.w) throw std::invalid_argument("mc_gf_estimate: lego class needs weights");

    const std::size_t dim = cls.is_lego ? 1 : cls.dim;
    std::vector<double> re(reps), im(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const PointSet ps = uniform_pointset(n, dim, seed + i);
        double d;
        if (cls.is_lego)
            d = lego_discrepancy(bin_counts(ps, *cls.w), *cls.w);
        else
            d = l2star_discrepancy(ps);
        const std::complex<double> term = std::exp(z * d);
        re[i] = term.real();
        im[i] = term.imag();
    }
    const double dr = static_cast<double>(reps);
    const double mre = pairwise_sum(re) / dr;
    const double mim = pairwise_sum(im) / dr;
    for (std::size_t i = 0; i < reps; ++i) {
        re[i] = (re[i] - mre) * (re[i] - mre);
        im[i] = (im[i] - mim) * (im[i] - mim);
    }
    const double var_re = pairwise_sum(re) / (dr - 1.0);
    const double var_im = pairwise_sum(im) / (dr - 1.0);
    return {{mre, mim}, std::sqrt((var_re + var_im) / dr)};
}

enum class GFKind { lego_zeroth, wiener_zeroth, lego_exact, mc_estimate };

/// A handle naming one generating function plus its parameters; the inversion
/// engine and the CLI consume these.
struct GFSpec {
    GFKind kind = GFKind::wiener_zeroth;
    std::size_t m = 0;              // lego_zeroth
    std::size_t n = 0;              // lego_exact / mc_estimate
    std::optional<LegoWeights> w;   // lego_exact
    std::optional<McClass> mc_cls;  // mc_estimate
    std::size_t reps = 0;           // mc_estimate
    std::uint64_t seed = 0;         // mc_estimate

    static GFSpec lego_zeroth(std::size_t m) {
        if (m < 1) throw std::invalid_argument("GFSpec: lego_zeroth needs m >= 1");
        GFSpec g;
        g.kind = GFKind::lego_zeroth;
        g.m = m;
        return g;
    }
    static GFSpec wiener_zeroth() { return {}; }
    static GFSpec lego_exact(std::size_t n, LegoWeights w) {
        if (n < 1) throw std::invalid_argument("GFSpec: lego_exact needs n >= 1");
        GFSpec g;
        g.kind = GFKind::lego_exact;
        g.n = n;
        g.w = std::move(w);
        return g;
    }
    static GFSpec mc_estimate(std::size_t n, McClass cls, std::size_t reps, std::uint64_t seed) {
        GFSpec g;
        g.kind = GFKind::mc_estimate;
        g.n = n;
        g.mc_cls = std::move(cls);
        g.reps = reps;
        g.seed = seed;
        return g;
    }

    std::complex<double> evaluate(std::complex<double> z) const {
        switch (kind) {
            case GFKind::lego_zeroth: return g0_lego(z, m);
            case GFKind::wiener_zeroth: return g0_wiener(z);
            case GFKind::lego_exact: return exact_lego_gf(z, n, *w);
            case GFKind::mc_estimate: return mc_gf_estimate(z, n, *mc_cls, reps, seed).mean;
        }
        throw std::logic_error("GFSpec: unknown kind");
    }

    /// Leftmost singularity on the positive real axis; the inversion contour
    /// abscissa must stay strictly left of it. The finite-sum kinds are
    /// entire (their growth wall is an N->infinity statement, not a pole).
    double nearest_real_singularity() const {
        switch (kind) {
            case GFKind::lego_zeroth: return 0.5;
            case GFKind::wiener_zeroth: return std::numbers::pi * std::numbers::pi / 2.0;
            case GFKind::lego_exact:
            case GFKind::mc_estimate: return std::numeric_limits<double>::infinity();
        }
        throw std::logic_error("GFSpec: unknown kind");
    }
};

} // namespace quadisc
