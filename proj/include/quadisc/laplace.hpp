#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "quadisc/genfun.hpp"
#include "quadisc/numeric.hpp"

namespace quadisc {

/// Contour parameters for the density inversion H(t) = (1/2*pi*i) int e^{-zt} G(z) dz
/// along the vertical line Re z = c. z_max <= 0 selects the per-GF default.
struct InversionParams {
    double c = 0.0;
    double step = 0.05;
    double z_max = 0.0;
};

struct DensityPoint {
    double t = 0.0;
    double h = 0.0;
    double imag_residual = 0.0;
};

struct DensityTable {
    std::vector<DensityPoint> points;
    double mass = 0.0;          // trapezoid of H over the grid
    double mean = 0.0;          // trapezoid of t*H
    double second_moment = 0.0; // trapezoid of t^2*H
    double variance = 0.0;      // second_moment - mean^2 (mass-unnormalized)
};

namespace detail {

inline double default_z_max(const GFSpec& gf) {
    switch (gf.kind) {
        case GFKind::lego_zeroth:
            // |G| ~ y^{-(m-1)/2}: keep the truncated tail comparable across m.
            return 2000.0 / static_cast<double>(gf.m - 1);
        case GFKind::wiener_zeroth:
        case GFKind::lego_exact:
        case GFKind::mc_estimate: return 400.0;
    }
    throw std::logic_error("default_z_max: unknown kind");
}

} // namespace detail

/// Evaluates the contour integrand's GF values once, then serves any number
/// of t's. The two half-lines are summed as evaluated (no conjugation
/// shortcut), so a nonvanishing imaginary part is a genuine diagnostic of
/// asymmetry or truncation trouble.
class BromwichInverter {
public:
    BromwichInverter(const GFSpec& gf, InversionParams p = {}) : p_(p) {
        if (p_.z_max <= 0.0) p_.z_max = detail::default_z_max(gf);
        if (!(p_.step > 0.0)) throw std::invalid_argument("inversion: step must be > 0");
        if (p_.z_max < 10.0 * p_.step)
            throw std::invalid_argument("inversion: z_max must be >= 10*step");
        if (!(p_.c < gf.nearest_real_singularity()))
            throw std::invalid_argument("inversion: contour abscissa not left of the GF singularity");
        if (gf.kind == GFKind::lego_zeroth && gf.m < 4)
            throw std::invalid_argument(
                "inversion: lego_zeroth needs m >= 4 for an integrable contour tail");

        const auto k = static_cast<std::ptrdiff_t>(std::floor(p_.z_max / p_.step));
        gvals_.reserve(2 * k + 1);
        ys_.reserve(2 * k + 1);
        for (std::ptrdiff_t j = -k; j <= k; ++j) {
            const double y = static_cast<double>(j) * p_.step;
            ys_.push_back(y);
            gvals_.push_back(gf.evaluate({p_.c, y}));
        }
    }

    const InversionParams& params() const { return p_; }

    DensityPoint density(double t) const {
        if (!(t > 0.0)) throw std::invalid_argument("inversion: t must be > 0");
        const std::size_t n = gvals_.size();
        std::vector<double> re(n), im(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double phase = -ys_[j] * t;
            const std::complex<double> term =
                std::polar(1.0, phase) * gvals_[j] * ((j == 0 || j + 1 == n) ? 0.5 : 1.0);
            re[j] = term.real();
            im[j] = term.imag();
        }
        const double scale = std::exp(-p_.c * t) * p_.step / (2.0 * std::numbers::pi);
        const double h = scale * pairwise_sum(re);
        const double resid = scale * pairwise_sum(im);
        if (std::abs(resid) > 1e-8)
            throw convergence_error("inversion: imaginary residual above 1e-8");
        return {t, h, resid};
    }

private:
    InversionParams p_;
    std::vector<double> ys_;
    std::vector<std::complex<double>> gvals_;
};

inline double bromwich_density(const GFSpec& gf, double t, InversionParams p = {}) {
    return BromwichInverter(gf, p).density(t).h;
}

/// Tabulates H over a strictly increasing positive grid and attaches the
/// trapezoid moments of the table itself.
inline DensityTable density_table(const GFSpec& gf, const std::vector<double>& t_grid,
                                  InversionParams p = {}) {
    if (t_grid.size() < 2) throw std::invalid_argument("density_table: need at least 2 grid points");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw std::invalid_argument("density_table: grid must be positive");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("density_table: grid must be strictly increasing");
    }
    const BromwichInverter inv(gf, p);
    DensityTable out;
    out.points.reserve(t_grid.size());
    for (const double t : t_grid) out.points.push_back(inv.density(t));

    for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
        const auto& l = out.points[i];
        const auto& r = out.points[i + 1];
        const double dt = r.t - l.t;
        out.mass += 0.5 * dt * (l.h + r.h);
        out.mean += 0.5 * dt * (l.t * l.h + r.t * r.h);
        out.second_moment += 0.5 * dt * (l.t * l.t * l.h + r.t * r.t * r.h);
    }
    out.variance = out.second_moment - out.mean * out.mean;
    return out;
}

} // namespace quadisc
