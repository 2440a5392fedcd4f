#include <catch2/catch_amalgamated.hpp>

#include <quadisc/genfun.hpp>
#include <quadisc/laplace.hpp>
#include <quadisc/numeric.hpp>

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace quadisc;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

} // namespace

TEST_CASE("five-bin density is chi-squared with four degrees of freedom", "[laplace]") {
    const GFSpec gf = GFSpec::lego_zeroth(5);
    const BromwichInverter inv(gf);
    for (const double t : {0.5, 1.0, 2.0, 4.0, 8.0, 12.0}) {
        const DensityPoint p = inv.density(t);
        REQUIRE(p.h == Catch::Approx(oracles::chi2_4_pdf(t)).margin(1e-5));
        REQUIRE(std::abs(p.imag_residual) < 1e-10);
    }
    // t = 4 pins the e^{-2} value used by the command-line check.
    REQUIRE(std::abs(inv.density(4.0).h - std::exp(-2.0)) < 1e-5);
    // Near the origin the density drops linearly to zero.
    REQUIRE(inv.density(0.01).h == Catch::Approx(oracles::chi2_4_pdf(0.01)).margin(1e-4));
}

TEST_CASE("five-bin density table integrates to unit mass and mean four", "[laplace]") {
    const DensityTable tab =
        density_table(GFSpec::lego_zeroth(5), linspace(0.05, 30.0, 600));
    REQUIRE(tab.mass == Catch::Approx(1.0).margin(5e-3));
    REQUIRE(tab.mean == Catch::Approx(4.0).margin(1e-2));
    // chi^2_4 variance is 8.
    REQUIRE(tab.variance == Catch::Approx(8.0).margin(0.1));
    for (const DensityPoint& p : tab.points) REQUIRE(p.h >= -1e-6);
}

TEST_CASE("continuum density table reproduces the known moments", "[laplace]") {
    const DensityTable tab =
        density_table(GFSpec::wiener_zeroth(), linspace(0.01, 2.0, 400));
    REQUIRE(tab.mass == Catch::Approx(1.0).margin(1e-3));
    REQUIRE(tab.mean == Catch::Approx(1.0 / 6.0).margin(1e-3));
    REQUIRE(tab.variance == Catch::Approx(1.0 / 45.0).margin(1e-3));
    for (const DensityPoint& p : tab.points) REQUIRE(std::abs(p.imag_residual) < 1e-9);
}

TEST_CASE("continuum density is nonnegative on a wide contour", "[laplace]") {
    const BromwichInverter inv(GFSpec::wiener_zeroth(), {0.0, 0.05, 1600.0});
    for (const double t : linspace(0.02, 3.0, 120)) REQUIRE(inv.density(t).h >= -1e-6);
}

TEST_CASE("contour step refinement is already converged", "[laplace]") {
    const GFSpec gf = GFSpec::lego_zeroth(5);
    const BromwichInverter coarse(gf, {0.0, 0.05, 0.0});
    const BromwichInverter fine(gf, {0.0, 0.025, 0.0});
    for (const double t : {1.0, 4.0, 9.0}) {
        REQUIRE(std::abs(coarse.density(t).h - fine.density(t).h) < 1e-6);
    }

    const GFSpec gw = GFSpec::wiener_zeroth();
    const BromwichInverter wc(gw, {0.0, 0.05, 0.0});
    const BromwichInverter wf(gw, {0.0, 0.025, 0.0});
    for (const double t : {0.1, 0.2, 0.5}) {
        REQUIRE(std::abs(wc.density(t).h - wf.density(t).h) < 1e-6);
    }
}

TEST_CASE("inversion parameter validation", "[laplace]") {
    const GFSpec gf = GFSpec::lego_zeroth(5);
    REQUIRE_THROWS_AS(BromwichInverter(gf, {0.0, 0.0, 0.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(BromwichInverter(gf, {0.0, -0.1, 0.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(BromwichInverter(gf, {0.0, 0.05, 0.3}), std::invalid_argument);
    // Contour must stay left of the real singularity: 1/2 for the binned GF,
    // pi^2/2 for the continuum one.
    REQUIRE_THROWS_AS(BromwichInverter(gf, {0.5, 0.05, 0.0}), std::invalid_argument);
    REQUIRE_NOTHROW(BromwichInverter(gf, {0.25, 0.05, 0.0}));
    REQUIRE_THROWS_AS(
        BromwichInverter(GFSpec::wiener_zeroth(),
                         {std::numbers::pi * std::numbers::pi / 2.0, 0.05, 0.0}),
        std::invalid_argument);
    // Fewer than four bins leaves a non-integrable contour tail.
    REQUIRE_THROWS_AS(BromwichInverter(GFSpec::lego_zeroth(3)), std::invalid_argument);

    const BromwichInverter inv(gf);
    REQUIRE_THROWS_AS(inv.density(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(inv.density(-1.0), std::invalid_argument);

    REQUIRE_THROWS_AS(density_table(gf, {1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(density_table(gf, {0.0, 1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(density_table(gf, {2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("nonzero contour abscissa gives the same density", "[laplace]") {
    const GFSpec gf = GFSpec::lego_zeroth(6);
    const BromwichInverter at0(gf);
    const BromwichInverter shifted(gf, {0.2, 0.05, 0.0});
    for (const double t : {1.0, 3.0, 7.0}) {
        REQUIRE(at0.density(t).h == Catch::Approx(shifted.density(t).h).margin(1e-6));
    }
}
