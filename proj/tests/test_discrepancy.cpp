#include <catch2/catch_amalgamated.hpp>

#include <quadisc/discrepancy.hpp>
#include <quadisc/point_set.hpp>
#include <quadisc/rng.hpp>

#include "oracles.hpp"

#include <cmath>
#include <vector>

using namespace quadisc;

TEST_CASE("lego discrepancy hand values", "[discrepancy]") {
    const LegoWeights w({0.5, 0.5});
    REQUIRE(lego_discrepancy(CountVector({2, 0}, 2), w) == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(lego_discrepancy(CountVector({1, 1}, 2), w) == Catch::Approx(0.0).margin(1e-14));

    // Perfect equidistribution scores zero.
    const LegoWeights w2({0.2, 0.3, 0.5});
    REQUIRE(lego_discrepancy(CountVector({2, 3, 5}, 10), w2) ==
            Catch::Approx(0.0).margin(1e-12));

    REQUIRE_THROWS_AS(lego_discrepancy(CountVector({1, 1}, 2), w2), std::invalid_argument);
    REQUIRE_THROWS_AS(lego_discrepancy(CountVector({0, 0}, 0), w), std::invalid_argument);
}

TEST_CASE("l2star discrepancy hand values", "[discrepancy]") {
    REQUIRE(l2star_discrepancy(PointSet({0.5}, 1)) == Catch::Approx(1.0 / 12.0).epsilon(1e-13));
    REQUIRE(l2star_discrepancy(PointSet({0.0}, 1)) == Catch::Approx(1.0 / 3.0).epsilon(1e-13));

    // A point pushed into the far corner leaves only the n * 3^{-s} term.
    const double eps = 1e-8;
    REQUIRE(l2star_discrepancy(PointSet({1.0 - eps, 1.0 - eps}, 2)) ==
            Catch::Approx(1.0 / 9.0).margin(1e-6));
}

TEST_CASE("l2star matches the stratified-cell quadrature oracle", "[discrepancy]") {
    Splitmix64 g(21);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t s = 1 + (g.next_u64() % 3);
        const std::size_t n = 1 + (g.next_u64() % (s == 3 ? 30 : 50));
        const PointSet ps = uniform_pointset(n, s, 5000 + rep);
        const double fast = l2star_discrepancy(ps);
        const double ref = oracles::l2star_cell_oracle(ps);
        REQUIRE(fast == Catch::Approx(ref).margin(1e-4)); // typically agrees to ~1e-12
        REQUIRE(std::abs(fast - ref) < 1e-9);
    }
}

TEST_CASE("discrete wiener hand values and continuum approach", "[discrepancy]") {
    const PointSet half({0.5}, 1);
    REQUIRE(discrete_wiener_discrepancy(half, 2) == Catch::Approx(0.125).epsilon(1e-13));
    REQUIRE(discrete_wiener_discrepancy(half, 4) == Catch::Approx(0.09375).epsilon(1e-13));
    REQUIRE(discrete_wiener_discrepancy(half, 8) == Catch::Approx(0.0859375).epsilon(1e-13));

    // Doubling M walks monotonically down to the continuum value 1/12,
    // staying within 1/M of it.
    double prev = discrete_wiener_discrepancy(half, 2);
    for (std::size_t j = 2; j <= 9; ++j) {
        const std::size_t m = std::size_t{1} << j;
        const double cur = discrete_wiener_discrepancy(half, m);
        REQUIRE(cur < prev);
        REQUIRE(cur >= 1.0 / 12.0 - 1e-12);
        REQUIRE(std::abs(cur - 1.0 / 12.0) <= 1.0 / static_cast<double>(m));
        prev = cur;
    }

    REQUIRE_THROWS_AS(discrete_wiener_discrepancy(PointSet({0.1, 0.2}, 2), 4),
                      std::invalid_argument);
}

TEST_CASE("discrete wiener approaches l2star like 1/M", "[discrepancy]") {
    const PointSet ps = uniform_pointset(7, 1, 3);
    const double l2 = l2star_discrepancy(ps);
    double c_fit = 0.0;
    double d2 = 0.0, d256 = 0.0;
    for (std::size_t m = 2; m <= 256; m *= 2) {
        const double d = std::abs(discrete_wiener_discrepancy(ps, m) - l2);
        c_fit = std::max(c_fit, static_cast<double>(m) * d);
        if (m == 2) d2 = d;
        if (m == 256) d256 = d;
    }
    REQUIRE(c_fit < 0.5);        // M * |difference| stays bounded (frozen set: 0.42)
    REQUIRE(d256 < d2 / 32.0);   // net decay consistent with the 1/M rate
}

TEST_CASE("discrete wiener dual routes agree", "[discrepancy]") {
    Splitmix64 g(31);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 1 + (g.next_u64() % 40);
        const std::size_t m = 2 + (g.next_u64() % 32);
        const PointSet ps = uniform_pointset(n, 1, 7000 + rep);
        const double direct = discrete_wiener_discrepancy(ps, m);
        const double quad = discrete_wiener_discrepancy_quadratic(ps, m);
        REQUIRE(std::abs(direct - quad) < 1e-10);
    }
}

TEST_CASE("R matrix inverse is exact", "[discrepancy]") {
    for (std::size_t m : {1, 2, 3, 8, 33, 64}) {
        const std::vector<double> r = wiener_r_matrix(m);
        const std::vector<double> ri = wiener_r_inverse(m);
        double dev = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < m; ++k) acc += r[i * m + k] * ri[k * m + j];
                dev = std::max(dev, std::abs(acc - (i == j ? 1.0 : 0.0)));
            }
        }
        REQUIRE(dev < 1e-12);
    }
}

TEST_CASE("discrepancies are nonnegative on random inputs", "[discrepancy]") {
    Splitmix64 g(41);
    // 10^4 random evaluations across the three statistics.
    for (int rep = 0; rep < 4000; ++rep) {
        const std::size_t m = 1 + (g.next_u64() % 8);
        const LegoWeights w = LegoWeights::uniform(m);
        const std::size_t n = 1 + (g.next_u64() % 20);
        const PointSet ps = uniform_pointset(n, 1, 90000 + rep);
        REQUIRE(lego_discrepancy(bin_counts(ps, w), w) >= -1e-12);
    }
    for (int rep = 0; rep < 3000; ++rep) {
        const std::size_t s = 1 + (g.next_u64() % 2);
        const std::size_t n = 1 + (g.next_u64() % 20);
        const PointSet ps = uniform_pointset(n, s, 110000 + rep);
        REQUIRE(l2star_discrepancy(ps) >= -1e-12);
    }
    for (int rep = 0; rep < 3000; ++rep) {
        const std::size_t m = 2 + (g.next_u64() % 15);
        const std::size_t n = 1 + (g.next_u64() % 20);
        const PointSet ps = uniform_pointset(n, 1, 130000 + rep);
        REQUIRE(discrete_wiener_discrepancy(ps, m) >= -1e-12);
    }
}
