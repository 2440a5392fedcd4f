#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "quadisc/numeric.hpp"
#include "quadisc/point_set.hpp"

namespace quadisc {

/// Binned quadratic discrepancy: (1/N) sum_n S_n^2/w_n - N.
/// Vanishes iff every bin holds exactly N*w_n points; equals the classic
/// chi-square statistic up to normalization.
inline double lego_discrepancy(const CountVector& counts, const LegoWeights& w) {
    if (counts.counts.size() != w.bins())
        throw std::invalid_argument("lego_discrepancy: counts/weights size mismatch");
    if (counts.n_total < 1)
        throw std::invalid_argument("lego_discrepancy: empty point set");
    const double n = static_cast<double>(counts.n_total);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.bins(); ++i) {
        const double s = static_cast<double>(counts.counts[i]);
        acc += s * s / w[i];
    }
    return acc / n - n;
}

/// L2 star-discrepancy (quadratic, unanchored normalization N * integral):
///   (1/N) sum_{k,l} prod_nu (1 - max(x_k, x_l))
///   - 2 sum_k prod_nu (1 - x_k^2)/2 + N 3^{-s}.
/// O(N^2 s). Row sums are reduced pairwise so a future parallel split over k
/// cannot change the bits.
inline double l2star_discrepancy(const PointSet& ps) {
    const std::size_t n = ps.size();
    const std::size_t s = ps.dim();

    std::vector<double> row(n);
    std::vector<double> rowacc(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            double prod = 1.0;
            for (std::size_t a = 0; a < s; ++a)
                prod *= 1.0 - std::max(ps.coord(k, a), ps.coord(l, a));
            row[l] = prod;
        }
        rowacc[k] = pairwise_sum(row);
    }
    const double pair_term = pairwise_sum(rowacc) / static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) {
        double prod = 1.0;
        for (std::size_t a = 0; a < s; ++a) {
            const double x = ps.coord(k, a);
            prod *= (1.0 - x * x) / 2.0;
        }
        row[k] = prod;
    }
    const double cross_term = 2.0 * pairwise_sum(std::span<const double>(row.data(), n));

    return pair_term - cross_term +
           static_cast<double>(n) * std::pow(3.0, -static_cast<double>(s));
}

/// Covariance matrix of the discretized bridge: R_nm = min(n,m)/M, 1-based.
inline std::vector<double> wiener_r_matrix(std::size_t m) {
    if (m == 0) throw std::invalid_argument("wiener_r_matrix: m must be >= 1");
    std::vector<double> r(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            r[i * m + j] = static_cast<double>(std::min(i, j) + 1) / static_cast<double>(m);
    return r;
}

/// Analytic inverse of R: the quadratic form is
/// M phi_1^2 + M sum_{n>=2} (phi_n - phi_{n-1})^2, i.e. tridiagonal with
/// diagonal (2M,...,2M,M) and off-diagonal -M.
inline std::vector<double> wiener_r_inverse(std::size_t m) {
    if (m == 0) throw std::invalid_argument("wiener_r_inverse: m must be >= 1");
    const double dm = static_cast<double>(m);
    std::vector<double> inv(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        inv[i * m + i] = (i + 1 == m) ? dm : 2.0 * dm;
        if (i + 1 < m) {
            inv[i * m + i + 1] = -dm;
            inv[(i + 1) * m + i] = -dm;
        }
    }
    return inv;
}

namespace detail {

inline std::vector<std::int64_t> equal_bin_counts(const PointSet& ps, std::size_t m) {
    if (ps.dim() != 1)
        throw std::invalid_argument("discrete_wiener_discrepancy: dim-1 point sets only");
    if (m == 0) throw std::invalid_argument("discrete_wiener_discrepancy: m must be >= 1");
    std::vector<std::int64_t> counts(m, 0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        auto bin = static_cast<std::size_t>(ps.coord(i, 0) * static_cast<double>(m));
        if (bin >= m) bin = m - 1; // x < 1 guaranteed; guard rounding at the edge
        ++counts[bin];
    }
    return counts;
}

} // namespace detail

/// Discretized Wiener-measure discrepancy on M equal bins, direct form:
///   (1/(N*M)) sum_rho ( sum_{n>=rho} (S_n - N/M) )^2.
/// Converges to l2star_discrepancy (dim 1) like 1/M.
inline double discrete_wiener_discrepancy(const PointSet& ps, std::size_t m) {
    const auto counts = detail::equal_bin_counts(ps, m);
    const double n = static_cast<double>(ps.size());
    const double wexp = n / static_cast<double>(m);
    double suffix = 0.0;
    std::vector<double> sq(m);
    for (std::size_t rho = m; rho-- > 0;) {
        suffix += static_cast<double>(counts[rho]) - wexp;
        sq[rho] = suffix * suffix;
    }
    return pairwise_sum(sq) / (n * static_cast<double>(m));
}

/// Same statistic through the covariance route:
///   (1/N) S^T R S - 2 T^T S + N U,  T = R w, U = w^T R w, w_n = 1/M.
/// Kept as an independent path; must agree with the direct form to 1e-10.
inline double discrete_wiener_discrepancy_quadratic(const PointSet& ps, std::size_t m) {
    const auto counts = detail::equal_bin_counts(ps, m);
    const auto r = wiener_r_matrix(m);
    const double n = static_cast<double>(ps.size());
    const double w = 1.0 / static_cast<double>(m);

    double srs = 0.0, trs = 0.0, u = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row_s = 0.0, row_w = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            row_s += r[i * m + j] * static_cast<double>(counts[j]);
            row_w += r[i * m + j] * w;
        }
        srs += static_cast<double>(counts[i]) * row_s;
        trs += row_w * static_cast<double>(counts[i]);
        u += w * row_w;
    }
    return srs / n - 2.0 * trs + n * u;
}

} // namespace quadisc
