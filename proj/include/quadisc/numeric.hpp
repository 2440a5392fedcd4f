#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace quadisc {

// Raised when an iterative scheme (quadrature level cap, contour truncation,
// scan cap) fails to reach its tolerance. CLI maps it to exit code 1,
// as opposed to precondition violations (invalid_argument/domain_error -> 2).
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pairwise (tree) reduction. Used for the large accumulations so that sums
// are reproducible under any future data-parallel split and rounding error
// grows like log n instead of n.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

} // namespace quadisc
