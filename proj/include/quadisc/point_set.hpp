#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadisc/rng.hpp"

namespace quadisc {

/// N points in [0,1)^s, row-major flat storage.
class PointSet {
public:
    PointSet(std::vector<double> coords, std::size_t dim)
        : coords_(std::move(coords)), dim_(dim) {
        if (dim_ == 0) throw std::invalid_argument("PointSet: dim must be >= 1");
        if (coords_.empty() || coords_.size() % dim_ != 0)
            throw std::invalid_argument("PointSet: coordinate count not a multiple of dim");
        for (double c : coords_)
            if (!(c >= 0.0 && c < 1.0))
                throw std::invalid_argument("PointSet: coordinate outside [0,1)");
    }

    std::size_t size() const noexcept { return coords_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }
    double coord(std::size_t point, std::size_t axis) const {
        return coords_[point * dim_ + axis];
    }
    const std::vector<double>& raw() const noexcept { return coords_; }

private:
    std::vector<double> coords_;
    std::size_t dim_;
};

/// Positive bin weights summing to 1. Bin n covers [c_{n-1}, c_n) with
/// c_n the cumulative sums; the final edge is pinned to exactly 1.
class LegoWeights {
public:
    explicit LegoWeights(std::vector<double> w) : w_(std::move(w)) {
        if (w_.empty()) throw std::invalid_argument("LegoWeights: empty");
        double sum = 0.0;
        for (double x : w_) {
            if (!(x > 0.0)) throw std::invalid_argument("LegoWeights: weights must be positive");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("LegoWeights: weights must sum to 1");
        edges_.resize(w_.size() + 1);
        edges_[0] = 0.0;
        for (std::size_t i = 0; i < w_.size(); ++i) edges_[i + 1] = edges_[i] + w_[i];
        edges_.back() = 1.0;
    }

    static LegoWeights uniform(std::size_t m) {
        if (m == 0) throw std::invalid_argument("LegoWeights: m must be >= 1");
        return LegoWeights(std::vector<double>(m, 1.0 / static_cast<double>(m)));
    }

    std::size_t bins() const noexcept { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& values() const noexcept { return w_; }

    // First bin whose right edge exceeds x; total for x in [0,1).
    std::size_t bin_of(double x) const {
        auto it = std::upper_bound(edges_.begin() + 1, edges_.end() - 1, x);
        return static_cast<std::size_t>(it - (edges_.begin() + 1));
    }

private:
    std::vector<double> w_;
    std::vector<double> edges_;
};

/// Occupation numbers of a binned point set.
struct CountVector {
    std::vector<std::int64_t> counts;
    std::int64_t n_total = 0;

    CountVector(std::vector<std::int64_t> c, std::int64_t n)
        : counts(std::move(c)), n_total(n) {
        std::int64_t sum = 0;
        for (auto v : counts) {
            if (v < 0) throw std::invalid_argument("CountVector: negative count");
            sum += v;
        }
        if (sum != n_total) throw std::invalid_argument("CountVector: counts do not sum to n_total");
    }
};

/// i.i.d. uniform points; the stream is splitmix64(seed), coordinates drawn
/// point-major. Identical (n, dim, seed) reproduce bit-identical sets.
inline PointSet uniform_pointset(std::size_t n, std::size_t dim, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("uniform_pointset: n must be >= 1");
    Splitmix64 rng(seed);
    std::vector<double> coords(n * dim);
    for (double& c : coords) c = rng.next_uniform();
    return PointSet(std::move(coords), dim);
}

inline CountVector bin_counts(const PointSet& ps, const LegoWeights& w) {
    if (ps.dim() != 1)
        throw std::invalid_argument("bin_counts: binning is defined for dim-1 point sets");
    std::vector<std::int64_t> counts(w.bins(), 0);
    for (std::size_t i = 0; i < ps.size(); ++i) ++counts[w.bin_of(ps.coord(i, 0))];
    return CountVector(std::move(counts), static_cast<std::int64_t>(ps.size()));
}

/// CSV: one point per row, comma-separated coordinates, no header.
inline PointSet read_pointset_csv(std::istream& in) {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(row, cell, ',')) {
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("pointset csv: unparsable cell '" + cell + "'");
            }
            if (pos != cell.size() && cell.find_first_not_of(" \t\r", pos) != std::string::npos)
                throw std::invalid_argument("pointset csv: trailing junk in cell '" + cell + "'");
            if (!(v >= 0.0 && v < 1.0))
                throw std::invalid_argument("pointset csv: coordinate outside [0,1)");
            coords.push_back(v);
            ++count;
        }
        if (dim == 0) dim = count;
        else if (count != dim) throw std::invalid_argument("pointset csv: ragged rows");
    }
    if (coords.empty()) throw std::invalid_argument("pointset csv: no data");
    return PointSet(std::move(coords), dim);
}

inline void write_pointset_csv(std::ostream& out, const PointSet& ps) {
    out.precision(17);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t a = 0; a < ps.dim(); ++a) {
            if (a) out << ',';
            out << ps.coord(i, a);
        }
        out << '\n';
    }
}

} // namespace quadisc
