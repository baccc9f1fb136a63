#pragma once
// Brute-force oracles shared by the unit suites. Everything here works on
// small instances by enumeration, independent of the library's elimination.

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "qtanner/gf2.hpp"

namespace oracle {

using qtanner::BinaryMatrix;
using qtanner::BitVector;

inline BinaryMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double density = 0.5) {
    std::bernoulli_distribution bit(density);
    BinaryMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (bit(rng)) m.set(r, c);
    return m;
}

inline std::uint64_t to_mask(const BitVector& v) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.get(i)) x |= std::uint64_t{1} << i;
    return x;
}

inline BitVector from_mask(std::uint64_t x, std::size_t n) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
        if ((x >> i) & 1U) v.set(i);
    return v;
}

/// Every vector in the row span (rows <= 20, cols <= 64).
inline std::set<std::uint64_t> span(const BinaryMatrix& m) {
    std::set<std::uint64_t> out;
    const std::size_t r = m.rows();
    for (std::uint64_t sel = 0; sel < (std::uint64_t{1} << r); ++sel) {
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < r; ++i)
            if ((sel >> i) & 1U) x ^= to_mask(m.row(i));
        out.insert(x);
    }
    return out;
}

/// log2 of the span size.
inline std::size_t rank(const BinaryMatrix& m) {
    std::size_t s = span(m).size(), r = 0;
    while (s > 1) {
        s >>= 1;
        ++r;
    }
    return r;
}

/// All x with m x = 0 (cols <= 24).
inline std::vector<std::uint64_t> kernel(const BinaryMatrix& m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m.cols()); ++x)
        if (!m.multiply(from_mask(x, m.cols())).any()) out.push_back(x);
    return out;
}

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace oracle
