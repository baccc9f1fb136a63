#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "qtanner/gf2.hpp"

using namespace qtanner;

TEST_CASE("bit vector basics") {
    BitVector v(70);
    v.set(0);
    v.set(69);
    CHECK(v.weight() == 2);
    CHECK(v.support() == std::vector<std::size_t>{0, 69});
    v.flip(69);
    CHECK(v.weight() == 1);
    const BitVector w = BitVector::from_support(70, {0, 5});
    CHECK((v ^ w).support() == std::vector<std::size_t>{5});
    CHECK(v.dot(w));
    CHECK(BitVector::from_bits({1, 0, 1}).to_string() == "101");
}

TEST_CASE("rank of identity and zero") {
    CHECK(gf2::rank(BinaryMatrix::identity(3)) == 3);
    CHECK(gf2::rank(BinaryMatrix(2, 5)) == 0);
}

TEST_CASE("rref examples") {
    const auto r = gf2::rref(BinaryMatrix{{1, 1}, {0, 1}});
    CHECK(r.reduced == BinaryMatrix::identity(2));
    CHECK(r.pivot_cols == std::vector<std::size_t>{0, 1});
    const auto z = gf2::rref(BinaryMatrix(2, 3));
    CHECK(z.reduced == BinaryMatrix(2, 3));
    CHECK(z.pivot_cols.empty());
}

TEST_CASE("rref preserves the row space of random 4x8 matrices") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const auto m = oracle::random_matrix(4, 8, rng);
        const auto r = gf2::rref(m);
        CHECK(oracle::span(r.reduced) == oracle::span(m));
        CHECK(std::is_sorted(r.pivot_cols.begin(), r.pivot_cols.end()));
        // Each pivot column is a unit column.
        for (std::size_t i = 0; i < r.pivot_cols.size(); ++i)
            CHECK(r.reduced.column_weight(r.pivot_cols[i]) == 1);
    }
}

TEST_CASE("rank agrees with span enumeration and with the transpose") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 60; ++t) {
        const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 12;
        const auto m = oracle::random_matrix(rows, cols, rng, 0.4);
        CHECK(gf2::rank(m) == oracle::rank(m));
        CHECK(gf2::rank(m) == gf2::rank(m.transpose()));
    }
}

TEST_CASE("kernel basis examples") {
    const auto k = gf2::kernel_basis(BinaryMatrix{{1, 1, 1}});
    CHECK(k.rows() == 2);
    for (std::size_t r = 0; r < k.rows(); ++r) CHECK(k.row_weight(r) % 2 == 0);
    CHECK(gf2::kernel_basis(BinaryMatrix::identity(4)).rows() == 0);
    // Enumerating all 8 vectors leaves only 011 besides zero.
    const BinaryMatrix h{{1, 0, 0}, {1, 1, 1}};
    CHECK(oracle::kernel(h) == std::vector<std::uint64_t>{0, 0b110});
    const auto kh = gf2::kernel_basis(h);
    REQUIRE(kh.rows() == 1);
    CHECK(kh.row(0) == BitVector::from_bits({0, 1, 1}));
}

TEST_CASE("kernel basis spans the enumerated kernel") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 40; ++t) {
        const auto m = oracle::random_matrix(1 + rng() % 6, 3 + rng() % 10, rng);
        const auto k = gf2::kernel_basis(m);
        CHECK(k.rows() == m.cols() - gf2::rank(m));
        CHECK(m.multiply_transpose(k).is_zero());
        const auto ks = oracle::kernel(m);
        CHECK(oracle::span(k) == std::set<std::uint64_t>(ks.begin(), ks.end()));
    }
}

TEST_CASE("solve_submatrix") {
    const std::vector<std::size_t> all3{0, 1, 2};
    const auto s = BitVector::from_bits({1, 0, 1});
    CHECK(gf2::solve_submatrix(BinaryMatrix::identity(3), all3, s) == s);
    const std::vector<std::size_t> both{0, 1};
    CHECK(gf2::solve_submatrix(BinaryMatrix{{1, 1}, {0, 1}}, both, BitVector::from_bits({1, 1})) ==
          BitVector::from_bits({0, 1}));

    SUBCASE("random consistent instances re-multiply exactly") {
        std::mt19937_64 rng(14);
        for (int t = 0; t < 50; ++t) {
            const auto m = oracle::random_matrix(5, 9, rng);
            const auto pivots = gf2::rref(m).pivot_cols;
            const auto e0 = oracle::from_mask(rng() & 0x1FF, 9);
            const auto syn = m.multiply(e0);
            const auto e = gf2::solve_submatrix(m, pivots, syn);
            CHECK(m.multiply(e) == syn);
            for (auto c : e.support()) CHECK(std::find(pivots.begin(), pivots.end(), c) != pivots.end());
        }
    }
    SUBCASE("errors") {
        const BinaryMatrix m{{1, 1, 0}, {0, 0, 1}};
        const std::vector<std::size_t> dependent{0, 1};
        CHECK_THROWS_AS(gf2::solve_submatrix(m, dependent, BitVector(2)), std::invalid_argument);
        const BinaryMatrix low{{1, 1}, {1, 1}};
        const std::vector<std::size_t> one{0};
        CHECK_THROWS_AS(gf2::solve_submatrix(low, one, BitVector::from_bits({1, 0})), std::domain_error);
    }
}

TEST_CASE("kron") {
    const BinaryMatrix m{{1, 0, 1}, {0, 1, 1}};
    CHECK(gf2::kron(BinaryMatrix{{1}}, m) == m);
    const auto k = gf2::kron(BinaryMatrix{{0, 1, 1}}, BinaryMatrix{{1, 1, 0}});
    CHECK(k.rows() == 1);
    CHECK(k.cols() == 9);
    CHECK(k.row_weight(0) == 4);
    std::mt19937_64 rng(15);
    for (int t = 0; t < 20; ++t) {
        const auto a = oracle::random_matrix(2, 3, rng), b = oracle::random_matrix(3, 4, rng);
        const auto ab = gf2::kron(a, b);
        for (std::size_t ra = 0; ra < 2; ++ra)
            for (std::size_t rb = 0; rb < 3; ++rb)
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = 0; j < 4; ++j)
                        CHECK(ab.get(ra * 3 + rb, i * 4 + j) == (a.get(ra, i) && b.get(rb, j)));
        for (std::size_t ra = 0; ra < 2; ++ra)
            CHECK(ab.row_weight(ra * 3) == a.row_weight(ra) * b.row_weight(0));
    }
}

TEST_CASE("inverse") {
    std::mt19937_64 rng(16);
    int found = 0;
    while (found < 20) {
        const auto m = oracle::random_matrix(6, 6, rng);
        if (gf2::rank(m) < 6) {
            CHECK_THROWS_AS(gf2::inverse(m), std::domain_error);
            continue;
        }
        ++found;
        CHECK(m.multiply(gf2::inverse(m)) == BinaryMatrix::identity(6));
    }
    CHECK_THROWS_AS(gf2::inverse(BinaryMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("row-space helpers") {
    const BinaryMatrix m{{1, 1, 0}, {0, 1, 1}};
    CHECK(gf2::in_row_space(m, BitVector::from_bits({1, 0, 1})));
    CHECK_FALSE(gf2::in_row_space(m, BitVector::from_bits({1, 0, 0})));
    CHECK(gf2::same_row_space(m, BinaryMatrix{{1, 0, 1}, {1, 1, 0}}));
    CHECK(gf2::independent_rows(BinaryMatrix{{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}).rows() == 2);
}
