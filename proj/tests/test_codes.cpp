#include "doctest.h"
#include "helpers.hpp"
#include "qtanner/codes.hpp"

using namespace qtanner;

namespace {

// Minimum nonzero weight over the enumerated row span.
std::optional<int> brute_distance(const BinaryMatrix& generator) {
    std::optional<int> best;
    for (auto x : oracle::span(generator))
        if (x && (!best || oracle::popcount(x) < *best)) best = oracle::popcount(x);
    return best;
}

}  // namespace

TEST_CASE("random systematic codes") {
    std::mt19937_64 rng(1);
    for (std::size_t len = 3; len <= 7; ++len)
        for (std::size_t info = 1; info < len; ++info) {
            const auto c = random_systematic(info, len, rng);
            CHECK(c.generator().multiply_transpose(c.parity()).is_zero());
            CHECK(c.dimension() == info);
            CHECK(c.parity().rows() == len - info);
            CHECK(gf2::rank(c.parity()) == len - info);
        }
    const auto c = random_systematic(1, 3, rng);
    CHECK(c.parity().rows() == 2);
    CHECK(c.parity().cols() == 3);
    std::mt19937_64 a(4), b(4);
    CHECK(random_systematic(3, 6, a).generator() == random_systematic(3, 6, b).generator());
    CHECK_THROWS(random_systematic(0, 3, a));
    CHECK_THROWS(random_systematic(3, 3, a));
}

TEST_CASE("duals") {
    const auto cb = ClassicalCode::from_parity(BinaryMatrix{{1, 1, 1}});
    const auto d = dual(cb);
    CHECK(d.dimension() == 1);
    CHECK(oracle::span(d.generator()) == std::set<std::uint64_t>{0, 0b111});
    CHECK(d.distance() == std::optional<std::size_t>(3));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto c = random_systematic(2, 6, rng);
        const auto dd = dual(dual(c));
        CHECK(gf2::same_row_space(dd.generator(), c.generator()));
        CHECK(dual(c).dimension() == 4);
    }
}

TEST_CASE("small-code distances") {
    const auto ca = ClassicalCode::from_parity(BinaryMatrix{{1, 0, 0}, {1, 1, 1}});
    CHECK(ca.dimension() == 1);
    CHECK(ca.distance() == std::optional<std::size_t>(2));
    CHECK(ClassicalCode::from_parity(BinaryMatrix{{1, 1, 1}}).distance() == std::optional<std::size_t>(2));
    CHECK(ClassicalCode::from_generator(BinaryMatrix{{1, 1, 1}}).distance() == std::optional<std::size_t>(3));
    CHECK_FALSE(ClassicalCode::from_parity(BinaryMatrix::identity(3)).distance().has_value());
}

TEST_CASE("exhaustive distance agrees with span enumeration") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 60; ++t) {
        const std::size_t len = 3 + rng() % 8;
        const std::size_t info = 1 + rng() % (len - 1);
        const auto c = random_systematic(info, len, rng);
        CHECK(min_distance_exhaustive(c) == std::optional<std::size_t>(*brute_distance(c.generator())));
    }
    CHECK_THROWS_AS(min_distance_exhaustive(BinaryMatrix::identity(21)), std::invalid_argument);
}

TEST_CASE("tensor pairs") {
    const auto ca = ClassicalCode::from_parity(BinaryMatrix{{1, 0, 0}, {1, 1, 1}});
    const auto cb = ClassicalCode::from_parity(BinaryMatrix{{1, 1, 1}});
    const auto pair = build_pair(ca, cb);
    CHECK(pair.c0.rows() == 2);  // 1 * 2
    CHECK(pair.c1.rows() == 2);  // 2 * 1
    CHECK(gf2::rank(pair.c0) == 2);

    const auto ca5 = ClassicalCode::from_parity(BinaryMatrix{{1, 0, 1, 0, 1}, {1, 1, 0, 0, 0}, {1, 0, 0, 0, 1}});
    const auto cb5 = ClassicalCode::from_parity(BinaryMatrix{{1, 1, 1, 1, 1}, {0, 1, 0, 0, 1}});
    const auto pair5 = build_pair(ca5, cb5);
    CHECK(gf2::rank(pair5.c0) == 6);
    CHECK(gf2::rank(pair5.c1) == 6);

    SUBCASE("dimension and distance multiply") {
        std::mt19937_64 rng(4);
        for (int t = 0; t < 30; ++t) {
            const std::size_t la = 3 + rng() % 3, lb = la;
            const auto a = random_systematic(1 + rng() % (la - 1), la, rng);
            const auto b = random_systematic(1 + rng() % (lb - 1), lb, rng);
            const auto p = build_pair(a, b);
            CHECK(gf2::rank(p.c0) == a.dimension() * b.dimension());
            CHECK(gf2::rank(p.c1) == (la - a.dimension()) * (lb - b.dimension()));
            CHECK(*brute_distance(p.c0) == static_cast<int>(*a.distance() * *b.distance()));
        }
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS(build_pair(ca, ClassicalCode::from_parity(BinaryMatrix{{1, 1, 1, 1}})));
    }
}

TEST_CASE("basis weight reduction keeps the row space") {
    const BinaryMatrix m{{1, 1, 1, 1, 0}, {1, 1, 1, 0, 1}, {0, 0, 0, 1, 1}};
    const auto r = reduce_basis_weight(m);
    CHECK(gf2::same_row_space(r, m));
    std::size_t before = 0, after = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) before += m.row_weight(i);
    for (std::size_t i = 0; i < r.rows(); ++i) after += r.row_weight(i);
    CHECK(after <= before);
}

TEST_CASE("classical code JSON") {
    std::mt19937_64 rng(5);
    const auto c = random_systematic(2, 5, rng);
    const auto back = classical_code_from_json(to_json(c));
    CHECK(back.generator() == c.generator());
    CHECK(back.parity() == c.parity());
}
