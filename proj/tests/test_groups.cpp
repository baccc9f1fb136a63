#include <stdexcept>
#include "doctest.h"
#include "qtanner/groups.hpp"

using namespace qtanner;

namespace {

DihedralElement el(const DihedralGroup& g, const char* s) { return g.parse(s); }

// All symmetric identity-free subsets of the given size, by brute force.
std::vector<GeneratorSet> all_symmetric_sets(const DihedralGroup& g, std::size_t size) {
    std::vector<GeneratorSet> out;
    const auto elems = g.enumerate();
    const std::size_t order = elems.size();
    for (std::uint32_t mask = 0; mask < (1U << order); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != size || (mask & 1U)) continue;
        GeneratorSet s;
        for (std::size_t i = 0; i < order; ++i)
            if ((mask >> i) & 1U) s.elements.push_back(elems[i]);
        bool sym = true;
        for (const auto& x : s.elements) sym = sym && s.contains(g.invert(x));
        if (sym) out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("dihedral relations") {
    const DihedralGroup d4(4);
    CHECK(d4.multiply(el(d4, "r"), el(d4, "r^3")) == d4.identity());
    CHECK(d4.multiply(d4.multiply(el(d4, "s"), el(d4, "r")), el(d4, "s")) == el(d4, "r^3"));
    CHECK(d4.enumerate().size() == 8);
    CHECK(DihedralGroup(10).enumerate().size() == 20);
    for (std::uint32_t n : {3U, 4U, 5U, 8U}) {
        const DihedralGroup g(n);
        const auto r = el(g, "r"), s = el(g, "s");
        DihedralElement rn = g.identity();
        for (std::uint32_t i = 0; i < n; ++i) rn = g.multiply(rn, r);
        CHECK(rn == g.identity());
        CHECK(g.multiply(s, s) == g.identity());
    }
}

TEST_CASE("group axioms by enumeration") {
    for (std::uint32_t n : {3U, 4U, 5U, 6U}) {
        const DihedralGroup g(n);
        const auto all = g.enumerate();
        for (const auto& x : all) {
            CHECK(g.multiply(x, g.invert(x)) == g.identity());
            CHECK(g.multiply(g.invert(x), x) == g.identity());
            for (const auto& y : all)
                for (const auto& z : all) CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
        }
    }
}

TEST_CASE("canonical order and notation") {
    const DihedralGroup g(4);
    const auto all = g.enumerate();
    const std::vector<std::string> names{"e", "r", "r^2", "r^3", "s", "sr", "sr^2", "sr^3"};
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(g.format(all[i]) == names[i]);
        CHECK(g.index(all[i]) == i);
        CHECK(g.element(i) == all[i]);
        CHECK(g.parse(names[i]) == all[i]);
    }
    // sr^k is s followed by r^k.
    CHECK(g.parse("sr^3") == g.multiply(el(g, "s"), el(g, "r^3")));
    CHECK_THROWS(g.parse("t"));
}

TEST_CASE("symmetric generator sampling") {
    const DihedralGroup g(6);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto set = sample_symmetric_generators(g, 3, rng);
        CHECK(set.size() == 3);
        CHECK_NOTHROW(validate_generator_set(g, set));
        bool has_involution = false;
        for (const auto& x : set.elements) has_involution = has_involution || g.is_involution(x);
        CHECK(has_involution);
    }
    std::mt19937_64 a(9), b(9);
    CHECK(format_generator_set(g, sample_symmetric_generators(g, 4, a)) ==
          format_generator_set(g, sample_symmetric_generators(g, 4, b)));
}

TEST_CASE("delta feasibility") {
    CHECK_THROWS_AS(check_delta_feasible(DihedralGroup(4), 4), std::invalid_argument);  // delta = |G|/2
    CHECK_NOTHROW(check_delta_feasible(DihedralGroup(4), 3));
    CHECK_THROWS_AS(check_delta_feasible(DihedralGroup(5), 3), std::invalid_argument);  // odd n, odd delta
    CHECK_NOTHROW(check_delta_feasible(DihedralGroup(5), 4));
}

TEST_CASE("total non-conjugacy") {
    const DihedralGroup g(4);
    const auto a = parse_generator_set(g, {"s", "r", "r^3"});
    const auto b = parse_generator_set(g, {"sr", "sr^3", "r^2"});
    CHECK_FALSE(check_tnc(g, a, b).has_value());

    SUBCASE("shared element gives a witness at the identity") {
        const auto b2 = parse_generator_set(g, {"s", "sr^2", "r^2"});
        const auto w = check_tnc(g, a, b2);
        REQUIRE(w.has_value());
        CHECK(w->g == g.identity());
        CHECK(g.multiply(w->a, w->g) == g.multiply(w->g, w->b));
    }
    SUBCASE("witness is a conjugation g^-1 a g = b") {
        const auto b3 = parse_generator_set(g, {"sr^2", "r", "r^3"});
        const auto w = check_tnc(g, parse_generator_set(g, {"s", "r^2", "sr^2"}), b3);
        REQUIRE(w.has_value());
        CHECK(g.multiply(g.invert(w->g), g.multiply(w->a, w->g)) == w->b);
    }
    SUBCASE("odd n with odd delta always violates") {
        const DihedralGroup g5(5);
        const auto sets = all_symmetric_sets(g5, 3);
        REQUIRE(!sets.empty());
        for (const auto& x : sets)
            for (const auto& y : sets) CHECK(check_tnc(g5, x, y).has_value());
    }
}

TEST_CASE("validation errors") {
    const DihedralGroup g(4);
    CHECK_THROWS(validate_generator_set(g, parse_generator_set(g, {"r", "s"})));  // r^3 missing
    CHECK_THROWS(validate_generator_set(g, parse_generator_set(g, {"e", "s"})));
    CHECK_THROWS(validate_generator_set(g, parse_generator_set(g, {"s", "s"})));
}

TEST_CASE("TNC pair sampling") {
    const DihedralGroup g(8);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        const auto [a, b] = sample_tnc_pair(g, 5, rng);
        CHECK_FALSE(check_tnc(g, a, b).has_value());
        CHECK(generates_group(g, a, b));
    }
}
