#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "qtanner/decoder.hpp"
#include "qtanner/qcode.hpp"

using namespace qtanner;

namespace {

// Minimum prior-weighted cost over all errors with H e = s; nullopt if none.
struct Brute {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t weight = 0;
    std::uint64_t error = 0;
};

Brute brute_force(const BinaryMatrix& h, const std::vector<double>& priors, const BitVector& s) {
    Brute best;
    const std::size_t n = h.cols();
    for (std::uint64_t e = 0; e < (1ULL << n); ++e) {
        if (!(h.multiply(oracle::from_mask(e, n)) == s)) continue;
        double c = 0;
        for (std::size_t j = 0; j < n; ++j)
            if ((e >> j) & 1U) c += std::log((1 - priors[j]) / priors[j]);
        if (c < best.cost) best = {c, static_cast<std::size_t>(oracle::popcount(e)), e};
    }
    return best;
}

}  // namespace

TEST_CASE("zero syndrome decodes to zero") {
    const BinaryMatrix h{{1, 1, 0}, {0, 1, 1}};
    BpOsdDecoder dec(h, {0.1, 0.1, 0.1});
    const auto r = dec.decode(BitVector(2));
    CHECK(r.bp_converged);
    CHECK(r.bp_iterations == 0);
    CHECK_FALSE(r.error.any());
}

TEST_CASE("Hamming code single errors") {
    const BinaryMatrix h{{1, 0, 1, 0, 1, 0, 1}, {0, 1, 1, 0, 0, 1, 1}, {0, 0, 0, 1, 1, 1, 1}};
    BpOsdDecoder dec(h, std::vector<double>(7, 0.05));
    for (std::size_t q = 0; q < 6; ++q) {
        BitVector e(7);
        e.set(q);
        CHECK(dec.decode(h.multiply(e)).error == e);
    }
    // Syndrome 111: min-sum satisfies it after one iteration with columns
    // 2, 4, 5, 6 and stops there; OSD on the same soft values finds column 6.
    BitVector e6(7);
    e6.set(6);
    const auto bp = dec.bp_decode(h.multiply(e6));
    CHECK(bp.converged);
    CHECK(bp.hard_decision == BitVector::from_bits({0, 0, 1, 0, 1, 1, 1}));
    CHECK(dec.osd_postprocess(bp.soft, h.multiply(e6)) == e6);
}

TEST_CASE("split belief falls back to OSD") {
    const BinaryMatrix h{{1, 1}};
    BpOsdDecoder dec(h, {0.1, 0.1});
    const auto r = dec.decode(BitVector::from_bits({1}));
    CHECK_FALSE(r.bp_converged);
    CHECK(r.used_osd);
    CHECK(r.error.weight() == 1);
    CHECK(h.multiply(r.error) == BitVector::from_bits({1}));
}

TEST_CASE("OSD ties break by column index") {
    const BinaryMatrix h{{1, 1, 1}};
    const auto e = osd_postprocess(h, {0.1, 0.1, 0.1}, {1.0, 1.0, 1.0}, BitVector::from_bits({1}));
    CHECK(e == BitVector::from_bits({1, 0, 0}));
}

TEST_CASE("inconsistent syndrome") {
    const BinaryMatrix h{{1, 1}, {1, 1}};
    BpOsdDecoder dec(h, {0.1, 0.1});
    CHECK_THROWS_AS(dec.decode(BitVector::from_bits({1, 0})), std::domain_error);
}

TEST_CASE("min-sum on a tree finds the MAP error") {
    // Chain Tanner graph, so min-sum with alpha = 1 is exact.
    const BinaryMatrix h{{1, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 1, 1}};
    const std::vector<double> priors{0.05, 0.11, 0.02, 0.17, 0.08};
    DecoderConfig cfg;
    cfg.alpha = 1.0;
    for (std::uint64_t s = 0; s < 16; ++s) {
        const auto syn = oracle::from_mask(s, 4);
        const auto brute = brute_force(h, priors, syn);
        const auto bp = bp_decode(h, priors, syn, cfg);
        CHECK(bp.converged);
        CHECK(bp.hard_decision == oracle::from_mask(brute.error, 5));
    }
}

TEST_CASE("OSD matches brute-force weight on small random matrices") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 5; ++t) {
        const auto h = oracle::random_matrix(4, 8, rng, 0.5);
        const std::vector<double> priors(8, 0.1);
        BpOsdDecoder dec(h, priors);
        for (std::uint64_t e = 0; e < 256; ++e) {
            const auto syn = h.multiply(oracle::from_mask(e, 8));
            const auto out = dec.decode(syn);
            CHECK(h.multiply(out.error) == syn);
            const auto bp = dec.bp_decode(syn);
            CHECK(dec.osd_postprocess(bp.soft, syn).weight() == brute_force(h, priors, syn).weight);
        }
    }
}

TEST_CASE("order zero equals lambda zero") {
    std::mt19937_64 rng(22);
    const auto h = oracle::random_matrix(6, 14, rng, 0.4);
    const std::vector<double> priors(14, 0.07);
    DecoderConfig zero, o0;
    zero.osd_order = 0;
    o0.osd_strategy = OsdStrategy::OrderZero;
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> soft(14);
        for (auto& x : soft) x = u(rng);
        const auto syn = h.multiply(oracle::from_mask(rng() & 0x3FFF, 14));
        CHECK(osd_postprocess(h, priors, soft, syn, zero) == osd_postprocess(h, priors, soft, syn, o0));
    }
}

TEST_CASE("single errors on d4-36 are corrected up to stabilizers") {
    const auto code = load_fixture("d4-36");
    const std::vector<double> priors(code.n(), 0.01);
    BpOsdDecoder x_dec(code.hz(), priors), z_dec(code.hx(), priors);
    for (std::size_t q = 0; q < code.n(); ++q) {
        BitVector e(code.n());
        e.set(q);
        const auto rx = e ^ x_dec.decode(code.hz().multiply(e)).error;
        CHECK_FALSE(code.hz().multiply(rx).any());
        CHECK_FALSE(code.logical_z().multiply(rx).any());
        const auto rz = e ^ z_dec.decode(code.hx().multiply(e)).error;
        CHECK_FALSE(code.hx().multiply(rz).any());
        CHECK_FALSE(code.logical_x().multiply(rz).any());
    }
}

TEST_CASE("decoder config JSON") {
    DecoderConfig c;
    c.alpha = 0.8;
    c.max_iters = 17;
    c.osd_order = 3;
    c.osd_strategy = OsdStrategy::OrderZero;
    const auto back = decoder_config_from_json(to_json(c));
    CHECK(back.alpha == c.alpha);
    CHECK(back.max_iters == 17);
    CHECK(back.osd_order == 3);
    CHECK(back.osd_strategy == OsdStrategy::OrderZero);
    const auto flat = decoder_config_from_json({{"bp.alpha", 0.5}, {"osd.order", 2}});
    CHECK(flat.alpha == 0.5);
    CHECK(flat.osd_order == 2);
    DecoderConfig bad;
    bad.alpha = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK(parse_osd_strategy(to_string(OsdStrategy::CombinationSweep)) == OsdStrategy::CombinationSweep);
}
