#include "qtanner/codes.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "qtanner/matrix_io.hpp"
#include "qtanner/rng.hpp"

namespace qtanner {

ClassicalCode::ClassicalCode(BinaryMatrix generator, BinaryMatrix parity)
    : generator_(std::move(generator)), parity_(std::move(parity)) {
    if (generator_.cols() != parity_.cols()) throw std::invalid_argument("generator and parity lengths differ");
    if (!generator_.multiply_transpose(parity_).is_zero()) throw std::invalid_argument("G H^T != 0");
    dimension_ = gf2::rank(generator_);
    if (dimension_ + gf2::rank(parity_) != generator_.cols())
        throw std::invalid_argument("rank(G) + rank(H) != n");
}

ClassicalCode ClassicalCode::from_parity(const BinaryMatrix& parity) {
    return {gf2::kernel_basis(parity), parity};
}

ClassicalCode ClassicalCode::from_generator(const BinaryMatrix& generator) {
    return {generator, gf2::kernel_basis(generator)};
}

std::optional<std::size_t> ClassicalCode::distance() const {
    if (!distance_) distance_ = min_distance_exhaustive(generator_);
    return *distance_;
}

ClassicalCode random_systematic(std::size_t info, std::size_t length, std::mt19937_64& rng) {
    if (info == 0 || info >= length) throw std::invalid_argument("random_systematic needs 0 < info < length");
    const std::size_t red = length - info;
    BinaryMatrix p(info, red);
    for (std::size_t i = 0; i < info; ++i)
        for (std::size_t j = 0; j < red; ++j)
            if (random_bit(rng)) p.set(i, j);
    BinaryMatrix g(info, length), h(red, length);
    for (std::size_t i = 0; i < info; ++i) {
        g.set(i, i);
        for (std::size_t j = 0; j < red; ++j)
            if (p.get(i, j)) {
                g.set(i, info + j);
                h.set(j, i);
            }
    }
    for (std::size_t j = 0; j < red; ++j) h.set(j, info + j);
    return {g, h};
}

ClassicalCode dual(const ClassicalCode& c) { return {c.parity(), c.generator()}; }

std::optional<std::size_t> min_distance_exhaustive(const BinaryMatrix& generator) {
    const BinaryMatrix basis = gf2::independent_rows(generator);
    const std::size_t k = basis.rows();
    if (k == 0) return std::nullopt;
    if (k > kMaxExhaustiveDimension)
        throw std::invalid_argument("dimension " + std::to_string(k) +
                                    " too large for exhaustive search; use the randomized estimator");
    BitVector word(basis.cols());
    std::size_t best = basis.cols();
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << k); ++i) {
        word ^= basis.row(static_cast<std::size_t>(std::countr_zero(i)));
        best = std::min(best, word.weight());
    }
    return best;
}

std::optional<std::size_t> min_distance_exhaustive(const ClassicalCode& c) {
    return min_distance_exhaustive(c.generator());
}

CodePair build_pair(const ClassicalCode& code_a, const ClassicalCode& code_b) {
    if (code_a.length() != code_b.length())
        throw std::invalid_argument("code pair block lengths differ (" + std::to_string(code_a.length()) + " vs " +
                                    std::to_string(code_b.length()) + ")");
    const BinaryMatrix ga = gf2::independent_rows(code_a.generator());
    const BinaryMatrix gb = gf2::independent_rows(code_b.generator());
    const BinaryMatrix ha = gf2::independent_rows(code_a.parity());
    const BinaryMatrix hb = gf2::independent_rows(code_b.parity());
    return {code_a, code_b, gf2::kron(ga, gb), gf2::kron(ha, hb)};
}

BinaryMatrix reduce_basis_weight(const BinaryMatrix& basis) {
    BinaryMatrix out = gf2::independent_rows(basis);
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.rows(); ++j) {
                if (i == j) continue;
                BitVector sum = out.row(i) ^ out.row(j);
                if (sum.weight() < out.row_weight(i)) {
                    out.set_row(i, sum);
                    improved = true;
                }
            }
    }
    return out;
}

nlohmann::json to_json(const ClassicalCode& c) {
    nlohmann::json j{{"n", c.length()},
                     {"k", c.dimension()},
                     {"G", io::to_row_lists(c.generator())},
                     {"H", io::to_row_lists(c.parity())}};
    if (auto d = c.distance())
        j["d"] = *d;
    else
        j["d"] = nullptr;
    return j;
}

ClassicalCode classical_code_from_json(const nlohmann::json& j) {
    const auto n = j.at("n").get<std::size_t>();
    ClassicalCode c(io::from_row_lists(j.at("G"), n), io::from_row_lists(j.at("H"), n));
    if (j.contains("k") && j.at("k").get<std::size_t>() != c.dimension())
        throw std::runtime_error("code JSON: k does not match rank(G)");
    return c;
}

}  // namespace qtanner
