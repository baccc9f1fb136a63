#pragma once

#include <cstddef>
#include <optional>
#include <random>

#include "json.hpp"
#include "qtanner/gf2.hpp"

namespace qtanner {

/// Binary linear [n, k] code held by both its generator and parity-check matrix.
class ClassicalCode {
public:
    /// Checks G H^T = 0 and rank(G) + rank(H) = n.
    ClassicalCode(BinaryMatrix generator, BinaryMatrix parity);

    static ClassicalCode from_parity(const BinaryMatrix& parity);
    static ClassicalCode from_generator(const BinaryMatrix& generator);

    const BinaryMatrix& generator() const { return generator_; }
    const BinaryMatrix& parity() const { return parity_; }
    std::size_t length() const { return generator_.cols(); }
    std::size_t dimension() const { return dimension_; }

    /// Exhaustive minimum distance, memoised. nullopt for the zero-dimensional code.
    std::optional<std::size_t> distance() const;

private:
    BinaryMatrix generator_;
    BinaryMatrix parity_;
    std::size_t dimension_;
    mutable std::optional<std::optional<std::size_t>> distance_;
};

/// G = [I | P], H = [P^T | I] with P uniform over info x (length - info) matrices.
ClassicalCode random_systematic(std::size_t info, std::size_t length, std::mt19937_64& rng);

ClassicalCode dual(const ClassicalCode& c);

inline constexpr std::size_t kMaxExhaustiveDimension = 20;

/// Minimum nonzero codeword weight by enumerating all 2^k codewords (Gray code
/// order). nullopt when k = 0. Throws std::invalid_argument above k = 20; use
/// the randomized estimator for larger codes.
std::optional<std::size_t> min_distance_exhaustive(const ClassicalCode& c);
std::optional<std::size_t> min_distance_exhaustive(const BinaryMatrix& generator);

/// Tensor codes over the (a, b) grid: column (i, j) of either basis is i * delta_b + j.
struct CodePair {
    ClassicalCode code_a;
    ClassicalCode code_b;
    BinaryMatrix c0;  // basis of C_A (x) C_B: Kronecker products of generator rows
    BinaryMatrix c1;  // basis of C_A^perp (x) C_B^perp: Kronecker products of parity rows

    std::size_t delta_a() const { return code_a.length(); }
    std::size_t delta_b() const { return code_b.length(); }
};

CodePair build_pair(const ClassicalCode& code_a, const ClassicalCode& code_b);

/// Optional basis post-step: repeatedly replaces a row by its sum with another
/// row when that lowers the row's weight without changing the row space.
BinaryMatrix reduce_basis_weight(const BinaryMatrix& basis);

nlohmann::json to_json(const ClassicalCode& c);
ClassicalCode classical_code_from_json(const nlohmann::json& j);

}  // namespace qtanner
