#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtanner/codes.hpp"
#include "qtanner/complex.hpp"
#include "qtanner/gf2.hpp"

namespace qtanner {

/// How a code was built; enough to rebuild it bit-exactly.
struct Provenance {
    std::uint32_t dihedral_n = 0;
    std::vector<std::string> a;  // ordered generator names
    std::vector<std::string> b;
    BinaryMatrix parity_a;
    BinaryMatrix parity_b;
    std::optional<std::uint64_t> seed;
    std::string label;
};

struct WeightStats {
    std::map<std::size_t, std::size_t> hx_row_weights;  // weight -> count
    std::map<std::size_t, std::size_t> hz_row_weights;
    std::size_t max_row_weight = 0;
    std::size_t max_hx_column_weight = 0;
    std::size_t max_hz_column_weight = 0;
    std::size_t max_qubit_degree = 0;  // column weight of [H_X; H_Z]
};

/// CSS code with H_X H_Z^T = 0. Logical bases are paired so that
/// logical_x * logical_z^T = I_k.
class CssCode {
public:
    CssCode(BinaryMatrix hx, BinaryMatrix hz, std::optional<Provenance> provenance = std::nullopt);
    /// Uses the given logical bases after checking them (commutation, k rows,
    /// full-rank pairing).
    CssCode(BinaryMatrix hx, BinaryMatrix hz, BinaryMatrix logical_x, BinaryMatrix logical_z,
            std::optional<Provenance> provenance = std::nullopt);

    const BinaryMatrix& hx() const { return hx_; }
    const BinaryMatrix& hz() const { return hz_; }
    const BinaryMatrix& logical_x() const { return logical_x_; }
    const BinaryMatrix& logical_z() const { return logical_z_; }
    std::size_t n() const { return hx_.cols(); }
    std::size_t k() const { return k_; }
    std::size_t rank_hx() const { return rank_hx_; }
    std::size_t rank_hz() const { return rank_hz_; }
    const std::optional<Provenance>& provenance() const { return provenance_; }
    const WeightStats& weights() const { return weights_; }

private:
    BinaryMatrix hx_, hz_;
    BinaryMatrix logical_x_, logical_z_;
    std::size_t k_ = 0, rank_hx_ = 0, rank_hz_ = 0;
    std::optional<Provenance> provenance_;
    WeightStats weights_;
};

/// Z checks: one row per (v in V0, C0 basis row); X checks: one row per
/// (v in V1, C1 basis row). Columns are face ids. Throws std::logic_error if
/// the result fails to commute.
CssCode build_tanner_code(const LeftRightCayleyComplex& complex, const CodePair& pair,
                          std::optional<Provenance> provenance = std::nullopt);

/// Builds group, complex, classical codes and Tanner code from a provenance record.
CssCode build_from_provenance(const Provenance& p);

/// ker(H1) modulo rowspace(H2): returns rows completing a basis of the quotient.
BinaryMatrix logical_basis(const BinaryMatrix& kernel_of, const BinaryMatrix& modulo);

struct CodeParameters {
    std::size_t n = 0, k = 0;
    double rate = 0;
    std::size_t hx_rows = 0, hz_rows = 0;
    WeightStats weights;
    /// The k >= 4 rho (1 - rho) n count, recorded for comparison only.
    std::optional<double> generator_count_bound;
    std::optional<std::size_t> delta;
    std::optional<double> rho;
};

CodeParameters parameters(const CssCode& code);

/// Construction invariants checked against the provenance record.
struct StructuralReport {
    bool commutes = false;
    std::size_t n = 0, n_expected = 0;         // expected: delta_a delta_b |G| / 2
    std::size_t max_row_weight = 0, row_weight_bound = 0;  // bound: delta_a delta_b
    std::size_t max_qubit_degree = 0;
    // 2 (k_A k_B + (delta_a - k_A)(delta_b - k_B)): each face lies in two local
    // views per side. Equals 4 rho (1 - rho) delta^2 when k_B = delta - k_A.
    std::size_t qubit_degree_bound = 0;
    std::size_t k = 0, k_from_ranks = 0;
    bool ok() const {
        return commutes && n == n_expected && max_row_weight <= row_weight_bound &&
               max_qubit_degree <= qubit_degree_bound && k == k_from_ranks;
    }
};

/// Throws std::invalid_argument when the code has no provenance.
StructuralReport structural_report(const CssCode& code);
nlohmann::json to_json(const StructuralReport& r);

/// Random instance: TNC generator pair of size delta in D_n and random
/// systematic classical codes of the given dimensions (uniform in
/// [1, delta - 1] when absent). Throws when the group cannot host delta.
Provenance sample_provenance(std::uint32_t dihedral_n, std::size_t delta, std::mt19937_64& rng,
                             std::optional<std::size_t> info_a = std::nullopt,
                             std::optional<std::size_t> info_b = std::nullopt);

struct FixtureInfo {
    std::string name;
    std::size_t n, k, d;  // reference parameters
    std::size_t built_d;  // distance of the code as built here (upper bound for n > 100)
    Provenance provenance;
};

const std::vector<FixtureInfo>& fixtures();
const FixtureInfo& fixture_info(const std::string& name);
CssCode load_fixture(const std::string& name);

nlohmann::json provenance_to_json(const Provenance& p);
Provenance provenance_from_json(const nlohmann::json& j);
nlohmann::json parameters_to_json(const CodeParameters& p);

/// Bundle directory: meta.json, hx.alist, hz.alist, lx.alist, lz.alist.
void save_bundle(const std::filesystem::path& dir, const CssCode& code, const nlohmann::json& extra = {});
CssCode load_bundle(const std::filesystem::path& dir);

}  // namespace qtanner
