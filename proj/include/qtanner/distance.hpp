#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "json.hpp"
#include "qtanner/qcode.hpp"

namespace qtanner {

/// Best logical found for one Pauli type.
struct ComponentDistance {
    std::size_t d_upper = 0;
    BitVector witness;
    std::uint64_t found_at_trial = 0;  // first trial reaching d_upper
};

struct DistanceEstimate {
    ComponentDistance x;  // X-type logicals: ker(H_Z) outside rowspace(H_X)
    ComponentDistance z;  // Z-type logicals: ker(H_X) outside rowspace(H_Z)
    std::size_t d_upper = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

struct DistanceOptions {
    std::uint64_t trials = 0;  // 0: 1e5 for n <= 100, else 1e6
    std::uint64_t seed = 1;
    unsigned threads = 0;      // 0: hardware concurrency
};

std::uint64_t default_distance_trials(std::size_t n);

/// Random information-set search: each trial permutes columns, row-reduces a
/// basis of ker(H_Z) (resp. ker(H_X)) and keeps the lightest reduced row that
/// acts nontrivially on the logical pairing. Trial t uses derive_seed(seed, t),
/// so the result does not depend on the thread count and is monotone in trials.
/// Throws std::invalid_argument when k = 0.
DistanceEstimate estimate_distance(const CssCode& code, const DistanceOptions& options = {});

/// True when v is an X-type (resp. Z-type) logical: zero syndrome and nonzero
/// pairing with the opposite logical basis.
bool is_x_logical(const CssCode& code, const BitVector& v);
bool is_z_logical(const CssCode& code, const BitVector& v);

/// Exhaustive search over all supports of weight <= max_weight. Returns the
/// first logical found (X type searched first), or nullopt if none exists.
struct SmallLogical {
    char type;  // 'X' or 'Z'
    BitVector support;
};
std::optional<SmallLogical> find_logical_up_to_weight(const CssCode& code, std::size_t max_weight);

nlohmann::json to_json(const DistanceEstimate& d);

}  // namespace qtanner
