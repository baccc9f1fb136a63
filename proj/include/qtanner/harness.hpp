#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qtanner/decoder.hpp"
#include "qtanner/noise.hpp"
#include "qtanner/qcode.hpp"

namespace qtanner {

// ---------------------------------------------------------------- statistics

/// Per-round combined rate (L_X + L_Z - L_X L_Z) / N.
double combined_rate(double l_x, double l_z, std::size_t rounds);

/// Binomial half-width (1.645 / sqrt(eta)) * sqrt(eta_s * eta_f / eta^2),
/// with eta_s = eta - eta_f. Zero when eta = 0.
double ci_half_width(std::size_t shots, std::size_t failures);

/// Rate of at least one failure among k independent copies: 1 - (1 - p)^k.
double k_copy_rate(double p, std::size_t k);

// ---------------------------------------------------------------- memory runs

struct RunOptions {
    std::size_t max_shots = 10'000'000;  // cap per component
    std::size_t target_failures = 100;   // stop once a component reaches this many
    std::size_t block = 256;             // shots per work unit
    std::uint64_t seed = 1;
    std::size_t threads = 0;             // 0: hardware concurrency
};

struct ComponentStats {
    std::size_t shots = 0;
    std::size_t failures = 0;
    std::size_t bp_converged = 0;
    std::size_t osd_calls = 0;
    std::size_t mechanisms = 0;
    std::size_t detectors = 0;
};

/// L_X is the failure rate of the X-memory run, L_Z that of the Z-memory run.
struct ExperimentResult {
    std::string code;
    NoiseModel noise;
    DecoderConfig decoder;
    std::size_t k = 0;
    ComponentStats x, z;
    double l_x = 0, l_z = 0;
    double p_l = 0;   // per round
    double ci = 0;    // half-width of the combined failure fraction
    double seconds = 0;
    std::uint64_t seed = 0;
};

/// Samples and decodes one decoding problem. Shot i of the run uses an
/// engine seeded from (seed, i); blocks of shots are farmed out to threads,
/// and the stopping rule is applied to the smallest prefix of blocks that
/// meets it, so counts do not depend on the thread count.
ComponentStats run_component(const SpaceTimeCheckMatrix& problem, const DecoderConfig& decoder,
                             const RunOptions& options);

/// Both memory components, combined per the result invariants. `code_id` is
/// carried into the result.
ExperimentResult run_memory(const CssCode& code, const std::string& code_id, const NoiseModel& noise,
                            const DecoderConfig& decoder, const RunOptions& options);

nlohmann::json to_json(const ExperimentResult& r);

inline constexpr const char* kCsvHeader = "code,model,p,rounds,shots_x,shots_z,fails_x,fails_z,L_X,L_Z,p_L,ci,seed";
std::string csv_row(const ExperimentResult& r);
/// Appends one row, writing the header first when the file is new or empty.
void append_csv(const std::filesystem::path& path, const ExperimentResult& r);

// ---------------------------------------------------------------- thresholds

/// Break-even line: k p for capacity/phenomenological noise, T k p / 10 for
/// circuit noise with T the depth of one extraction round.
double break_even_target(const CssCode& code, NoiseKind kind, double p, std::size_t depth);

struct ThresholdOptions {
    double p_low = 1e-3;
    double p_high = 0.1;
    double relative_width = 0.05;  // stop when p_high / p_low <= 1 + width
    std::size_t scan_points = 6;   // log-spaced grid over the bracket, endpoints included
    std::size_t max_steps = 30;
    RunOptions run;
};

struct ThresholdPoint {
    double p = 0;
    double p_l = 0;
    double ci = 0;
    double target = 0;
};

struct ThresholdResult {
    double p_star = 0;  // geometric midpoint of the final bracket
    double p_low = 0, p_high = 0;
    std::size_t depth = 0;
    std::vector<ThresholdPoint> curve;  // every evaluated point, in order
    std::vector<ExperimentResult> runs;
};

class ThresholdError : public std::runtime_error {
public:
    ThresholdError(const std::string& what, std::vector<ThresholdPoint> curve)
        : std::runtime_error(what), curve_(std::move(curve)) {}
    const std::vector<ThresholdPoint>& curve() const { return curve_; }

private:
    std::vector<ThresholdPoint> curve_;
};

/// Scans a log-spaced grid upward from p_low for the first sign change of
/// p_L(p) - target(p), then bisects that interval in log p. p_L saturates at
/// 1/N, so the difference can change sign twice; the lower crossing is the
/// one reported. `noise` supplies the kind, rounds and circuit options; its p
/// is ignored. Throws ThresholdError with the evaluated curve when no grid
/// interval straddles the target.
ThresholdResult pseudo_threshold(const CssCode& code, const std::string& code_id, const NoiseModel& noise,
                                 const DecoderConfig& decoder, const ThresholdOptions& options);

nlohmann::json to_json(const ThresholdResult& r);

// ---------------------------------------------------------------- overhead

struct Overhead {
    std::size_t n = 0, k = 0, d = 0;
    std::size_t n_anc = 0;      // rows(H_X) + rows(H_Z)
    std::size_t d_x = 0, d_z = 0;  // max row or column weight of H_X, H_Z
    std::size_t space = 0;      // n + n_anc
    std::size_t time = 0;       // (d_x + d_z) d
    std::size_t o_st = 0;
    double per_logical = 0;
    std::size_t circuit_depth = 0;  // layers in one generated extraction round
};

Overhead overhead(const CssCode& code, std::size_t d);
nlohmann::json to_json(const Overhead& o);

// ---------------------------------------------------------------- distance sweep

struct SweepOptions {
    std::vector<std::uint32_t> groups{4, 6, 8, 10};  // dihedral n
    std::vector<std::size_t> deltas{3, 4, 5, 6};
    std::vector<std::pair<std::size_t, std::size_t>> targets{{1, 1}, {1, 2}, {2, 1}, {2, 2},
                                                             {3, 1}, {3, 2}, {4, 1}, {4, 2}};
    std::size_t instances = 20;          // code samples per (group, cell)
    std::size_t classical_attempts = 200;
    std::uint64_t distance_trials = 2000;
    std::uint64_t seed = 1;
};

struct SweepCell {
    std::size_t delta = 0, d_a = 0, d_b = 0;
    std::size_t attempted = 0;  // instances that reached code construction
    std::size_t valid = 0;      // of those, codes with k > 0
    std::optional<std::size_t> max_distance;
    std::optional<nlohmann::json> best;  // provenance and [[n, k, d]] of the best instance
};

/// One cell per (delta, target); groups too small for a delta are skipped.
/// The classical codes are C_A = ker(H_A), C_B = ker(H_B) with d_A, d_B their
/// exhaustive minimum distances. Instance i of a cell draws from a seed derived
/// from (seed, delta, d_A, d_B, group, i), so adding instances never lowers a
/// cell's maximum.
std::vector<SweepCell> distance_sweep(const SweepOptions& options);

nlohmann::json to_json(const SweepCell& c);

}  // namespace qtanner
