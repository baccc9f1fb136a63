#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtanner/gf2.hpp"

namespace qtanner {

enum class OsdStrategy { CombinationSweep, OrderZero };

std::string to_string(OsdStrategy s);
OsdStrategy parse_osd_strategy(const std::string& s);

struct DecoderConfig {
    double alpha = 0.625;        // min-sum scaling of check-to-variable magnitudes
    std::size_t max_iters = 0;   // 0: number of columns
    std::size_t osd_order = 9;   // lambda, clamped to columns - rank
    OsdStrategy osd_strategy = OsdStrategy::CombinationSweep;

    /// Throws std::invalid_argument on alpha outside (0, 1].
    void validate() const;
};

nlohmann::json to_json(const DecoderConfig& c);
/// Reads the keys bp.alpha, bp.max_iters, osd.order, osd.strategy (flat or nested).
DecoderConfig decoder_config_from_json(const nlohmann::json& j, DecoderConfig base = {});

/// Immutable sparse view of a check matrix plus per-column priors, shared by
/// any number of decoder instances.
class DecodingGraph {
public:
    DecodingGraph(const BinaryMatrix& h, std::vector<double> priors);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const BinaryMatrix& matrix() const { return h_; }
    const std::vector<double>& priors() const { return priors_; }
    const std::vector<double>& prior_llr() const { return llr_; }

    // Edge e joins check edge_check_[e] and variable edge_var_[e]; edges are
    // grouped by check (check_start_) and listed per variable (var_edges_).
    std::vector<std::size_t> check_start_;
    std::vector<std::size_t> edge_var_;
    std::vector<std::size_t> var_start_;
    std::vector<std::size_t> var_edges_;
    std::vector<BitVector> columns_;  // column j of H as a length-rows vector

private:
    std::size_t rows_, cols_;
    BinaryMatrix h_;
    std::vector<double> priors_;
    std::vector<double> llr_;
};

struct BpResult {
    BitVector hard_decision;
    std::vector<double> soft;  // posterior log-likelihood ratios, log(P(0)/P(1))
    bool converged = false;
    std::size_t iterations = 0;
};

struct DecodeResult {
    BitVector error;
    bool bp_converged = false;
    std::size_t bp_iterations = 0;
    bool used_osd = false;
};

/// Owns the message buffers; use one instance per thread.
class BpOsdDecoder {
public:
    BpOsdDecoder(std::shared_ptr<const DecodingGraph> graph, DecoderConfig config = {});
    BpOsdDecoder(const BinaryMatrix& h, const std::vector<double>& priors, DecoderConfig config = {});

    /// Parallel-flooding min-sum. Stops as soon as H e = s (checked before the
    /// first iteration too) or after max_iters iterations.
    BpResult bp_decode(const BitVector& syndrome);

    /// Columns sorted by ascending soft value (most likely flipped first, ties
    /// by column index); the first rank(H) independent ones form the
    /// information set. Order-0 sets the rest to zero; the combination sweep
    /// also tries every weight-1 and weight-2 pattern on the first lambda
    /// non-information columns and keeps the lowest prior-weighted cost.
    /// Output always satisfies H e = s; throws std::domain_error otherwise.
    BitVector osd_postprocess(const std::vector<double>& soft, const BitVector& syndrome);

    DecodeResult decode(const BitVector& syndrome);

    const DecodingGraph& graph() const { return *graph_; }
    const DecoderConfig& config() const { return config_; }

private:
    std::shared_ptr<const DecodingGraph> graph_;
    DecoderConfig config_;
    std::vector<double> c2v_, v2c_;
};

BpResult bp_decode(const BinaryMatrix& h, const std::vector<double>& priors, const BitVector& syndrome,
                   const DecoderConfig& config = {});
BitVector osd_postprocess(const BinaryMatrix& h, const std::vector<double>& priors, const std::vector<double>& soft,
                          const BitVector& syndrome, const DecoderConfig& config = {});
/// BP, then OSD when BP does not converge; returns logical_action * e.
BitVector decode_to_logical(const BinaryMatrix& h, const BinaryMatrix& logical_action,
                            const std::vector<double>& priors, const BitVector& syndrome,
                            const DecoderConfig& config = {});

}  // namespace qtanner
