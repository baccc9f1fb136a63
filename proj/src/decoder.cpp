#include "qtanner/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qtanner {

namespace {

constexpr double kMinPrior = 1e-15;
constexpr double kMaxLlr = 1e3;

double prior_to_llr(double p) {
    p = std::clamp(p, kMinPrior, 1.0 - kMinPrior);
    return std::clamp(std::log((1.0 - p) / p), -kMaxLlr, kMaxLlr);
}

}  // namespace

std::string to_string(OsdStrategy s) { return s == OsdStrategy::CombinationSweep ? "combination-sweep" : "order-0"; }

OsdStrategy parse_osd_strategy(const std::string& s) {
    if (s == "combination-sweep" || s == "osd_cs" || s == "cs") return OsdStrategy::CombinationSweep;
    if (s == "order-0" || s == "osd0" || s == "0") return OsdStrategy::OrderZero;
    throw std::invalid_argument("unknown OSD strategy '" + s + "' (use combination-sweep or order-0)");
}

void DecoderConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("bp.alpha must lie in (0, 1]");
}

nlohmann::json to_json(const DecoderConfig& c) {
    return {{"bp.alpha", c.alpha},
            {"bp.max_iters", c.max_iters},
            {"osd.order", c.osd_order},
            {"osd.strategy", to_string(c.osd_strategy)}};
}

DecoderConfig decoder_config_from_json(const nlohmann::json& j, DecoderConfig base) {
    auto lookup = [&](const std::string& section, const std::string& key) -> const nlohmann::json* {
        const std::string flat = section + "." + key;
        if (j.contains(flat)) return &j.at(flat);
        if (j.contains(section) && j.at(section).is_object() && j.at(section).contains(key))
            return &j.at(section).at(key);
        return nullptr;
    };
    if (auto v = lookup("bp", "alpha")) base.alpha = v->get<double>();
    if (auto v = lookup("bp", "max_iters")) base.max_iters = v->get<std::size_t>();
    if (auto v = lookup("osd", "order")) base.osd_order = v->get<std::size_t>();
    if (auto v = lookup("osd", "strategy")) base.osd_strategy = parse_osd_strategy(v->get<std::string>());
    base.validate();
    return base;
}

// ------------------------------------------------------------ DecodingGraph

DecodingGraph::DecodingGraph(const BinaryMatrix& h, std::vector<double> priors)
    : rows_(h.rows()), cols_(h.cols()), h_(h), priors_(std::move(priors)) {
    if (priors_.size() != cols_) throw std::invalid_argument("prior count differs from column count");
    llr_.resize(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        if (!(priors_[j] >= 0.0 && priors_[j] <= 0.5 + 1e-12))
            throw std::invalid_argument("priors must lie in [0, 0.5]");
        llr_[j] = prior_to_llr(priors_[j]);
    }
    check_start_.assign(1, 0);
    std::vector<std::size_t> degree(cols_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (auto c : h.row_support(r)) {
            edge_var_.push_back(c);
            ++degree[c];
        }
        check_start_.push_back(edge_var_.size());
    }
    var_start_.assign(cols_ + 1, 0);
    for (std::size_t c = 0; c < cols_; ++c) var_start_[c + 1] = var_start_[c] + degree[c];
    var_edges_.resize(edge_var_.size());
    std::vector<std::size_t> fill(var_start_.begin(), var_start_.end() - 1);
    for (std::size_t e = 0; e < edge_var_.size(); ++e) var_edges_[fill[edge_var_[e]]++] = e;
    const BinaryMatrix ht = h.transpose();
    columns_.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) columns_.push_back(ht.row(c));
}

// ------------------------------------------------------------- BpOsdDecoder

BpOsdDecoder::BpOsdDecoder(std::shared_ptr<const DecodingGraph> graph, DecoderConfig config)
    : graph_(std::move(graph)), config_(config) {
    config_.validate();
    c2v_.resize(graph_->edge_var_.size());
    v2c_.resize(graph_->edge_var_.size());
}

BpOsdDecoder::BpOsdDecoder(const BinaryMatrix& h, const std::vector<double>& priors, DecoderConfig config)
    : BpOsdDecoder(std::make_shared<const DecodingGraph>(h, priors), config) {}

BpResult BpOsdDecoder::bp_decode(const BitVector& syndrome) {
    const DecodingGraph& g = *graph_;
    if (syndrome.size() != g.rows()) throw std::invalid_argument("syndrome length differs from row count");
    const std::size_t n = g.cols(), m = g.rows();
    const std::size_t max_iters = config_.max_iters ? config_.max_iters : n;
    const auto& llr = g.prior_llr();

    BpResult res;
    res.hard_decision = BitVector(n);
    res.soft = llr;
    for (std::size_t j = 0; j < n; ++j)
        if (llr[j] <= 0) res.hard_decision.set(j);

    auto satisfied = [&](const BitVector& e) {
        for (std::size_t r = 0; r < m; ++r) {
            bool parity = syndrome.get(r);
            for (std::size_t k = g.check_start_[r]; k < g.check_start_[r + 1]; ++k) parity ^= e.get(g.edge_var_[k]);
            if (parity) return false;
        }
        return true;
    };
    if (satisfied(res.hard_decision)) {
        res.converged = true;
        return res;
    }

    for (std::size_t e = 0; e < v2c_.size(); ++e) v2c_[e] = llr[g.edge_var_[e]];
    for (std::size_t it = 1; it <= max_iters; ++it) {
        // Check update: sign product times alpha * min of the other magnitudes.
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t b = g.check_start_[r], end = g.check_start_[r + 1];
            bool sign = syndrome.get(r);
            double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
            std::size_t argmin = b;
            for (std::size_t k = b; k < end; ++k) {
                const double v = v2c_[k];
                sign ^= v < 0;
                const double a = std::fabs(v);
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    argmin = k;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (std::size_t k = b; k < end; ++k) {
                const bool s = sign ^ (v2c_[k] < 0);
                const double mag = config_.alpha * (k == argmin ? min2 : min1);
                c2v_[k] = s ? -mag : mag;
            }
        }
        // Variable update and hard decision.
        res.hard_decision.clear();
        for (std::size_t j = 0; j < n; ++j) {
            double total = llr[j];
            for (std::size_t t = g.var_start_[j]; t < g.var_start_[j + 1]; ++t) total += c2v_[g.var_edges_[t]];
            res.soft[j] = total;
            if (total <= 0) res.hard_decision.set(j);
            for (std::size_t t = g.var_start_[j]; t < g.var_start_[j + 1]; ++t) {
                const std::size_t e = g.var_edges_[t];
                v2c_[e] = total - c2v_[e];
            }
        }
        res.iterations = it;
        if (satisfied(res.hard_decision)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

BitVector BpOsdDecoder::osd_postprocess(const std::vector<double>& soft, const BitVector& syndrome) {
    const DecodingGraph& g = *graph_;
    const std::size_t n = g.cols(), m = g.rows();
    if (soft.size() != n) throw std::invalid_argument("soft vector length differs from column count");
    if (syndrome.size() != m) throw std::invalid_argument("syndrome length differs from row count");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return soft[a] < soft[b]; });

    // Echelon basis over selected columns. basis[i] is a reduced column vector
    // with pivot row pivot_row[i]; combo[i] records which selected columns
    // (by selection index) sum to it.
    const std::size_t cap = std::min(m, n);
    std::vector<BitVector> basis, combo;
    std::vector<std::size_t> pivot_row, selected;
    basis.reserve(cap);
    combo.reserve(cap);

    // Reduces v in place; returns the selection-index mask of the combination used.
    auto reduce = [&](BitVector& v) {
        BitVector mask(cap);
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (v.get(pivot_row[i])) {
                v ^= basis[i];
                mask ^= combo[i];
            }
        return mask;
    };

    std::vector<std::size_t> rest;  // non-selected columns in sorted order
    for (std::size_t idx = 0; idx < n; ++idx) {
        const std::size_t col = order[idx];
        if (basis.size() == cap) {
            rest.insert(rest.end(), order.begin() + static_cast<std::ptrdiff_t>(idx), order.end());
            break;
        }
        BitVector v = g.columns_[col];
        BitVector mask = reduce(v);
        const auto supp = v.support();
        if (supp.empty()) {
            rest.push_back(col);
            continue;
        }
        mask.flip(basis.size());
        pivot_row.push_back(supp.front());
        basis.push_back(std::move(v));
        combo.push_back(std::move(mask));
        selected.push_back(col);
    }

    auto solve = [&](const BitVector& target) {
        BitVector v = target;
        BitVector mask = reduce(v);
        if (v.any()) throw std::domain_error("syndrome is outside the column space of H");
        return mask;
    };

    const auto& w = g.prior_llr();
    auto cost_of = [&](const BitVector& mask, std::span<const std::size_t> extra) {
        double c = 0;
        for (auto i : mask.support()) c += w[selected[i]];
        for (auto j : extra) c += w[j];
        return c;
    };

    const BitVector base = solve(syndrome);
    BitVector best_mask = base;
    std::vector<std::size_t> best_extra;

    if (config_.osd_strategy == OsdStrategy::CombinationSweep) {
        const std::size_t lambda = std::min(config_.osd_order, rest.size());
        if (lambda > 0) {
            double best_cost = cost_of(base, {});
            std::vector<BitVector> col_mask(lambda);
            for (std::size_t t = 0; t < lambda; ++t) col_mask[t] = solve(g.columns_[rest[t]]);
            auto consider = [&](BitVector mask, std::vector<std::size_t> extra) {
                const double c = cost_of(mask, extra);
                if (c < best_cost) {
                    best_cost = c;
                    best_mask = std::move(mask);
                    best_extra = std::move(extra);
                }
            };
            for (std::size_t a = 0; a < lambda; ++a) consider(base ^ col_mask[a], {rest[a]});
            for (std::size_t a = 0; a < lambda; ++a)
                for (std::size_t b = a + 1; b < lambda; ++b)
                    consider(base ^ col_mask[a] ^ col_mask[b], {rest[a], rest[b]});
        }
    }

    BitVector e(n);
    for (auto i : best_mask.support()) e.flip(selected[i]);
    for (auto j : best_extra) e.flip(j);
    if (!(g.matrix().multiply(e) == syndrome)) throw std::logic_error("OSD output violates H e = s");
    return e;
}

DecodeResult BpOsdDecoder::decode(const BitVector& syndrome) {
    BpResult bp = bp_decode(syndrome);
    DecodeResult out;
    out.bp_converged = bp.converged;
    out.bp_iterations = bp.iterations;
    if (bp.converged) {
        out.error = std::move(bp.hard_decision);
    } else {
        out.error = osd_postprocess(bp.soft, syndrome);
        out.used_osd = true;
    }
    return out;
}

BpResult bp_decode(const BinaryMatrix& h, const std::vector<double>& priors, const BitVector& syndrome,
                   const DecoderConfig& config) {
    BpOsdDecoder dec(h, priors, config);
    return dec.bp_decode(syndrome);
}

BitVector osd_postprocess(const BinaryMatrix& h, const std::vector<double>& priors, const std::vector<double>& soft,
                          const BitVector& syndrome, const DecoderConfig& config) {
    BpOsdDecoder dec(h, priors, config);
    return dec.osd_postprocess(soft, syndrome);
}

BitVector decode_to_logical(const BinaryMatrix& h, const BinaryMatrix& logical_action,
                            const std::vector<double>& priors, const BitVector& syndrome,
                            const DecoderConfig& config) {
    BpOsdDecoder dec(h, priors, config);
    return logical_action.multiply(dec.decode(syndrome).error);
}

}  // namespace qtanner
