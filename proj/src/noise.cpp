#include "qtanner/noise.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "qtanner/matrix_io.hpp"
#include "qtanner/rng.hpp"

namespace qtanner {

std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::CodeCapacity: return "capacity";
        case NoiseKind::Phenomenological: return "phenom";
        case NoiseKind::Circuit: return "circuit";
    }
    return "?";
}

NoiseKind parse_noise_kind(const std::string& s) {
    if (s == "capacity" || s == "code-capacity") return NoiseKind::CodeCapacity;
    if (s == "phenom" || s == "phenomenological") return NoiseKind::Phenomenological;
    if (s == "circuit" || s == "circuit-level") return NoiseKind::Circuit;
    throw std::invalid_argument("unknown noise model '" + s + "' (use capacity, phenom or circuit)");
}

std::string to_string(MemoryBasis b) { return b == MemoryBasis::Z ? "Z" : "X"; }

std::string to_string(FaultWeighting w) { return w == FaultWeighting::Depolarizing ? "depolarizing" : "per-component"; }

FaultWeighting parse_fault_weighting(const std::string& s) {
    if (s == "depolarizing") return FaultWeighting::Depolarizing;
    if (s == "per-component") return FaultWeighting::PerComponent;
    throw std::invalid_argument("unknown fault weighting '" + s + "' (use depolarizing or per-component)");
}

void NoiseModel::validate() const {
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("physical error rate must satisfy 0 <= p < 0.5");
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (!(idle_factor >= 0.0)) throw std::invalid_argument("idle factor must be non-negative");
}

void SpaceTimeCheckMatrix::index_columns() {
    const BinaryMatrix dt = detectors.transpose();
    const BinaryMatrix lt = logical_action.transpose();
    detector_columns.clear();
    logical_columns.clear();
    for (std::size_t c = 0; c < detectors.cols(); ++c) {
        detector_columns.push_back(dt.row(c));
        logical_columns.push_back(lt.row(c));
    }
}

const BinaryMatrix& component_checks(const CssCode& code, MemoryBasis basis) {
    return basis == MemoryBasis::Z ? code.hz() : code.hx();
}

const BinaryMatrix& component_logicals(const CssCode& code, MemoryBasis basis) {
    return basis == MemoryBasis::Z ? code.logical_z() : code.logical_x();
}

SpaceTimeCheckMatrix build_code_capacity(const CssCode& code, MemoryBasis basis, double p) {
    SpaceTimeCheckMatrix s;
    s.detectors = component_checks(code, basis);
    s.logical_action = component_logicals(code, basis);
    s.priors.assign(code.n(), p);
    for (std::size_t q = 0; q < code.n(); ++q) s.columns.push_back({"data", q, 0, 1});
    s.index_columns();
    return s;
}

SpaceTimeCheckMatrix build_phenomenological(const CssCode& code, MemoryBasis basis, double p, std::size_t rounds) {
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    const BinaryMatrix& h = component_checks(code, basis);
    const BinaryMatrix& l = component_logicals(code, basis);
    const std::size_t n = code.n(), m = h.rows(), N = rounds;
    SpaceTimeCheckMatrix s;
    s.detectors = BinaryMatrix(m * (N + 1), n * N + m * N);
    s.logical_action = BinaryMatrix(l.rows(), n * N + m * N);
    const BinaryMatrix ht = h.transpose();
    const BinaryMatrix lt = l.transpose();
    for (std::size_t t = 0; t < N; ++t)
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t col = t * n + q;
            for (auto c : ht.row_support(q)) s.detectors.set(t * m + c, col);
            for (auto o : lt.row_support(q)) s.logical_action.set(o, col);
            s.columns.push_back({"data", q, t + 1, 1});
        }
    for (std::size_t t = 0; t < N; ++t)
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t col = n * N + t * m + c;
            s.detectors.set(t * m + c, col);
            s.detectors.set((t + 1) * m + c, col);
            s.columns.push_back({"measurement", c, t + 1, 1});
        }
    s.priors.assign(n * N + m * N, p);
    s.index_columns();
    return s;
}

// ------------------------------------------------------------------ circuits

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> bipartite_edge_coloring(const BinaryMatrix& h) {
    const std::size_t rows = h.rows(), cols = h.cols();
    std::size_t degree = 0;
    std::vector<std::size_t> col_deg(cols, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        degree = std::max(degree, h.row_weight(r));
        for (auto c : h.row_support(r)) degree = std::max(degree, ++col_deg[c]);
    }
    constexpr std::size_t kNone = SIZE_MAX;
    // at_row[r][k] = column joined to row r by color k; at_col likewise.
    std::vector<std::vector<std::size_t>> at_row(rows, std::vector<std::size_t>(degree, kNone));
    std::vector<std::vector<std::size_t>> at_col(cols, std::vector<std::size_t>(degree, kNone));
    auto free_color = [&](const std::vector<std::size_t>& slots) {
        return static_cast<std::size_t>(std::find(slots.begin(), slots.end(), kNone) - slots.begin());
    };
    for (std::size_t r = 0; r < rows; ++r)
        for (auto c : h.row_support(r)) {
            const std::size_t a = free_color(at_row[r]);
            const std::size_t b = free_color(at_col[c]);
            if (at_col[c][a] != kNone) {
                // Swap colors a and b along the alternating path starting at column c.
                std::vector<std::pair<std::size_t, std::size_t>> path;  // (row, col) edges
                std::size_t color = a;
                bool from_col = true;
                std::size_t node = c;
                while (true) {
                    if (from_col) {
                        const std::size_t rr = at_col[node][color];
                        if (rr == kNone) break;
                        path.emplace_back(rr, node);
                        node = rr;
                    } else {
                        const std::size_t cc = at_row[node][color];
                        if (cc == kNone) break;
                        path.emplace_back(node, cc);
                        node = cc;
                    }
                    from_col = !from_col;
                    color = color == a ? b : a;
                }
                // Edge i on the path currently has color a when i is even.
                for (std::size_t i = 0; i < path.size(); ++i) {
                    const auto [pr, pc] = path[i];
                    const std::size_t old = i % 2 == 0 ? a : b;
                    if (at_row[pr][old] == pc) at_row[pr][old] = kNone;
                    if (at_col[pc][old] == pr) at_col[pc][old] = kNone;
                }
                for (std::size_t i = 0; i < path.size(); ++i) {
                    const auto [pr, pc] = path[i];
                    const std::size_t nw = i % 2 == 0 ? b : a;
                    at_row[pr][nw] = pc;
                    at_col[pc][nw] = pr;
                }
            }
            at_row[r][a] = c;
            at_col[c][a] = r;
        }
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> classes(degree);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < degree; ++k)
            if (at_row[r][k] != kNone) classes[k].emplace_back(r, at_row[r][k]);
    return classes;
}

Circuit build_circuit(const CssCode& code, std::size_t rounds) {
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    Circuit c;
    c.n_data = code.n();
    c.n_z_anc = code.hz().rows();
    c.n_x_anc = code.hx().rows();
    c.rounds = rounds;
    const auto zanc = [&](std::size_t row) { return static_cast<std::uint32_t>(c.n_data + row); };
    const auto xanc = [&](std::size_t row) { return static_cast<std::uint32_t>(c.n_data + c.n_z_anc + row); };

    std::vector<Op> reset;
    for (std::size_t i = 0; i < c.n_z_anc; ++i) reset.push_back({OpKind::ResetZ, zanc(i), 0});
    for (std::size_t i = 0; i < c.n_x_anc; ++i) reset.push_back({OpKind::ResetX, xanc(i), 0});
    c.layers.push_back(reset);

    const auto z_classes = bipartite_edge_coloring(code.hz());
    for (const auto& cls : z_classes) {
        std::vector<Op> layer;
        for (auto [row, q] : cls) layer.push_back({OpKind::CX, static_cast<std::uint32_t>(q), zanc(row)});
        c.layers.push_back(layer);
    }
    const auto x_classes = bipartite_edge_coloring(code.hx());
    for (const auto& cls : x_classes) {
        std::vector<Op> layer;
        for (auto [row, q] : cls) layer.push_back({OpKind::CX, xanc(row), static_cast<std::uint32_t>(q)});
        c.layers.push_back(layer);
    }
    c.z_cx_layers = z_classes.size();
    c.x_cx_layers = x_classes.size();

    std::vector<Op> measure;
    for (std::size_t i = 0; i < c.n_z_anc; ++i) measure.push_back({OpKind::MeasureZ, zanc(i), 0});
    for (std::size_t i = 0; i < c.n_x_anc; ++i) measure.push_back({OpKind::MeasureX, xanc(i), 0});
    c.layers.push_back(measure);

    // Idle markers for every qubit untouched in a layer.
    for (auto& layer : c.layers) {
        std::vector<bool> busy(c.n_qubits(), false);
        for (const auto& op : layer) {
            busy[op.q0] = true;
            if (op.kind == OpKind::CX) busy[op.q1] = true;
        }
        for (std::size_t q = 0; q < c.n_qubits(); ++q)
            if (!busy[q]) layer.push_back({OpKind::Idle, static_cast<std::uint32_t>(q), 0});
    }
    return c;
}

std::string Circuit::to_text() const {
    static const char* names[] = {"RZ", "RX", "CX", "MZ", "MX", "I"};
    std::ostringstream out;
    out << "# data " << n_data << " z_anc " << n_z_anc << " x_anc " << n_x_anc << " rounds " << rounds << '\n';
    std::size_t t = 0;
    for (std::size_t r = 0; r < rounds; ++r)
        for (const auto& layer : layers) {
            for (const auto& op : layer) {
                out << t << ' ' << names[static_cast<int>(op.kind)] << ' ' << op.q0;
                if (op.kind == OpKind::CX) out << ' ' << op.q1;
                out << '\n';
            }
            ++t;
        }
    return out.str();
}

namespace {

/// Whether an op measures / resets an ancilla whose outcome this component uses.
bool is_component_measure(OpKind k, MemoryBasis b) {
    return (b == MemoryBasis::Z && k == OpKind::MeasureZ) || (b == MemoryBasis::X && k == OpKind::MeasureX);
}

bool is_component_reset(OpKind k, MemoryBasis b) {
    return (b == MemoryBasis::Z && k == OpKind::ResetZ) || (b == MemoryBasis::X && k == OpKind::ResetX);
}

/// Faults in forward order together with the (round, layer) ranges they occupy.
std::vector<FaultLocation> enumerate_faults(const Circuit& c, MemoryBasis basis, const NoiseModel& noise,
                                            std::vector<std::size_t>& slot_start) {
    std::vector<FaultLocation> faults;
    const double p = noise.p;
    const bool depol = noise.weighting == FaultWeighting::Depolarizing;
    const double p2 = depol ? 4.0 * p / 15.0 : p;
    const double pidle = depol ? 2.0 * p * noise.idle_factor / 3.0 : p * noise.idle_factor;
    slot_start.clear();
    for (std::size_t r = 1; r <= c.rounds; ++r)
        for (std::size_t L = 0; L < c.layers.size(); ++L) {
            slot_start.push_back(faults.size());
            for (const auto& op : c.layers[L]) {
                switch (op.kind) {
                    case OpKind::ResetZ:
                    case OpKind::ResetX:
                        if (is_component_reset(op.kind, basis)) faults.push_back({r, L, op.q0, 0, false, "reset", p});
                        break;
                    case OpKind::CX:
                        faults.push_back({r, L, op.q0, 0, false, "cx", p2});
                        faults.push_back({r, L, op.q1, 0, false, "cx", p2});
                        faults.push_back({r, L, op.q0, op.q1, true, "cx", p2});
                        break;
                    case OpKind::Idle: faults.push_back({r, L, op.q0, 0, false, "idle", pidle}); break;
                    default: break;
                }
            }
        }
    slot_start.push_back(faults.size());
    return faults;
}

struct WordsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& w) const {
        std::uint64_t h = 0x12345678;
        for (auto x : w) h = mix_seed(h ^ x);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

CircuitDem circuit_to_checkmatrix(const Circuit& circuit, const CssCode& code, MemoryBasis basis,
                                  const NoiseModel& noise) {
    noise.validate();
    if (circuit.rounds != noise.rounds) throw std::invalid_argument("circuit rounds differ from noise rounds");
    const BinaryMatrix& h = component_checks(code, basis);
    const BinaryMatrix& l = component_logicals(code, basis);
    const std::size_t m = h.rows(), N = circuit.rounds, k = l.rows();
    const std::size_t n_det = m * (N + 1);
    const std::size_t width = n_det + k;
    const std::size_t anc0 = circuit.n_data + (basis == MemoryBasis::Z ? 0 : circuit.n_z_anc);
    const bool x_frame = basis == MemoryBasis::Z;

    CircuitDem dem;
    std::vector<std::size_t> slot_start;
    dem.faults = enumerate_faults(circuit, basis, noise, slot_start);
    std::vector<BitVector> signature(dem.faults.size());

    // Sensitivity of a flip on each qubit at the current time point.
    std::vector<BitVector> sens(circuit.n_qubits(), BitVector(width));
    const BinaryMatrix ht = h.transpose();
    const BinaryMatrix lt = l.transpose();
    for (std::size_t q = 0; q < circuit.n_data; ++q) {
        for (auto c : ht.row_support(q)) sens[q].set(N * m + c);
        for (auto o : lt.row_support(q)) sens[q].set(n_det + o);
    }

    const std::size_t nl = circuit.layers.size();
    for (std::size_t r = N; r >= 1; --r)
        for (std::size_t L = nl; L-- > 0;) {
            const std::size_t slot = (r - 1) * nl + L;
            for (std::size_t f = slot_start[slot]; f < slot_start[slot + 1]; ++f) {
                const auto& fl = dem.faults[f];
                signature[f] = sens[fl.q0];
                if (fl.two_qubit) signature[f] ^= sens[fl.q1];
            }
            for (const auto& op : circuit.layers[L]) {
                switch (op.kind) {
                    case OpKind::ResetZ:
                    case OpKind::ResetX: sens[op.q0].clear(); break;
                    case OpKind::MeasureZ:
                    case OpKind::MeasureX:
                        sens[op.q0].clear();
                        if (is_component_measure(op.kind, basis)) {
                            const std::size_t c = op.q0 - anc0;
                            sens[op.q0].set((r - 1) * m + c);
                            sens[op.q0].set(r * m + c);
                        }
                        break;
                    case OpKind::CX:
                        if (x_frame)
                            sens[op.q0] ^= sens[op.q1];
                        else
                            sens[op.q1] ^= sens[op.q0];
                        break;
                    case OpKind::Idle: break;
                }
            }
        }

    // Merge identical signatures (first occurrence fixes the column order).
    std::unordered_map<std::vector<std::uint64_t>, std::size_t, WordsHash> index;
    std::vector<std::size_t> rep;
    auto& s = dem.stcm;
    dem.fault_column.assign(dem.faults.size(), -1);
    for (std::size_t f = 0; f < dem.faults.size(); ++f) {
        if (!signature[f].any()) continue;
        std::vector<std::uint64_t> key(signature[f].words().begin(), signature[f].words().end());
        auto [it, inserted] = index.emplace(std::move(key), rep.size());
        if (inserted) {
            rep.push_back(f);
            s.priors.push_back(dem.faults[f].prior);
            s.columns.push_back({dem.faults[f].kind, dem.faults[f].q0, dem.faults[f].round, 1});
        } else {
            s.priors[it->second] = xor_prior(s.priors[it->second], dem.faults[f].prior);
            ++s.columns[it->second].merged;
        }
        dem.fault_column[f] = static_cast<std::ptrdiff_t>(it->second);
    }
    s.detectors = BinaryMatrix(n_det, rep.size());
    s.logical_action = BinaryMatrix(k, rep.size());
    for (std::size_t c = 0; c < rep.size(); ++c)
        for (auto bit : signature[rep[c]].support()) {
            if (bit < n_det)
                s.detectors.set(bit, c);
            else
                s.logical_action.set(bit - n_det, c);
        }
    s.index_columns();
    return dem;
}

std::vector<FrameOutcome> simulate_faults(const Circuit& circuit, const CssCode& code, MemoryBasis basis,
                                          const std::vector<std::vector<FaultLocation>>& fault_sets) {
    if (fault_sets.size() > 64) throw std::invalid_argument("at most 64 fault sets per batch");
    const BinaryMatrix& h = component_checks(code, basis);
    const BinaryMatrix& l = component_logicals(code, basis);
    const std::size_t m = h.rows(), N = circuit.rounds, nl = circuit.layers.size();
    const std::size_t anc0 = circuit.n_data + (basis == MemoryBasis::Z ? 0 : circuit.n_z_anc);
    const bool x_frame = basis == MemoryBasis::Z;

    // Injection schedule per (round, layer) slot.
    std::map<std::size_t, std::vector<std::pair<std::uint32_t, std::uint64_t>>> inject;
    for (std::size_t i = 0; i < fault_sets.size(); ++i)
        for (const auto& f : fault_sets[i]) {
            if (f.round < 1 || f.round > N || f.layer >= nl) throw std::out_of_range("fault outside the circuit");
            auto& v = inject[(f.round - 1) * nl + f.layer];
            v.emplace_back(f.q0, std::uint64_t{1} << i);
            if (f.two_qubit) v.emplace_back(f.q1, std::uint64_t{1} << i);
        }

    std::vector<std::uint64_t> frame(circuit.n_qubits(), 0);
    std::vector<std::uint64_t> meas(m * N, 0);
    for (std::size_t r = 1; r <= N; ++r)
        for (std::size_t L = 0; L < nl; ++L) {
            for (const auto& op : circuit.layers[L]) {
                switch (op.kind) {
                    case OpKind::ResetZ:
                    case OpKind::ResetX: frame[op.q0] = 0; break;
                    case OpKind::MeasureZ:
                    case OpKind::MeasureX:
                        if (is_component_measure(op.kind, basis)) meas[(r - 1) * m + (op.q0 - anc0)] = frame[op.q0];
                        break;
                    case OpKind::CX:
                        if (x_frame)
                            frame[op.q1] ^= frame[op.q0];
                        else
                            frame[op.q0] ^= frame[op.q1];
                        break;
                    case OpKind::Idle: break;
                }
            }
            if (auto it = inject.find((r - 1) * nl + L); it != inject.end())
                for (auto [q, mask] : it->second) frame[q] ^= mask;
        }

    std::vector<std::uint64_t> det(m * (N + 1), 0), obs(l.rows(), 0);
    for (std::size_t c = 0; c < m; ++c) {
        std::uint64_t final_syn = 0;
        for (auto q : h.row_support(c)) final_syn ^= frame[q];
        det[c] = meas[c];
        for (std::size_t r = 2; r <= N; ++r) det[(r - 1) * m + c] = meas[(r - 1) * m + c] ^ meas[(r - 2) * m + c];
        det[N * m + c] = final_syn ^ meas[(N - 1) * m + c];
    }
    for (std::size_t o = 0; o < l.rows(); ++o)
        for (auto q : l.row_support(o)) obs[o] ^= frame[q];

    std::vector<FrameOutcome> out(fault_sets.size());
    for (std::size_t i = 0; i < fault_sets.size(); ++i) {
        out[i].detectors = BitVector(det.size());
        out[i].logicals = BitVector(obs.size());
        for (std::size_t d = 0; d < det.size(); ++d)
            if ((det[d] >> i) & 1U) out[i].detectors.set(d);
        for (std::size_t o = 0; o < obs.size(); ++o)
            if ((obs[o] >> i) & 1U) out[i].logicals.set(o);
    }
    return out;
}

std::size_t verify_checkmatrix(const Circuit& circuit, const CssCode& code, MemoryBasis basis, const CircuitDem& dem) {
    const auto& s = dem.stcm;
    std::size_t mismatches = 0;
    for (std::size_t start = 0; start < dem.faults.size(); start += 64) {
        const std::size_t end = std::min(dem.faults.size(), start + 64);
        std::vector<std::vector<FaultLocation>> sets;
        for (std::size_t f = start; f < end; ++f) sets.push_back({dem.faults[f]});
        const auto outcomes = simulate_faults(circuit, code, basis, sets);
        for (std::size_t f = start; f < end; ++f) {
            const auto& o = outcomes[f - start];
            const auto col = dem.fault_column[f];
            if (col < 0) {
                if (o.detectors.any() || o.logicals.any()) ++mismatches;
                continue;
            }
            const auto c = static_cast<std::size_t>(col);
            if (!(o.detectors == s.detector_columns[c]) || !(o.logicals == s.logical_columns[c])) ++mismatches;
        }
    }
    return mismatches;
}

SpaceTimeCheckMatrix build_problem(const CssCode& code, MemoryBasis basis, const NoiseModel& noise) {
    noise.validate();
    switch (noise.kind) {
        case NoiseKind::CodeCapacity: return build_code_capacity(code, basis, noise.p);
        case NoiseKind::Phenomenological: return build_phenomenological(code, basis, noise.p, noise.rounds);
        case NoiseKind::Circuit: {
            const Circuit c = build_circuit(code, noise.rounds);
            return circuit_to_checkmatrix(c, code, basis, noise).stcm;
        }
    }
    throw std::logic_error("unhandled noise kind");
}

SampledShot sample_shot(const SpaceTimeCheckMatrix& stcm, std::mt19937_64& rng) {
    SampledShot shot{BitVector(stcm.num_detectors()), BitVector(stcm.num_observables()),
                     BitVector(stcm.num_mechanisms())};
    for (std::size_t c = 0; c < stcm.num_mechanisms(); ++c) {
        const double p = stcm.priors[c];
        if (p <= 0) continue;
        if (uniform_unit(rng) < p) {
            shot.faults.set(c);
            shot.detectors ^= stcm.detector_columns[c];
            shot.logicals ^= stcm.logical_columns[c];
        }
    }
    return shot;
}

void save_checkmatrix(const std::filesystem::path& dir, const SpaceTimeCheckMatrix& stcm) {
    std::filesystem::create_directories(dir);
    io::save_alist(dir / "detectors.alist", stcm.detectors);
    io::save_alist(dir / "logicals.alist", stcm.logical_action);
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : stcm.columns)
        cols.push_back({{"kind", c.kind}, {"location", c.location}, {"round", c.round}, {"merged", c.merged}});
    nlohmann::json j{{"priors", stcm.priors}, {"columns", cols}};
    std::ofstream out(dir / "priors.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "priors.json").string());
    out << j.dump(1) << '\n';
}

SpaceTimeCheckMatrix load_checkmatrix(const std::filesystem::path& dir) {
    SpaceTimeCheckMatrix s;
    s.detectors = io::load_alist(dir / "detectors.alist");
    s.logical_action = io::load_alist(dir / "logicals.alist");
    std::ifstream in(dir / "priors.json");
    if (!in) throw std::runtime_error("cannot read " + (dir / "priors.json").string());
    const auto j = nlohmann::json::parse(in);
    s.priors = j.at("priors").get<std::vector<double>>();
    if (s.priors.size() != s.detectors.cols()) throw std::runtime_error("prior count differs from column count");
    if (j.contains("columns"))
        for (const auto& c : j.at("columns"))
            s.columns.push_back({c.at("kind").get<std::string>(), c.at("location").get<std::size_t>(),
                                 c.at("round").get<std::size_t>(), c.at("merged").get<std::size_t>()});
    s.index_columns();
    return s;
}

}  // namespace qtanner
