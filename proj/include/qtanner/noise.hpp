#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtanner/gf2.hpp"
#include "qtanner/qcode.hpp"

namespace qtanner {

enum class NoiseKind { CodeCapacity, Phenomenological, Circuit };

/// Z-memory: Z-basis preparation and readout; X errors are tracked against
/// H_Z and the Z logicals. X-memory is the mirror image.
enum class MemoryBasis { Z, X };

/// How gate and idle faults are weighted in the circuit model.
enum class FaultWeighting {
    // Two-qubit depolarizing with rate p: each flip pattern (c, t, both) is
    // hit by 4 of the 15 Paulis, prior 4p/15. Idles: 2/3 of the idle rate.
    Depolarizing,
    // Every flip pattern gets the full rate p; idles get the full idle rate.
    PerComponent,
};

std::string to_string(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& s);
std::string to_string(MemoryBasis b);
std::string to_string(FaultWeighting w);
FaultWeighting parse_fault_weighting(const std::string& s);

struct NoiseModel {
    NoiseKind kind = NoiseKind::Phenomenological;
    double p = 0.0;
    std::size_t rounds = 1;
    double idle_factor = 0.1;
    FaultWeighting weighting = FaultWeighting::Depolarizing;

    /// Throws std::invalid_argument unless 0 <= p < 0.5 and rounds >= 1.
    void validate() const;
};

struct ColumnInfo {
    std::string kind;          // "data", "measurement", "reset", "cx", "idle"
    std::size_t location = 0;  // qubit, check, or gate-specific index
    std::size_t round = 0;     // 1-based round (0 for code capacity)
    std::size_t merged = 1;    // number of fault mechanisms folded into this column
};

/// Decoding problem: detectors x mechanisms, observables x mechanisms, one prior per mechanism.
struct SpaceTimeCheckMatrix {
    BinaryMatrix detectors;
    BinaryMatrix logical_action;
    std::vector<double> priors;
    std::vector<ColumnInfo> columns;
    // Column-major copies used by the sampler.
    std::vector<BitVector> detector_columns;
    std::vector<BitVector> logical_columns;

    std::size_t num_detectors() const { return detectors.rows(); }
    std::size_t num_mechanisms() const { return detectors.cols(); }
    std::size_t num_observables() const { return logical_action.rows(); }

    /// Fills detector_columns/logical_columns from the matrices.
    void index_columns();
};

/// XOR-combined probability of two independent flips.
inline double xor_prior(double a, double b) { return a * (1 - b) + b * (1 - a); }

/// Checks and logicals seen by one memory component.
const BinaryMatrix& component_checks(const CssCode& code, MemoryBasis basis);
const BinaryMatrix& component_logicals(const CssCode& code, MemoryBasis basis);

SpaceTimeCheckMatrix build_code_capacity(const CssCode& code, MemoryBasis basis, double p);

/// Detectors (c, t) for t = 1..N+1 at row (t-1) * m + c; round N+1 is the
/// noiseless readout. Columns: data (q, t) at (t-1) * n + q, then measurement
/// (c, t) at n N + (t-1) * m + c.
SpaceTimeCheckMatrix build_phenomenological(const CssCode& code, MemoryBasis basis, double p, std::size_t rounds);

// ------------------------------------------------------------------ circuits

enum class OpKind { ResetZ, ResetX, CX, MeasureZ, MeasureX, Idle };

struct Op {
    OpKind kind;
    std::uint32_t q0 = 0;  // control for CX
    std::uint32_t q1 = 0;  // target for CX
};

/// One syndrome-extraction round, repeated `rounds` times. Data qubits are
/// 0..n-1; ancilla i is qubit n + i, with Z-check ancillas (rows of H_Z)
/// first, then X-check ancillas (rows of H_X).
struct Circuit {
    std::size_t n_data = 0;
    std::size_t n_z_anc = 0;
    std::size_t n_x_anc = 0;
    std::size_t rounds = 1;
    std::size_t z_cx_layers = 0;
    std::size_t x_cx_layers = 0;
    std::vector<std::vector<Op>> layers;  // reset, Z-check CX layers, X-check CX layers, measure

    std::size_t n_anc() const { return n_z_anc + n_x_anc; }
    std::size_t n_qubits() const { return n_data + n_anc(); }
    std::size_t depth() const { return layers.size(); }

    /// One op per line: "<timestep> <OP> <qubits...>" over all rounds.
    std::string to_text() const;
};

/// Proper edge coloring of the check/qubit incidence graph of each check
/// matrix with exactly max-degree colors (bipartite graphs are class 1).
/// Edges are inserted in (check, qubit) order, so the schedule is deterministic.
Circuit build_circuit(const CssCode& code, std::size_t rounds);

/// Color classes of a bipartite edge coloring of h (row, col) pairs.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> bipartite_edge_coloring(const BinaryMatrix& h);

/// A single flip fault placed right after layer `layer` of round `round` (1-based).
struct FaultLocation {
    std::size_t round = 1;
    std::size_t layer = 0;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;
    bool two_qubit = false;   // flip on both q0 and q1
    std::string kind;         // "reset", "cx", "idle"
    double prior = 0;
};

struct CircuitDem {
    SpaceTimeCheckMatrix stcm;
    std::vector<FaultLocation> faults;
    std::vector<std::ptrdiff_t> fault_column;  // -1 when the fault has no effect
};

/// Detector-error-model extraction by a backward sensitivity pass.
CircuitDem circuit_to_checkmatrix(const Circuit& circuit, const CssCode& code, MemoryBasis basis,
                                  const NoiseModel& noise);

/// Forward Pauli-frame simulation of up to 64 fault sets at once; bit i of
/// each frame word belongs to fault set i. Returns one (detectors, logicals)
/// pair per set.
struct FrameOutcome {
    BitVector detectors;
    BitVector logicals;
};
std::vector<FrameOutcome> simulate_faults(const Circuit& circuit, const CssCode& code, MemoryBasis basis,
                                          const std::vector<std::vector<FaultLocation>>& fault_sets);

/// Compares every fault's column against a fresh forward simulation. Returns
/// the number of mismatching faults.
std::size_t verify_checkmatrix(const Circuit& circuit, const CssCode& code, MemoryBasis basis, const CircuitDem& dem);

SpaceTimeCheckMatrix build_problem(const CssCode& code, MemoryBasis basis, const NoiseModel& noise);

struct SampledShot {
    BitVector detectors;
    BitVector logicals;
    BitVector faults;
};

/// Independent Bernoulli(prior) per column.
SampledShot sample_shot(const SpaceTimeCheckMatrix& stcm, std::mt19937_64& rng);

/// alist for the detector and logical matrices plus a JSON prior sidecar.
void save_checkmatrix(const std::filesystem::path& dir, const SpaceTimeCheckMatrix& stcm);
SpaceTimeCheckMatrix load_checkmatrix(const std::filesystem::path& dir);

}  // namespace qtanner
