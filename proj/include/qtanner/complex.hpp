#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "json.hpp"
#include "qtanner/groups.hpp"

namespace qtanner {

/// A square face {g_0, (ag)_1, (gb)_1, (agb)_0}, stored by its canonical triple:
/// the lexicographically smaller (by canonical element index) of (g, a, b)
/// and (agb, a^-1, b^-1).
struct Face {
    DihedralElement g, a, b;
    std::size_t id = 0;
};

/// Left-right Cayley complex on two copies V0, V1 of a dihedral group.
///
/// Vertex v of either side is identified with group element index v.
/// Local views use the same (a, b) labels on both sides:
///   phi_v(a, b) = {v, av, vb, avb}.
/// With this labeling an A-edge between v0 and v1 shares a full row of both
/// local views and a B-edge a full column, so C0/C1 checks always commute.
class LeftRightCayleyComplex {
public:
    /// Throws std::invalid_argument (with the witness) on TNC failure, when A u B
    /// does not generate G, or when A/B are not symmetric generator sets.
    LeftRightCayleyComplex(DihedralGroup group, GeneratorSet a, GeneratorSet b);

    const DihedralGroup& group() const { return group_; }
    const GeneratorSet& a() const { return a_; }
    const GeneratorSet& b() const { return b_; }
    std::size_t delta_a() const { return a_.size(); }
    std::size_t delta_b() const { return b_.size(); }
    std::size_t vertices_per_side() const { return group_.order(); }

    const std::vector<Face>& faces() const { return faces_; }
    std::size_t face_count() const { return faces_.size(); }

    /// Face id seen at vertex v (side 0 or 1) under generator positions (i, j).
    std::size_t local_face(int side, std::size_t v, std::size_t i, std::size_t j) const {
        return views_[side][(v * delta_a() + i) * delta_b() + j];
    }
    /// Row-major (i, j) list of the delta_a * delta_b faces incident to v.
    std::vector<std::size_t> local_view(int side, std::size_t v) const;

    /// The four vertices of a face as (side, group index) pairs, in the order
    /// g_0, (ag)_1, (gb)_1, (agb)_0.
    std::array<std::pair<int, std::size_t>, 4> face_vertices(std::size_t face_id) const;

private:
    DihedralGroup group_;
    GeneratorSet a_, b_;
    std::vector<Face> faces_;
    std::array<std::vector<std::size_t>, 2> views_;
};

struct GraphSpectrum {
    std::vector<double> eigenvalues;  // descending
    double lambda1 = 0;
    double lambda2 = 0;           // second-largest eigenvalue (signed, with multiplicity)
    double nontrivial_abs = 0;    // max |lambda| over eigenvalues with |lambda| below the degree
    double degree = 0;
    bool ramanujan = false;       // nontrivial_abs <= 2 sqrt(degree - 1)
};

struct SpectralReport {
    GraphSpectrum left;      // Cay(G, A), edges g ~ ag
    GraphSpectrum right;     // Cay(G, B), edges g ~ gb
    GraphSpectrum combined;  // X(G, A, B), adjacency A_A + A_B
    GraphSpectrum lrcc;      // bipartite double cover of X
    double bound = 0;                 // delta + min(lambda2 left, lambda2 right)
    double symmetry_deviation = 0;    // max |e_i + e_(2n-1-i)| over the LRCC spectrum
    double double_cover_deviation = 0;  // max deviation of spec(LRCC) from +-spec(combined)
    bool bound_holds = false;
};

/// Eigenvalues (descending) of a dense symmetric n x n row-major matrix by
/// cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<double> matrix, std::size_t n, double tol = 1e-12);

/// Adjacency matrices, row-major. left: g ~ ag; right: g ~ gb.
std::vector<double> left_cayley_adjacency(const LeftRightCayleyComplex& c);
std::vector<double> right_cayley_adjacency(const LeftRightCayleyComplex& c);
std::vector<double> lrcc_adjacency(const LeftRightCayleyComplex& c);

SpectralReport spectral_report(const LeftRightCayleyComplex& c, double tol = 1e-9);

nlohmann::json complex_summary(const LeftRightCayleyComplex& c, const SpectralReport* spectra = nullptr);

}  // namespace qtanner
