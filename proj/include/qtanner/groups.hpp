#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qtanner {

/// Element s^flip r^rot of a dihedral group.
struct DihedralElement {
    bool flip = false;
    std::uint32_t rot = 0;

    friend bool operator==(const DihedralElement&, const DihedralElement&) = default;
};

/// Dihedral group D_n = <r, s | s^2 = r^n = e, srs = r^-1>, order 2n.
///
/// Canonical element ordering (used for every vertex index in the project):
/// r^0 .. r^(n-1), then s, sr, .., sr^(n-1).
class DihedralGroup {
public:
    explicit DihedralGroup(std::uint32_t n);

    std::uint32_t n() const { return n_; }
    std::size_t order() const { return 2 * static_cast<std::size_t>(n_); }

    DihedralElement identity() const { return {}; }
    DihedralElement multiply(DihedralElement x, DihedralElement y) const;
    DihedralElement invert(DihedralElement x) const;
    bool is_involution(DihedralElement x) const;

    std::size_t index(DihedralElement x) const;
    DihedralElement element(std::size_t index) const;
    std::vector<DihedralElement> enumerate() const;

    /// Presentation notation: "e", "r", "r^3", "s", "sr", "sr^5".
    std::string format(DihedralElement x) const;
    DihedralElement parse(const std::string& text) const;

    std::string name() const { return "D" + std::to_string(n_); }

private:
    std::uint32_t n_;
};

/// Ordered symmetric generating subset. The order fixes which classical-code
/// column each generator labels.
struct GeneratorSet {
    std::vector<DihedralElement> elements;

    std::size_t size() const { return elements.size(); }
    bool contains(DihedralElement x) const;
};

/// Throws std::invalid_argument when the set is not symmetric, contains the
/// identity, or repeats an element.
void validate_generator_set(const DihedralGroup& g, const GeneratorSet& set);

GeneratorSet parse_generator_set(const DihedralGroup& g, const std::vector<std::string>& names);
std::vector<std::string> format_generator_set(const DihedralGroup& g, const GeneratorSet& set);

/// Throws std::invalid_argument naming the violated constraint when no
/// symmetric size-delta pair can satisfy total non-conjugacy in this group.
void check_delta_feasible(const DihedralGroup& g, std::size_t delta);

/// Draws involutions singly and non-involutions as {g, g^-1} pairs until the
/// set has delta elements. Elements are kept in canonical group order.
GeneratorSet sample_symmetric_generators(const DihedralGroup& g, std::size_t delta, std::mt19937_64& rng);

struct TncWitness {
    DihedralElement a, b, g;
};

/// Exhaustive check of ag != gb over A x B x G. Returns the first witness in
/// (a, b, g) scan order, or nullopt when the condition holds.
std::optional<TncWitness> check_tnc(const DihedralGroup& g, const GeneratorSet& a, const GeneratorSet& b);

/// Whether A u B generates the whole group.
bool generates_group(const DihedralGroup& g, const GeneratorSet& a, const GeneratorSet& b);

/// Samples (A, B) until TNC holds and A u B generates G, up to max_attempts.
std::pair<GeneratorSet, GeneratorSet> sample_tnc_pair(const DihedralGroup& g, std::size_t delta,
                                                      std::mt19937_64& rng, std::size_t max_attempts = 1000);

}  // namespace qtanner
