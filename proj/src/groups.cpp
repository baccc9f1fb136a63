#include "qtanner/groups.hpp"

#include <algorithm>
#include <stdexcept>

#include "qtanner/rng.hpp"

namespace qtanner {

DihedralGroup::DihedralGroup(std::uint32_t n) : n_(n) {
    if (n < 1) throw std::invalid_argument("dihedral group needs n >= 1");
}

DihedralElement DihedralGroup::multiply(DihedralElement x, DihedralElement y) const {
    // (s^f1 r^k1)(s^f2 r^k2) = s^(f1+f2) r^((-1)^f2 k1 + k2)
    const std::uint32_t k1 = y.flip ? (n_ - x.rot) % n_ : x.rot;
    return {static_cast<bool>(x.flip ^ y.flip), (k1 + y.rot) % n_};
}

DihedralElement DihedralGroup::invert(DihedralElement x) const {
    if (x.flip) return x;
    return {false, (n_ - x.rot) % n_};
}

bool DihedralGroup::is_involution(DihedralElement x) const {
    return x != identity() && multiply(x, x) == identity();
}

std::size_t DihedralGroup::index(DihedralElement x) const {
    return (x.flip ? n_ : 0) + x.rot;
}

DihedralElement DihedralGroup::element(std::size_t index) const {
    if (index >= order()) throw std::out_of_range("group element index out of range");
    return {index >= n_, static_cast<std::uint32_t>(index % n_)};
}

std::vector<DihedralElement> DihedralGroup::enumerate() const {
    std::vector<DihedralElement> out;
    out.reserve(order());
    for (std::size_t i = 0; i < order(); ++i) out.push_back(element(i));
    return out;
}

std::string DihedralGroup::format(DihedralElement x) const {
    std::string out = x.flip ? "s" : "";
    if (x.rot == 1)
        out += "r";
    else if (x.rot > 1)
        out += "r^" + std::to_string(x.rot);
    return out.empty() ? "e" : out;
}

DihedralElement DihedralGroup::parse(const std::string& text) const {
    std::string t;
    for (char c : text)
        if (c != ' ' && c != '*') t += c;
    if (t == "e" || t == "1") return identity();
    DihedralElement x;
    std::size_t pos = 0;
    if (pos < t.size() && t[pos] == 's') {
        x.flip = true;
        ++pos;
    }
    if (pos == t.size()) {
        if (!x.flip) throw std::invalid_argument("empty group element");
        return x;
    }
    if (t[pos] != 'r') throw std::invalid_argument("cannot parse group element '" + text + "'");
    ++pos;
    long exponent = 1;
    if (pos < t.size()) {
        if (t[pos] != '^' || pos + 1 == t.size()) throw std::invalid_argument("cannot parse group element '" + text + "'");
        const std::string digits = t.substr(pos + 1);
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw std::invalid_argument("cannot parse group element '" + text + "'");
        exponent = std::stol(digits);
    }
    x.rot = static_cast<std::uint32_t>(exponent % static_cast<long>(n_));
    return x;
}

bool GeneratorSet::contains(DihedralElement x) const {
    return std::find(elements.begin(), elements.end(), x) != elements.end();
}

void validate_generator_set(const DihedralGroup& g, const GeneratorSet& set) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto x = set.elements[i];
        if (x.rot >= g.n()) throw std::invalid_argument("generator outside the group");
        if (x == g.identity()) throw std::invalid_argument("generator set contains the identity");
        if (!set.contains(g.invert(x)))
            throw std::invalid_argument("generator set is not symmetric: missing inverse of " + g.format(x));
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (set.elements[j] == x) throw std::invalid_argument("generator set repeats " + g.format(x));
    }
}

GeneratorSet parse_generator_set(const DihedralGroup& g, const std::vector<std::string>& names) {
    GeneratorSet set;
    for (const auto& s : names) set.elements.push_back(g.parse(s));
    validate_generator_set(g, set);
    return set;
}

std::vector<std::string> format_generator_set(const DihedralGroup& g, const GeneratorSet& set) {
    std::vector<std::string> out;
    for (auto x : set.elements) out.push_back(g.format(x));
    return out;
}

void check_delta_feasible(const DihedralGroup& g, std::size_t delta) {
    if (delta == 0) throw std::invalid_argument("delta must be positive");
    if (2 * delta >= g.order())
        throw std::invalid_argument("delta = " + std::to_string(delta) + " violates delta < |G|/2 = " +
                                    std::to_string(g.order() / 2) +
                                    " (A and B would intersect or contain the identity)");
    if (g.n() % 2 == 1 && delta % 2 == 1)
        throw std::invalid_argument("odd delta in " + g.name() +
                                    " with n odd: every odd symmetric set contains a reflection and all "
                                    "reflections are conjugate, so total non-conjugacy fails");
}

GeneratorSet sample_symmetric_generators(const DihedralGroup& g, std::size_t delta, std::mt19937_64& rng) {
    check_delta_feasible(g, delta);
    // Units: involutions alone, other elements with their inverse.
    std::vector<std::vector<DihedralElement>> units;
    for (auto x : g.enumerate()) {
        if (x == g.identity()) continue;
        const auto inv = g.invert(x);
        if (inv == x)
            units.push_back({x});
        else if (g.index(x) < g.index(inv))
            units.push_back({x, inv});
    }
    for (int attempt = 0; attempt < 256; ++attempt) {
        shuffle(units, rng);
        std::vector<DihedralElement> chosen;
        for (const auto& u : units) {
            if (chosen.size() + u.size() > delta) continue;
            chosen.insert(chosen.end(), u.begin(), u.end());
            if (chosen.size() == delta) break;
        }
        if (chosen.size() != delta) continue;
        std::sort(chosen.begin(), chosen.end(),
                  [&](auto x, auto y) { return g.index(x) < g.index(y); });
        GeneratorSet set{chosen};
        validate_generator_set(g, set);
        return set;
    }
    throw std::runtime_error("could not assemble a symmetric generator set of size " + std::to_string(delta));
}

std::optional<TncWitness> check_tnc(const DihedralGroup& g, const GeneratorSet& a, const GeneratorSet& b) {
    const auto elements = g.enumerate();
    for (auto x : a.elements)
        for (auto y : b.elements)
            for (auto h : elements)
                if (g.multiply(x, h) == g.multiply(h, y)) return TncWitness{x, y, h};
    return std::nullopt;
}

bool generates_group(const DihedralGroup& g, const GeneratorSet& a, const GeneratorSet& b) {
    std::vector<bool> seen(g.order(), false);
    std::vector<DihedralElement> frontier{g.identity()};
    seen[0] = true;
    std::size_t count = 1;
    while (!frontier.empty()) {
        const auto x = frontier.back();
        frontier.pop_back();
        for (const auto* set : {&a, &b})
            for (auto y : set->elements) {
                const auto z = g.multiply(x, y);
                if (!seen[g.index(z)]) {
                    seen[g.index(z)] = true;
                    ++count;
                    frontier.push_back(z);
                }
            }
    }
    return count == g.order();
}

std::pair<GeneratorSet, GeneratorSet> sample_tnc_pair(const DihedralGroup& g, std::size_t delta,
                                                      std::mt19937_64& rng, std::size_t max_attempts) {
    check_delta_feasible(g, delta);
    for (std::size_t i = 0; i < max_attempts; ++i) {
        auto a = sample_symmetric_generators(g, delta, rng);
        auto b = sample_symmetric_generators(g, delta, rng);
        if (!check_tnc(g, a, b) && generates_group(g, a, b)) return {std::move(a), std::move(b)};
    }
    throw std::runtime_error("no TNC-satisfying generating pair found for " + g.name() + " with delta " +
                             std::to_string(delta) + " after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace qtanner
