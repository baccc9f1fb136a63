#include "qtanner/complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace qtanner {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

std::size_t position_of(const GeneratorSet& set, DihedralElement x) {
    const auto it = std::find(set.elements.begin(), set.elements.end(), x);
    if (it == set.elements.end()) throw std::logic_error("generator set is not closed under inversion");
    return static_cast<std::size_t>(it - set.elements.begin());
}

}  // namespace

LeftRightCayleyComplex::LeftRightCayleyComplex(DihedralGroup group, GeneratorSet a, GeneratorSet b)
    : group_(group), a_(std::move(a)), b_(std::move(b)) {
    validate_generator_set(group_, a_);
    validate_generator_set(group_, b_);
    if (auto w = check_tnc(group_, a_, b_)) {
        throw std::invalid_argument("total non-conjugacy violated: a=" + group_.format(w->a) + ", b=" +
                                    group_.format(w->b) + ", g=" + group_.format(w->g) + " gives ag = gb");
    }
    if (!generates_group(group_, a_, b_)) throw std::invalid_argument("A u B does not generate " + group_.name());

    const std::size_t order = group_.order();
    const std::size_t da = a_.size(), db = b_.size();
    std::vector<std::size_t> inv_a(da), inv_b(db);
    for (std::size_t i = 0; i < da; ++i) inv_a[i] = position_of(a_, group_.invert(a_.elements[i]));
    for (std::size_t j = 0; j < db; ++j) inv_b[j] = position_of(b_, group_.invert(b_.elements[j]));

    auto& view0 = views_[0];
    view0.assign(order * da * db, kUnset);
    const auto slot = [&](std::size_t g, std::size_t i, std::size_t j) { return (g * da + i) * db + j; };

    for (std::size_t gi = 0; gi < order; ++gi) {
        const auto g = group_.element(gi);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < db; ++j) {
                if (view0[slot(gi, i, j)] != kUnset) continue;
                const auto a = a_.elements[i], b = b_.elements[j];
                const auto agb = group_.multiply(a, group_.multiply(g, b));
                const std::size_t partner = slot(group_.index(agb), inv_a[i], inv_b[j]);
                if (partner == slot(gi, i, j) || view0[partner] != kUnset)
                    throw std::logic_error("degenerate face; total non-conjugacy should exclude this");
                const std::size_t id = faces_.size();
                view0[slot(gi, i, j)] = id;
                view0[partner] = id;
                const auto key1 = std::make_tuple(gi, group_.index(a), group_.index(b));
                const auto key2 = std::make_tuple(group_.index(agb), group_.index(group_.invert(a)),
                                                  group_.index(group_.invert(b)));
                if (key1 <= key2)
                    faces_.push_back({g, a, b, id});
                else
                    faces_.push_back({agb, group_.invert(a), group_.invert(b), id});
            }
    }
    if (faces_.size() * 2 != order * da * db) throw std::logic_error("face double count mismatch");

    // V1 vertex h sees phi_h(a, b) = {h, ah, hb, ahb}, the V0 triple (ah, a^-1, b).
    auto& view1 = views_[1];
    view1.assign(order * da * db, kUnset);
    for (std::size_t hi = 0; hi < order; ++hi) {
        const auto h = group_.element(hi);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < db; ++j) {
                const auto ah = group_.multiply(a_.elements[i], h);
                view1[slot(hi, i, j)] = view0[slot(group_.index(ah), inv_a[i], j)];
            }
    }
    for (int side = 0; side < 2; ++side)
        for (std::size_t v = 0; v < order; ++v) {
            auto faces = local_view(side, v);
            std::sort(faces.begin(), faces.end());
            if (std::adjacent_find(faces.begin(), faces.end()) != faces.end())
                throw std::logic_error("local view is not injective");
        }
}

std::vector<std::size_t> LeftRightCayleyComplex::local_view(int side, std::size_t v) const {
    const std::size_t width = delta_a() * delta_b();
    const auto begin = views_.at(static_cast<std::size_t>(side)).begin() + static_cast<std::ptrdiff_t>(v * width);
    return {begin, begin + static_cast<std::ptrdiff_t>(width)};
}

std::array<std::pair<int, std::size_t>, 4> LeftRightCayleyComplex::face_vertices(std::size_t face_id) const {
    const auto& f = faces_.at(face_id);
    const auto ag = group_.multiply(f.a, f.g);
    const auto gb = group_.multiply(f.g, f.b);
    const auto agb = group_.multiply(f.a, gb);
    return {{{0, group_.index(f.g)}, {1, group_.index(ag)}, {1, group_.index(gb)}, {0, group_.index(agb)}}};
}

// ------------------------------------------------------------------ spectra

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n, double tol) {
    if (a.size() != n * n) throw std::invalid_argument("jacobi: matrix size mismatch");
    const auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    double scale = 0;
    for (double x : a) scale = std::max(scale, std::abs(x));
    const double threshold = tol * std::max(scale, 1.0);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::abs(at(i, j)));
        if (off <= threshold) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= threshold * 1e-3) continue;
                const double theta = (at(q, q) - at(p, p)) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i, i);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> left_cayley_adjacency(const LeftRightCayleyComplex& c) {
    const auto& g = c.group();
    const std::size_t n = g.order();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (auto a : c.a().elements) m[x * n + g.index(g.multiply(a, g.element(x)))] += 1;
    return m;
}

std::vector<double> right_cayley_adjacency(const LeftRightCayleyComplex& c) {
    const auto& g = c.group();
    const std::size_t n = g.order();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (auto b : c.b().elements) m[x * n + g.index(g.multiply(g.element(x), b))] += 1;
    return m;
}

std::vector<double> lrcc_adjacency(const LeftRightCayleyComplex& c) {
    const std::size_t n = c.group().order();
    const auto left = left_cayley_adjacency(c);
    const auto right = right_cayley_adjacency(c);
    std::vector<double> m(4 * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = left[i * n + j] + right[i * n + j];
            m[i * 2 * n + (n + j)] = v;
            m[(n + j) * 2 * n + i] = v;
        }
    return m;
}

namespace {

GraphSpectrum analyse(const std::vector<double>& adj, std::size_t n, double degree, double tol) {
    GraphSpectrum s;
    s.eigenvalues = jacobi_eigenvalues(adj, n);
    s.degree = degree;
    s.lambda1 = s.eigenvalues.front();
    s.lambda2 = n > 1 ? s.eigenvalues[1] : s.lambda1;
    for (double e : s.eigenvalues)
        if (std::abs(e) < degree - 1e-6) s.nontrivial_abs = std::max(s.nontrivial_abs, std::abs(e));
    s.ramanujan = s.nontrivial_abs <= 2 * std::sqrt(degree - 1) + tol;
    return s;
}

}  // namespace

SpectralReport spectral_report(const LeftRightCayleyComplex& c, double tol) {
    const std::size_t n = c.group().order();
    const auto left = left_cayley_adjacency(c);
    const auto right = right_cayley_adjacency(c);
    std::vector<double> combined(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        if (left[i] != 0 && right[i] != 0) throw std::logic_error("left and right Cayley graphs share an edge");
        combined[i] = left[i] + right[i];
    }
    SpectralReport r;
    r.left = analyse(left, n, static_cast<double>(c.delta_a()), tol);
    r.right = analyse(right, n, static_cast<double>(c.delta_b()), tol);
    r.combined = analyse(combined, n, static_cast<double>(c.delta_a() + c.delta_b()), tol);
    r.lrcc = analyse(lrcc_adjacency(c), 2 * n, static_cast<double>(c.delta_a() + c.delta_b()), tol);

    const auto& e = r.lrcc.eigenvalues;
    for (std::size_t i = 0; i < e.size(); ++i)
        r.symmetry_deviation = std::max(r.symmetry_deviation, std::abs(e[i] + e[e.size() - 1 - i]));
    std::vector<double> pm;
    for (double x : r.combined.eigenvalues) {
        pm.push_back(x);
        pm.push_back(-x);
    }
    std::sort(pm.begin(), pm.end(), std::greater<>());
    for (std::size_t i = 0; i < e.size(); ++i)
        r.double_cover_deviation = std::max(r.double_cover_deviation, std::abs(e[i] - pm[i]));

    // Equal degrees assumed by the bound; use the larger when they differ.
    const double delta = static_cast<double>(std::max(c.delta_a(), c.delta_b()));
    r.bound = delta + std::min(r.left.lambda2, r.right.lambda2);
    r.bound_holds = r.lrcc.lambda2 <= r.bound + tol;
    return r;
}

nlohmann::json complex_summary(const LeftRightCayleyComplex& c, const SpectralReport* spectra) {
    nlohmann::json j;
    j["group"] = c.group().name();
    j["group_order"] = c.group().order();
    j["A"] = format_generator_set(c.group(), c.a());
    j["B"] = format_generator_set(c.group(), c.b());
    j["faces"] = c.face_count();
    if (spectra) {
        const auto graph = [](const GraphSpectrum& s) {
            return nlohmann::json{{"lambda1", s.lambda1},
                                  {"lambda2", s.lambda2},
                                  {"nontrivial_abs", s.nontrivial_abs},
                                  {"ramanujan", s.ramanujan},
                                  {"eigenvalues", s.eigenvalues}};
        };
        j["spectra"] = {{"left", graph(spectra->left)},
                        {"right", graph(spectra->right)},
                        {"combined", graph(spectra->combined)},
                        {"lrcc", graph(spectra->lrcc)},
                        {"bound", spectra->bound},
                        {"bound_holds", spectra->bound_holds},
                        {"symmetry_deviation", spectra->symmetry_deviation},
                        {"double_cover_deviation", spectra->double_cover_deviation}};
    }
    return j;
}

}  // namespace qtanner
