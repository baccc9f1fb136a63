#include <stdexcept>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "qtanner/complex.hpp"
#include "qtanner/qcode.hpp"

#ifdef QTANNER_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace qtanner;

namespace {

LeftRightCayleyComplex complex_of(const std::string& fixture) {
    const auto& p = fixture_info(fixture).provenance;
    const DihedralGroup g(p.dihedral_n);
    return {g, parse_generator_set(g, p.a), parse_generator_set(g, p.b)};
}

}  // namespace

TEST_CASE("face counts") {
    CHECK(complex_of("d4-36").face_count() == 36);
    CHECK(complex_of("d10-250").face_count() == 250);
    for (const auto& f : fixtures()) {
        const auto c = complex_of(f.name);
        CHECK(c.face_count() == c.delta_a() * c.delta_b() * c.group().order() / 2);
    }
}

TEST_CASE("local views and double counting") {
    for (const char* name : {"d4-36", "d6-54", "d8-72"}) {
        const auto c = complex_of(name);
        const auto& g = c.group();
        std::vector<int> seen(c.face_count() * 2, 0);
        for (int side = 0; side < 2; ++side)
            for (std::size_t v = 0; v < g.order(); ++v) {
                const auto view = c.local_view(side, v);
                CHECK(view.size() == c.delta_a() * c.delta_b());
                CHECK(std::set<std::size_t>(view.begin(), view.end()).size() == view.size());
                for (auto f : view) ++seen[f * 2 + side];
            }
        for (int s : seen) CHECK(s == 2);  // each face in exactly two views per side
    }
}

TEST_CASE("faces match their defining vertices") {
    const auto c = complex_of("d6-54");
    const auto& g = c.group();
    for (const auto& f : c.faces()) {
        const auto ag = g.multiply(f.a, f.g);
        const auto gb = g.multiply(f.g, f.b);
        const auto agb = g.multiply(ag, f.b);
        const auto v = c.face_vertices(f.id);
        CHECK(v[0] == std::make_pair(0, g.index(f.g)));
        CHECK(v[1] == std::make_pair(1, g.index(ag)));
        CHECK(v[2] == std::make_pair(1, g.index(gb)));
        CHECK(v[3] == std::make_pair(0, g.index(agb)));
        // The same face is reached from agb with the inverse labels.
        const auto pos = [](const GeneratorSet& s, DihedralElement x) {
            return static_cast<std::size_t>(std::find(s.elements.begin(), s.elements.end(), x) - s.elements.begin());
        };
        CHECK(c.local_face(0, g.index(f.g), pos(c.a(), f.a), pos(c.b(), f.b)) == f.id);
        CHECK(c.local_face(0, g.index(agb), pos(c.a(), g.invert(f.a)), pos(c.b(), g.invert(f.b))) == f.id);
    }
}

TEST_CASE("TNC violations are rejected") {
    const DihedralGroup g(4);
    CHECK_THROWS_AS(LeftRightCayleyComplex(g, parse_generator_set(g, {"s", "r", "r^3"}),
                                           parse_generator_set(g, {"s", "sr^2", "r^2"})),
                    std::invalid_argument);
}

TEST_CASE("adjacency row sums") {
    for (const auto& f : fixtures()) {
        const auto c = complex_of(f.name);
        const std::size_t n = c.group().order();
        const auto m = lrcc_adjacency(c);
        for (std::size_t i = 0; i < 2 * n; ++i) {
            double sum = 0;
            for (std::size_t j = 0; j < 2 * n; ++j) sum += m[i * 2 * n + j];
            CHECK(sum == doctest::Approx(static_cast<double>(c.delta_a() + c.delta_b())));
        }
    }
}

TEST_CASE("jacobi on small known spectra") {
    // Path on three vertices: 0, +-sqrt 2.
    const auto e = jacobi_eigenvalues({0, 1, 0, 1, 0, 1, 0, 1, 0}, 3);
    CHECK(e[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(e[1] == doctest::Approx(0).epsilon(1e-12));
    CHECK(e[2] == doctest::Approx(-std::sqrt(2.0)));
    // 4-cycle: 2, 0, 0, -2.
    const auto c4 = jacobi_eigenvalues({0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0}, 4);
    CHECK(c4[0] == doctest::Approx(2));
    CHECK(c4[3] == doctest::Approx(-2));
}

TEST_CASE("spectral report on fixtures") {
    for (const auto& f : fixtures()) {
        const auto c = complex_of(f.name);
        const auto r = spectral_report(c);
        CHECK(r.symmetry_deviation < 1e-9);
        CHECK(r.double_cover_deviation < 1e-9);
        CHECK(r.lrcc.lambda1 == doctest::Approx(static_cast<double>(c.delta_a() + c.delta_b())));
        CHECK(r.left.lambda1 == doctest::Approx(static_cast<double>(c.delta_a())));
        CHECK(r.bound_holds);
        double trace = 0;
        for (double x : r.lrcc.eigenvalues) trace += x;
        CHECK(std::abs(trace) < 1e-9);
    }
}

#ifdef QTANNER_HAVE_EIGEN
TEST_CASE("jacobi agrees with Eigen") {
    for (const auto& f : fixtures()) {
        const auto c = complex_of(f.name);
        const std::size_t n = 2 * c.group().order();
        const auto m = lrcc_adjacency(c);
        Eigen::MatrixXd e(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) e(i, j) = m[i * n + j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
        std::vector<double> ref(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
        std::sort(ref.begin(), ref.end(), std::greater<>());
        const auto got = jacobi_eigenvalues(m, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    }
}
#endif
