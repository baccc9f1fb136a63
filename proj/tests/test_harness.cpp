#include <algorithm>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qtanner/harness.hpp"

using namespace qtanner;

TEST_CASE("combined rate") {
    CHECK(combined_rate(0.1, 0.2, 1) == doctest::Approx(0.1 + 0.2 - 0.02));
    CHECK(combined_rate(0.1, 0.2, 4) == doctest::Approx(0.28 / 4));
    CHECK(combined_rate(0, 0, 3) == 0);
    CHECK(combined_rate(0.3, 0, 3) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("confidence half-width") {
    // eta = 1000, eta_f = 100, eta_s = 900.
    const double expected = 1.645 / std::sqrt(1000.0) * std::sqrt(900.0 * 100.0 / (1000.0 * 1000.0));
    CHECK(ci_half_width(1000, 100) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(ci_half_width(0, 0) == 0);
    CHECK(ci_half_width(500, 0) == 0);
    // Fixed failure fraction: the width shrinks as 1 / sqrt(eta).
    CHECK(ci_half_width(4000, 400) == doctest::Approx(ci_half_width(1000, 100) / 2));
}

TEST_CASE("k-copy rate") {
    CHECK(k_copy_rate(8e-7, 10) == doctest::Approx(1 - std::pow(1 - 8e-7, 10)).epsilon(1e-12));
    CHECK(k_copy_rate(8e-7, 10) == doctest::Approx(8e-6).epsilon(1e-5));
    CHECK(k_copy_rate(0.5, 1) == doctest::Approx(0.5));
}

TEST_CASE("zero noise never fails") {
    const auto code = load_fixture("d4-36");
    NoiseModel noise;
    noise.rounds = 3;
    RunOptions o;
    o.max_shots = 512;
    const auto r = run_memory(code, "d4-36", noise, {}, o);
    CHECK(r.p_l == 0);
    CHECK(r.x.failures + r.z.failures == 0);
    CHECK(r.x.shots == 512);
}

TEST_CASE("counts do not depend on the thread count") {
    const auto code = load_fixture("d4-36");
    NoiseModel noise;
    noise.p = 0.03;
    noise.rounds = 2;
    const auto problem = build_problem(code, MemoryBasis::Z, noise);
    RunOptions o;
    o.max_shots = 4096;
    o.target_failures = 40;
    o.seed = 17;
    o.threads = 1;
    const auto one = run_component(problem, {}, o);
    o.threads = 3;
    const auto three = run_component(problem, {}, o);
    CHECK(one.shots == three.shots);
    CHECK(one.failures == three.failures);
    CHECK(one.bp_converged == three.bp_converged);
    CHECK(one.failures >= 40);
    CHECK(one.shots % o.block == 0);
}

TEST_CASE("failure rate grows with p") {
    const auto code = load_fixture("d4-36");
    NoiseModel noise;
    noise.kind = NoiseKind::CodeCapacity;
    RunOptions o;
    o.max_shots = 20000;
    o.target_failures = 200;
    noise.p = 0.01;
    const auto lo = run_memory(code, "d4-36", noise, {}, o);
    noise.p = 0.04;
    const auto hi = run_memory(code, "d4-36", noise, {}, o);
    CHECK(lo.p_l < hi.p_l);
    // Distance three: failures come from weight-two errors, so quadrupling p
    // should raise p_L by well over a factor of four.
    CHECK(hi.p_l / lo.p_l > 6);
}

TEST_CASE("overhead") {
    const auto o = overhead(load_fixture("d4-36"), 3);
    CHECK(o.n == 36);
    CHECK(o.n_anc == 32);
    CHECK(o.space == 68);
    CHECK(o.d_x + o.d_z == 13);
    CHECK(o.o_st == 68 * 13 * 3);
    CHECK(o.o_st == 2652);
    CHECK(o.per_logical == doctest::Approx(2652.0 / 5));
}

TEST_CASE("CSV output") {
    ExperimentResult r;
    r.code = "d4-36";
    r.noise.p = 0.01;
    r.noise.rounds = 3;
    const auto row = csv_row(r);
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(kCsvHeader, kCsvHeader + std::strlen(kCsvHeader), ','));
    const auto path = std::filesystem::temp_directory_path() / "qtanner_csv_test.csv";
    std::filesystem::remove(path);
    append_csv(path, r);
    append_csv(path, r);
    std::ifstream in(path);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == kCsvHeader);
    std::filesystem::remove(path);
}

TEST_CASE("break-even targets") {
    const auto code = load_fixture("d4-36");
    CHECK(break_even_target(code, NoiseKind::Phenomenological, 0.01, 0) == doctest::Approx(0.05));
    CHECK(break_even_target(code, NoiseKind::Circuit, 0.001, 15) == doctest::Approx(15 * 5 * 0.001 / 10));
}

TEST_CASE("threshold search without a crossing reports the curve") {
    const auto code = load_fixture("d4-36");
    NoiseModel noise;
    noise.kind = NoiseKind::CodeCapacity;
    ThresholdOptions t;
    t.p_low = 1e-4;
    t.p_high = 2e-4;
    t.scan_points = 2;
    t.run.max_shots = 512;
    try {
        pseudo_threshold(code, "d4-36", noise, {}, t);
        FAIL("expected ThresholdError");
    } catch (const ThresholdError& e) {
        CHECK(e.curve().size() == 2);
        for (const auto& pt : e.curve()) CHECK(pt.p_l < pt.target);
    }
}

TEST_CASE("threshold search brackets a crossing") {
    const auto code = load_fixture("d4-36");
    NoiseModel noise;
    noise.kind = NoiseKind::CodeCapacity;
    ThresholdOptions t;
    t.p_low = 0.01;
    t.p_high = 0.3;
    t.relative_width = 0.3;
    t.run.max_shots = 4096;
    t.run.target_failures = 200;
    const auto r = pseudo_threshold(code, "d4-36", noise, {}, t);
    CHECK(r.p_low <= r.p_star);
    CHECK(r.p_star <= r.p_high);
    CHECK(r.p_high / r.p_low <= 1.3 + 1e-12);
    CHECK(r.curve.size() == r.runs.size());
}

TEST_CASE("distance sweep") {
    SweepOptions o;
    o.groups = {4};
    o.deltas = {3};
    o.targets = {{1, 1}, {2, 2}};
    o.instances = 4;
    o.distance_trials = 300;
    const auto cells = distance_sweep(o);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].d_a == 1);
    REQUIRE(cells[0].max_distance.has_value());
    CHECK(*cells[0].max_distance == 1);
    REQUIRE(cells[1].max_distance.has_value());
    CHECK(*cells[1].max_distance <= 3);

    // More instances extend the sample, so a cell's maximum cannot drop.
    o.instances = 8;
    const auto more = distance_sweep(o);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(more[i].attempted >= cells[i].attempted);
        if (cells[i].max_distance) CHECK(*more[i].max_distance >= *cells[i].max_distance);
    }
}
