#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qtanner/matrix_io.hpp"

using namespace qtanner;

TEST_CASE("alist text layout") {
    const BinaryMatrix m{{1, 1, 0}, {0, 1, 1}};
    std::ostringstream out;
    io::write_alist(out, m);
    CHECK(out.str() ==
          "3 2\n"
          "2 2\n"
          "1 2 1\n"
          "2 2\n"
          "1\n"
          "1 2\n"
          "2\n"
          "1 2\n"
          "2 3\n");
}

TEST_CASE("alist round trip and zero padding") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto m = oracle::random_matrix(1 + rng() % 9, 1 + rng() % 70, rng, 0.3);
        std::stringstream s;
        io::write_alist(s, m);
        CHECK(io::read_alist(s) == m);
    }
    std::istringstream padded("2 2\n2 2\n2 1\n1 2\n1 2\n2 0\n1 0\n1 2\n");
    CHECK(io::read_alist(padded) == BinaryMatrix{{1, 0}, {1, 1}});
    std::istringstream inconsistent("2 2\n2 2\n2 1\n1 2\n1 2\n2\n2\n1 2\n");
    CHECK_THROWS(io::read_alist(inconsistent));
}

TEST_CASE("alist files and JSON") {
    const BinaryMatrix m{{1, 0, 1, 1}, {0, 0, 0, 0}, {1, 1, 1, 1}};
    const auto dir = std::filesystem::temp_directory_path() / "qtanner_io_test";
    std::filesystem::create_directories(dir);
    io::save_alist(dir / "m.alist", m);
    CHECK(io::load_alist(dir / "m.alist") == m);
    std::filesystem::remove_all(dir);
    CHECK(io::matrix_from_json(io::to_json(m)) == m);
    CHECK(io::from_row_lists(io::to_row_lists(m), 4) == m);
    const auto j = io::to_json(m);
    CHECK(j["rows"] == 3);
    CHECK(j["cols"] == 4);
}
