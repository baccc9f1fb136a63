#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "qtanner/gf2.hpp"

namespace qtanner::io {

// alist layout (see docs/formats.md):
//   line 1: <cols> <rows>
//   line 2: <max column weight> <max row weight>
//   line 3: column weights
//   line 4: row weights
//   next <cols> lines: 1-based row indices of each column
//   next <rows> lines: 1-based column indices of each row
// Index lists are ascending and space separated, without zero padding.
// Zero entries are tolerated (and skipped) on read.
void write_alist(std::ostream& out, const BinaryMatrix& m);
BinaryMatrix read_alist(std::istream& in);
void save_alist(const std::filesystem::path& path, const BinaryMatrix& m);
BinaryMatrix load_alist(const std::filesystem::path& path);

/// {"rows": r, "cols": c, "data": [[0,1,...], ...]}
nlohmann::json to_json(const BinaryMatrix& m);
BinaryMatrix matrix_from_json(const nlohmann::json& j);

/// Plain 0/1 row lists, the form used inside code records.
nlohmann::json to_row_lists(const BinaryMatrix& m);
BinaryMatrix from_row_lists(const nlohmann::json& j, std::size_t cols);

}  // namespace qtanner::io
