#include "qtanner/matrix_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qtanner::io {

namespace {

void write_list(std::ostream& out, const std::vector<std::size_t>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ' ';
        out << xs[i] + 1;
    }
    out << '\n';
}

}  // namespace

void write_alist(std::ostream& out, const BinaryMatrix& m) {
    const BinaryMatrix t = m.transpose();
    std::vector<std::size_t> col_w(m.cols()), row_w(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) col_w[c] = t.row_weight(c);
    for (std::size_t r = 0; r < m.rows(); ++r) row_w[r] = m.row_weight(r);
    const auto max_of = [](const std::vector<std::size_t>& v) {
        return v.empty() ? std::size_t{0} : *std::max_element(v.begin(), v.end());
    };
    out << m.cols() << ' ' << m.rows() << '\n';
    out << max_of(col_w) << ' ' << max_of(row_w) << '\n';
    const auto write_plain = [&](const std::vector<std::size_t>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
        out << '\n';
    };
    write_plain(col_w);
    write_plain(row_w);
    for (std::size_t c = 0; c < m.cols(); ++c) write_list(out, t.row_support(c));
    for (std::size_t r = 0; r < m.rows(); ++r) write_list(out, m.row_support(r));
}

BinaryMatrix read_alist(std::istream& in) {
    std::vector<long> tok;
    long x;
    while (in >> x) tok.push_back(x);
    if (!in.eof()) throw std::runtime_error("alist: non-numeric token");
    if (tok.size() < 4) throw std::runtime_error("alist: truncated header");
    if (tok[0] < 0 || tok[1] < 0) throw std::runtime_error("alist: bad dimensions");
    const auto cols = static_cast<std::size_t>(tok[0]);
    const auto rows = static_cast<std::size_t>(tok[1]);
    const auto max_cw = static_cast<std::size_t>(tok[2]);
    const auto max_rw = static_cast<std::size_t>(tok[3]);
    std::size_t pos = 4;
    if (tok.size() < pos + cols + rows) throw std::runtime_error("alist: truncated weight lists");
    const std::vector<long> col_w(tok.begin() + 4, tok.begin() + static_cast<std::ptrdiff_t>(4 + cols));
    const std::vector<long> row_w(tok.begin() + static_cast<std::ptrdiff_t>(4 + cols),
                                  tok.begin() + static_cast<std::ptrdiff_t>(4 + cols + rows));
    pos += cols + rows;

    // Two layouts are accepted: exact lists, or lists zero-padded to the max weight.
    std::size_t exact = 0;
    for (auto w : col_w) exact += static_cast<std::size_t>(w);
    for (auto w : row_w) exact += static_cast<std::size_t>(w);
    const std::size_t padded = cols * max_cw + rows * max_rw;
    const std::size_t remaining = tok.size() - pos;
    bool pad;
    if (remaining == exact)
        pad = false;
    else if (remaining == padded)
        pad = true;
    else
        throw std::runtime_error("alist: index list length matches neither exact nor padded layout");

    BinaryMatrix by_col(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t len = pad ? max_cw : static_cast<std::size_t>(col_w[c]);
        std::size_t seen = 0;
        for (std::size_t i = 0; i < len; ++i) {
            const long r = tok[pos++];
            if (r == 0) continue;
            if (r < 0 || static_cast<std::size_t>(r) > rows) throw std::runtime_error("alist: row index out of range");
            by_col.set(static_cast<std::size_t>(r - 1), c);
            ++seen;
        }
        if (seen != static_cast<std::size_t>(col_w[c])) throw std::runtime_error("alist: column weight mismatch");
    }
    BinaryMatrix by_row(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t len = pad ? max_rw : static_cast<std::size_t>(row_w[r]);
        for (std::size_t i = 0; i < len; ++i) {
            const long c = tok[pos++];
            if (c == 0) continue;
            if (c < 0 || static_cast<std::size_t>(c) > cols) throw std::runtime_error("alist: column index out of range");
            by_row.set(r, static_cast<std::size_t>(c - 1));
        }
    }
    if (!(by_row == by_col)) throw std::runtime_error("alist: row and column lists disagree");
    return by_row;
}

void save_alist(const std::filesystem::path& path, const BinaryMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_alist(out, m);
}

BinaryMatrix load_alist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_alist(in);
}

nlohmann::json to_row_lists(const BinaryMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<int> bits(m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c) bits[c] = m.get(r, c);
        rows.push_back(bits);
    }
    return rows;
}

BinaryMatrix from_row_lists(const nlohmann::json& j, std::size_t cols) {
    if (!j.is_array()) throw std::runtime_error("matrix rows must be a JSON array");
    std::vector<std::vector<int>> rows;
    for (const auto& r : j) rows.push_back(r.get<std::vector<int>>());
    return BinaryMatrix::from_rows(rows, cols);
}

nlohmann::json to_json(const BinaryMatrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", to_row_lists(m)}};
}

BinaryMatrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    BinaryMatrix m = from_row_lists(j.at("data"), cols);
    if (m.rows() != rows) throw std::runtime_error("matrix JSON: row count mismatch");
    return m;
}

}  // namespace qtanner::io
